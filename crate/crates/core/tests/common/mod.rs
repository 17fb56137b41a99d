#![allow(dead_code)]
pub mod algebra;
pub mod frozen;
pub mod problems;
pub mod suite;
