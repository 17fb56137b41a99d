//! Fractional integrals and derivatives with respect to a clock function φ.
//!
//! All operators work in the transformed variable u = φ(t), which turns
//! I^{α,φ} into a classical Riemann-Liouville integral on the (possibly
//! non-uniform) nodes uₖ = φ(tₖ). See [`IntegralOperator`] for the quadrature.

mod clock;
mod derivative;
mod integral;
mod series;

use thiserror::Error;

pub use clock::ClockMap;
pub use derivative::{
    caputo_derivative, caputo_derivative_with, estimate_jets, frac_integral, phi_diff, psi_basis,
    psi_power_derivative, rl_derivative, rl_derivative_with, subtract_jet,
};
pub use integral::IntegralOperator;
pub use series::{FracOrder, TimeGrid, TimeSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TimeFracError {
    #[error("fractional order must be a finite real > 0, got {0}")]
    InvalidOrder(f64),
    #[error("clock is not increasing: phi_prime({t}) = {phi_prime}")]
    NonMonotoneClock { t: f64, phi_prime: f64 },
    #[error("invalid clock: {0}")]
    InvalidClock(String),
    #[error("invalid time interval [{t_start}, {t_end}]")]
    InvalidInterval { t_start: f64, t_end: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid too short: {nodes} nodes, need at least {needed}")]
    GridTooShort { nodes: usize, needed: usize },
    #[error("expected {expected} initial φ-derivatives, got {got}")]
    WrongJetLength { expected: usize, got: usize },
    #[error("D^{{{beta}}} of Psi_{j} is not locally integrable (j - beta <= -1)")]
    SingularSeed { j: usize, beta: f64 },
}

/// Indices of the nodes treated as interior when measuring accuracy: the
/// flagged head of a derivative is skipped, and so is a start-up layer of
/// relative width `layer` (the product rule is only first order in the first
/// few cells when the integrand behaves like (φ−φ₀)^γ with γ < 1).
pub fn interior_indices(grid: &TimeGrid, skip_head: usize, layer: f64) -> Vec<usize> {
    let t0 = grid.start();
    let span = grid.end() - t0;
    (skip_head..grid.len()).filter(|&k| grid.nodes()[k] - t0 >= layer * span).collect()
}

/// Default start-up layer (relative width) excluded from interior accuracy checks.
pub const DEFAULT_INTERIOR_LAYER: f64 = 0.05;
