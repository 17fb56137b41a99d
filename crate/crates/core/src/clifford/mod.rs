//! Complexified Clifford algebra Cl₀,ₙ extended by the Witt generators e₊, e₋.
//!
//! Generators are ordered e₁,…,e_n, e₊, e₋ and a blade is a bit mask over that
//! order, so Cl₀,ₙ is the set of masks below bit n. Squares: eₖ² = −1,
//! e₊² = +1, e₋² = −1. The Witt nilpotents are 𝔣 = (e₊ − e₋)/2 and
//! 𝔣⁺ = (e₊ + e₋)/2.

mod field;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Num;
use thiserror::Error;

pub use field::{dirac_apply, dirac_apply_fd, monogenic_residual, monogenic_residual_masked, MultivectorField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliffordError {
    #[error("algebra dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for n = {n}")]
    BadGenerator { index: usize, n: usize },
    #[error("{0}")]
    Field(String),
}

/// Largest supported n (two extra bits are needed for e₊, e₋).
pub const MAX_DIM: usize = 30;

/// A basis blade as a bit mask over (e₁,…,e_n, e₊, e₋).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade {
    pub mask: u32,
}

impl Blade {
    pub const SCALAR: Blade = Blade { mask: 0 };

    /// The blade of the single generator with 0-based index i.
    pub fn generator(i: usize) -> Blade {
        Blade { mask: 1 << i }
    }

    pub fn e_plus(n: usize) -> Blade {
        Blade::generator(n)
    }

    pub fn e_minus(n: usize) -> Blade {
        Blade::generator(n + 1)
    }

    pub fn grade(self) -> u32 {
        self.mask.count_ones()
    }

    /// Square of generator i in the algebra with n Euclidean generators.
    fn square(i: u32, n: usize) -> i32 {
        if i as usize == n {
            1
        } else {
            -1
        }
    }

    /// e_a e_b = sign · e_{a⊕b}. The sign counts the transpositions needed to
    /// merge the two ascending generator lists, then contracts repeated
    /// generators with their squares.
    pub fn product(self, other: Blade, n: usize) -> (i32, Blade) {
        let a = self.mask;
        let b = other.mask;
        let mut swaps = 0u32;
        let mut bits = b;
        while bits != 0 {
            let i = bits.trailing_zeros();
            swaps += (a >> (i + 1)).count_ones();
            bits &= bits - 1;
        }
        let mut sign = if swaps % 2 == 0 { 1 } else { -1 };
        let mut common = a & b;
        while common != 0 {
            let i = common.trailing_zeros();
            sign *= Blade::square(i, n);
            common &= common - 1;
        }
        (sign, Blade { mask: a ^ b })
    }

    /// Readable name such as "e1e3e+" ("1" for the scalar blade).
    pub fn label(self, n: usize) -> String {
        if self.mask == 0 {
            return "1".into();
        }
        let mut s = String::new();
        for i in 0..(n + 2) {
            if self.mask & (1 << i) != 0 {
                if i < n {
                    s.push_str(&format!("e{}", i + 1));
                } else if i == n {
                    s.push_str("e+");
                } else {
                    s.push_str("e-");
                }
            }
        }
        s
    }
}

/// Coefficient ring of a [`Multivector`]: complex doubles in numerics,
/// exact rationals in the algebra tests.
pub trait Coefficient: Clone + PartialEq + Num + Neg<Output = Self> {}
impl<T: Clone + PartialEq + Num + Neg<Output = T>> Coefficient for T {}

/// A sparse multivector over the n-generator algebra with its Witt extension.
/// Structural zeros are never stored.
#[derive(Clone, PartialEq)]
pub struct Multivector<T: Coefficient = Complex64> {
    n: usize,
    terms: BTreeMap<Blade, T>,
}

impl<T: Coefficient + fmt::Debug> fmt::Debug for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(b, c)| format!("{c:?}·{}", b.label(self.n))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<T: Coefficient> Multivector<T> {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "algebra dimension {n} exceeds {MAX_DIM}");
        Self { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: T) -> Self {
        Self::from_blade(n, Blade::SCALAR, c)
    }

    pub fn from_blade(n: usize, blade: Blade, c: T) -> Self {
        let mut m = Self::zero(n);
        m.add_term(blade, c);
        m
    }

    /// e_k for 1 ≤ k ≤ n.
    pub fn e(n: usize, k: usize) -> Result<Self, CliffordError> {
        if k == 0 || k > n {
            return Err(CliffordError::BadGenerator { index: k, n });
        }
        Ok(Self::from_blade(n, Blade::generator(k - 1), T::one()))
    }

    pub fn e_plus(n: usize) -> Self {
        Self::from_blade(n, Blade::e_plus(n), T::one())
    }

    pub fn e_minus(n: usize) -> Self {
        Self::from_blade(n, Blade::e_minus(n), T::one())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, blade: Blade) -> T {
        self.terms.get(&blade).cloned().unwrap_or_else(T::zero)
    }

    /// Adds c·blade in place, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, blade: Blade, c: T) {
        assert!(
            (blade.mask as u64) < (1u64 << (self.n + 2)),
            "blade {:#b} outside the {}-generator algebra",
            blade.mask,
            self.n + 2
        );
        let entry = self.terms.entry(blade).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&blade);
        }
    }

    pub fn scale(&self, c: T) -> Self {
        let mut out = Self::zero(self.n);
        for (b, v) in &self.terms {
            out.add_term(*b, v.clone() * c.clone());
        }
        out
    }

    fn same_dim(&self, other: &Self) -> Result<(), CliffordError> {
        if self.n != other.n {
            return Err(CliffordError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CliffordError> {
        self.same_dim(other)?;
        let mut out = self.clone();
        for (b, v) in &other.terms {
            out.add_term(*b, v.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CliffordError> {
        self.checked_add(&-other)
    }

    /// The bilinear extension of the blade product.
    pub fn geometric_product(&self, other: &Self) -> Result<Self, CliffordError> {
        self.same_dim(other)?;
        let mut out = Self::zero(self.n);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                let (sign, blade) = ba.product(*bb, self.n);
                let c = ca.clone() * cb.clone();
                out.add_term(blade, if sign < 0 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// The part of grade g.
    pub fn grade_part(&self, g: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (b, v) in &self.terms {
            if b.grade() == g {
                out.add_term(*b, v.clone());
            }
        }
        out
    }
}

impl Multivector<Complex64> {
    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// The Witt pair (𝔣, 𝔣⁺) = ((e₊ − e₋)/2, (e₊ + e₋)/2).
pub fn witt_pair<T: Coefficient>(n: usize) -> (Multivector<T>, Multivector<T>) {
    let half = T::one() / (T::one() + T::one());
    let p = Multivector::<T>::e_plus(n);
    let m = Multivector::<T>::e_minus(n);
    let f = (&p - &m).scale(half.clone());
    let fp = (&p + &m).scale(half);
    (f, fp)
}

impl<T: Coefficient> Neg for &Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        let mut out = Multivector::zero(self.n);
        for (b, v) in &self.terms {
            out.add_term(*b, -v.clone());
        }
        out
    }
}

impl<T: Coefficient> Neg for Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        -&self
    }
}

// The operator forms panic on a dimension mismatch; use the checked methods
// when operands come from untrusted input.
macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<T: Coefficient> $tr<&Multivector<T>> for &Multivector<T> {
            type Output = Multivector<T>;
            fn $m(self, rhs: &Multivector<T>) -> Multivector<T> {
                self.$checked(rhs).expect("multivector dimension mismatch")
            }
        }
        impl<T: Coefficient> $tr<Multivector<T>> for Multivector<T> {
            type Output = Multivector<T>;
            fn $m(self, rhs: Multivector<T>) -> Multivector<T> {
                (&self).$checked(&rhs).expect("multivector dimension mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, geometric_product);
