//! Special functions used by the solvers: Gamma, Bessel J_ν, two-parameter and
//! multivariate Mittag-Leffler, and the Kilbas-Saigo family E^λ_{α,β,γ}.
//!
//! Series evaluators return a [`SeriesValue`] carrying an a-posteriori error
//! estimate. Arguments are expected in the moderate range produced by the
//! solvers; no global asymptotic expansions are implemented, and a series whose
//! rounding error would exceed [`SeriesConfig::max_rounding`] is refused with
//! [`SpecFunError::PrecisionLoss`].

mod bessel;
mod gamma;
mod kilbas_saigo;
mod mittag_leffler;

use num_complex::Complex64;
use thiserror::Error;

pub use bessel::bessel_j;
pub use gamma::{fault, gamma, ln_gamma_signed, log_gamma, recip_gamma, GAMMA_MAX_ARG};
pub use kilbas_saigo::{kilbas_saigo, kilbas_saigo_coefficients, KilbasSaigoParams};
pub use mittag_leffler::{ml_multivariate, ml_two_param, MultiMLParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("Gamma pole at x = {x}")]
    GammaPole { x: f64 },
    #[error("{function}: series did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },
    #[error("{function}: cancellation too severe (largest term {largest_term:.3e}, rounding estimate {estimate:.3e})")]
    PrecisionLoss { function: &'static str, largest_term: f64, estimate: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Rounding-error model for a sum of terms whose magnitudes add up to S: each
/// term carries a few ulps from exp/ln-Gamma, so the estimate is this factor
/// times S.
pub(crate) const ROUNDING_ULPS: f64 = 64.0 * f64::EPSILON;

/// Truncation controls shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Absolute size below which a term (or shell majorant) counts as negligible.
    pub abs_tol: f64,
    /// Maximum number of terms (shells for the multivariate function).
    pub max_terms: usize,
    /// Largest acceptable rounding-error estimate, relative to max(1, |value|).
    pub max_rounding: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-17, max_terms: 10_000, max_rounding: 1e-6 }
    }
}

/// A series value with its error estimate and the number of terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub terms: usize,
}
