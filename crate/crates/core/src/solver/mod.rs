//! Forward solvers for
//!
//! ᶜD^{β₀,φ}w + Σ_{i=1}^{m−1} Θᵢ(t) ᶜD^{βᵢ,φ}w + Θ_m(t)(−Δ)^λ w = h,
//!
//! with β₀ > β₁ > … > β_{m−1} > β_m = 0 and φ-derivative initial data
//! w_φ^{[j]}(x, 0) = w_j(x), j < n₀. Every spatial mode decouples after a
//! Fourier transform; the time problem of one mode is solved either by a
//! Picard series of fractional integrals ([`kernel`]) or, for constant
//! coefficients, by multivariate Mittag-Leffler closed forms ([`constant`]).
//! [`dirac`] assembles the Witt-basis first-order factor of the operator.

pub mod constant;
pub mod dirac;
pub mod hankel;
pub mod kernel;
mod spatial;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::{LatticeError, PeriodicLattice};
use crate::specfun::SpecFunError;
use crate::timefrac::{ClockMap, FracOrder, TimeFracError, TimeGrid};

pub use constant::solve_scalar_constant;
pub use dirac::{solve_dirac, solve_dirac_constant, DiracOperator, DiracSolution, ModeMultivector};
pub use hankel::{hankel_inverse_fourier, HankelQuadrature};
pub use kernel::{
    convergence_check, index_sets, kernel_K, mode_residual, source_series_G, ConvergenceReport, KernelVariant,
    ModeContext,
};
pub use spatial::{frac_laplacian, solve_scalar, ScalarSolution, SolveDiagnostics, SpaceLayout, SpaceTimeField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("kernel series for |s| = {xi} did not converge within {terms} terms; the hypothesis I^(b0-bi) e^(nu t) <= C e^(nu t) with C < 1 is unmet (C = {c_estimate:.3e} at nu = {nu})")]
    NonConvergence { xi: f64, terms: usize, c_estimate: f64, nu: f64 },
    #[error("kernel series for |s| = {xi} lost precision: terms grew to {largest:.3e} against a result of size {result:.3e}")]
    PrecisionLoss { xi: f64, largest: f64, result: f64 },
    #[error("Hankel integral: profile tail does not decay up to r = {r}")]
    TailNotDecaying { r: f64 },
    #[error("mode {mode}: {source}")]
    ClosedForm { mode: usize, source: SpecFunError },
    #[error(transparent)]
    TimeFrac(#[from] TimeFracError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A time-dependent coefficient Θᵢ(t).
#[derive(Clone)]
pub enum TimeCoefficient {
    Constant(f64),
    Function { label: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl fmt::Debug for TimeCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl TimeCoefficient {
    pub fn constant(v: f64) -> Self {
        TimeCoefficient::Constant(v)
    }

    pub fn function(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        TimeCoefficient::Function { label: label.into(), f: Arc::new(f) }
    }

    /// scale · t^p.
    pub fn power(scale: f64, p: f64) -> Self {
        Self::function(format!("{scale}*t^{p}"), move |t| scale * t.powf(p))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeCoefficient::Constant(v) => *v,
            TimeCoefficient::Function { f, .. } => f(t),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            TimeCoefficient::Constant(v) => Some(*v),
            TimeCoefficient::Function { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TimeCoefficient::Constant(v) => format!("{v}"),
            TimeCoefficient::Function { label, .. } => label.clone(),
        }
    }

    pub fn sample(&self, grid: &TimeGrid) -> Vec<f64> {
        grid.nodes().iter().map(|&t| self.eval(t)).collect()
    }
}

/// Spatial description of a datum (initial value or source profile).
#[derive(Clone)]
pub enum SpatialData {
    Zero,
    /// Fourier amplitude of the single mode.
    Amplitude(Complex64),
    /// Samples on the lattice.
    Field(Vec<Complex64>),
    /// Fourier-side radial profile r ↦ ŵ(r) for the radial mode.
    RadialSpectrum(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for SpatialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpatialData::Zero => write!(f, "Zero"),
            SpatialData::Amplitude(a) => write!(f, "Amplitude({a})"),
            SpatialData::Field(v) => write!(f, "Field({} values)", v.len()),
            SpatialData::RadialSpectrum(_) => write!(f, "RadialSpectrum(..)"),
        }
    }
}

impl SpatialData {
    pub fn radial(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        SpatialData::RadialSpectrum(Arc::new(f))
    }
}

/// A separable source h(x, t) = space(x) · time(t).
#[derive(Clone, Debug)]
pub struct SourceTerm {
    pub space: SpatialData,
    pub time: TimeCoefficient,
}

/// How the spatial variable is discretized.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceMode {
    /// One Fourier mode with wave vector `xi`; data are complex amplitudes.
    SingleMode { xi: Vec<f64> },
    /// Periodic lattice; data are node samples.
    Lattice(PeriodicLattice),
    /// Radial data on ℝ^dim given by their Fourier profiles; the solution is
    /// reported at the radii |x| listed.
    Radial { dim: usize, radii: Vec<f64> },
}

/// The multiplier |s|^{2λ} of (−Δ)^λ at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSymbol {
    pub xi_magnitude: f64,
    pub multiplier: f64,
}

impl SpectralSymbol {
    pub fn new(xi_magnitude: f64, lambda: f64) -> Self {
        let multiplier = if xi_magnitude == 0.0 { 0.0 } else { xi_magnitude.powf(2.0 * lambda) };
        Self { xi_magnitude, multiplier }
    }
}

/// Truncation controls for the Picard series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSeriesConfig {
    /// A series stops once its latest term is below abs_tol · max(1, |sum|).
    pub abs_tol: f64,
    pub max_picard_terms: usize,
    /// Largest tolerated ratio between the biggest term and the sum.
    pub max_growth: f64,
    /// Number of time steps front ends use when they build the grid.
    pub time_steps: usize,
    /// Exponential weight used when reporting the contraction constant.
    pub nu: f64,
}

impl Default for KernelSeriesConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_picard_terms: 200, max_growth: 1e10, time_steps: 2048, nu: 4.0 }
    }
}

/// The forward problem. `betas` holds β₀…β_{m−1}; β_m = 0 is implicit and
/// `coeffs[i−1]` is Θᵢ for i = 1…m, so the last coefficient multiplies
/// (−Δ)^λ.
#[derive(Clone, Debug)]
pub struct CauchyProblem {
    pub betas: Vec<f64>,
    pub lambda: f64,
    pub coeffs: Vec<TimeCoefficient>,
    pub clock: ClockMap,
    pub grid: Arc<TimeGrid>,
    pub initial_data: Vec<SpatialData>,
    pub source: Option<SourceTerm>,
    pub space: SpaceMode,
}

impl CauchyProblem {
    /// Validates the time side and sets zero data for a single mode |s| = 1.
    pub fn new(
        betas: Vec<f64>,
        lambda: f64,
        coeffs: Vec<TimeCoefficient>,
        clock: ClockMap,
        grid: Arc<TimeGrid>,
    ) -> Result<Self, SolverError> {
        let n0 = betas.first().map(|&b| FracOrder::new(b).map(|o| o.n).unwrap_or(1)).unwrap_or(1);
        let p = Self {
            betas,
            lambda,
            coeffs,
            clock,
            grid,
            initial_data: vec![SpatialData::Zero; n0],
            source: None,
            space: SpaceMode::SingleMode { xi: vec![1.0] },
        };
        p.validate_time()?;
        Ok(p)
    }

    pub fn with_space(mut self, space: SpaceMode) -> Self {
        self.space = space;
        self
    }

    pub fn with_initial_data(mut self, data: Vec<SpatialData>) -> Self {
        self.initial_data = data;
        self
    }

    pub fn with_source(mut self, source: Option<SourceTerm>) -> Self {
        self.source = source;
        self
    }

    pub fn m(&self) -> usize {
        self.betas.len()
    }

    /// βᵢ for 0 ≤ i ≤ m, with β_m = 0.
    pub fn order(&self, i: usize) -> f64 {
        if i < self.betas.len() {
            self.betas[i]
        } else {
            0.0
        }
    }

    /// nᵢ = −⌊−βᵢ⌋.
    pub fn n_of(&self, i: usize) -> usize {
        let b = self.order(i);
        if b == 0.0 {
            0
        } else {
            (-(-b).floor()) as usize
        }
    }

    pub fn n0(&self) -> usize {
        self.n_of(0)
    }

    /// Θ_m, the coefficient of (−Δ)^λ.
    pub fn laplacian_coeff(&self) -> &TimeCoefficient {
        &self.coeffs[self.coeffs.len() - 1]
    }

    fn validate_time(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidProblem(m));
        if self.betas.is_empty() {
            return bad("betas must contain at least beta_0".into());
        }
        if let Some(b) = self.betas.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
            return bad(format!("betas must be finite and > 0, got {b}"));
        }
        if self.betas.windows(2).any(|w| w[1] >= w[0]) {
            return bad("betas must be strictly decreasing".into());
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0 && self.lambda <= 1.0) {
            return bad(format!("lambda must lie in (0, 1], got {}", self.lambda));
        }
        if self.coeffs.len() != self.betas.len() {
            return bad(format!("coeffs must have m = {} entries, got {}", self.betas.len(), self.coeffs.len()));
        }
        self.clock.validate_on(&self.grid)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            for &t in self.grid.nodes() {
                let v = c.eval(t);
                if !v.is_finite() {
                    return bad(format!("coeffs[{i}] is not finite at t = {t}"));
                }
            }
        }
        // Θ_m may vanish at t₀ (as t^p does) but nowhere after it.
        let last = self.laplacian_coeff();
        let t0 = self.grid.start();
        if let Some(&t) = self.grid.nodes().iter().find(|&&t| last.eval(t) < 0.0 || (t > t0 && last.eval(t) == 0.0)) {
            return bad(format!("the Laplacian coefficient must be > 0, got {} at t = {t}", last.eval(t)));
        }
        Ok(())
    }

    fn validate_datum(&self, what: &str, d: &SpatialData) -> Result<(), SolverError> {
        let ok = match (&self.space, d) {
            (_, SpatialData::Zero) => true,
            (SpaceMode::SingleMode { .. }, SpatialData::Amplitude(_)) => true,
            (SpaceMode::Lattice(l), SpatialData::Field(v)) => {
                if v.len() != l.len() {
                    return Err(SolverError::InvalidProblem(format!(
                        "{what} has {} values, the lattice has {} nodes",
                        v.len(),
                        l.len()
                    )));
                }
                true
            }
            (SpaceMode::Radial { .. }, SpatialData::RadialSpectrum(_)) => true,
            _ => false,
        };
        if !ok {
            return Err(SolverError::InvalidProblem(format!("{what} does not match the space mode")));
        }
        Ok(())
    }

    /// Full validation, including the data against the space mode.
    pub fn validate(&self) -> Result<(), SolverError> {
        self.validate_time()?;
        if self.initial_data.len() != self.n0() {
            return Err(SolverError::InvalidProblem(format!(
                "initial_data must have n0 = {} entries, got {}",
                self.n0(),
                self.initial_data.len()
            )));
        }
        match &self.space {
            SpaceMode::SingleMode { xi } if xi.is_empty() => {
                return Err(SolverError::InvalidProblem("space.xi must not be empty".into()))
            }
            SpaceMode::Radial { dim, radii } if *dim == 0 || radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) => {
                return Err(SolverError::InvalidProblem("radial mode needs dim >= 1 and radii >= 0".into()))
            }
            _ => {}
        }
        for (j, d) in self.initial_data.iter().enumerate() {
            self.validate_datum(&format!("initial_data[{j}]"), d)?;
        }
        if let Some(s) = &self.source {
            self.validate_datum("source.space", &s.space)?;
        }
        Ok(())
    }
}
