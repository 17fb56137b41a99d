//! Recovery of a time-dependent coefficient Θ(t) in
//!
//!   ᶜD^{α,φ}w = Θ(t) Δw
//!
//! from two point observations. With data w₁ (as ∂-datum for 1 < α ≤ 2, as
//! the initial value for 0 < α ≤ 1) and the companion problem with data Δw₁,
//! v = Δw by linearity. At a point q set h₂ = v(q, ·) and
//! h₁ = w(q, ·) − w₁(q)(φ − φ₀) (wave) or h₁ = w(q, ·) − w₁(q) (heat); then
//! D^{α,φ}h₁ = Θ h₂, so Θ = D^{α,φ}h₁ / h₂.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::PeriodicLattice;
use crate::solver::{
    convergence_check, frac_laplacian, solve_scalar, CauchyProblem, KernelSeriesConfig, SolverError, SpaceMode,
    SpatialData, TimeCoefficient,
};
use crate::timefrac::{rl_derivative, ClockMap, FracOrder, TimeFracError, TimeSeries};

type C = Complex64;

/// |h₂| below this fraction of its sup-norm is treated as zero.
pub const H2_MASK_RELATIVE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InverseError {
    #[error("invalid inverse problem: {0}")]
    InvalidInput(String),
    #[error("w1 is not supported in the declared box: |w1| reaches {max_outside:.3e} outside it (node {node})")]
    SupportViolation { node: usize, max_outside: f64 },
    #[error("every node is flagged or has vanishing h2; refine the grid or check the observation point")]
    AllMasked,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    TimeFrac(#[from] TimeFracError),
}

/// An axis-aligned box Ω inside the lattice cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// exp(−1/x) blended against exp(−1/(1−x)): 0 for x ≤ 0, 1 for x ≥ 1, C^∞.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

impl SupportBox {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.lower).zip(&self.upper).all(|((v, lo), hi)| *v >= *lo && *v <= *hi)
    }

    /// Multiplies `values` by a smooth cutoff that is 1 in the middle of the
    /// box and falls to 0 at its faces over a margin of `margin` on each side.
    pub fn taper(&self, lattice: &PeriodicLattice, values: &[C], margin: f64) -> Vec<C> {
        (0..lattice.len())
            .map(|k| {
                let x = lattice.coords(k);
                let w: f64 = x
                    .iter()
                    .zip(&self.lower)
                    .zip(&self.upper)
                    .map(|((v, lo), hi)| smooth_step((v - lo) / margin) * smooth_step((hi - v) / margin))
                    .product();
                values[k] * w
            })
            .collect()
    }

    /// Errors unless |w₁| ≤ 1e-12·max|w₁| at every node outside the box.
    pub fn check(&self, lattice: &PeriodicLattice, values: &[C]) -> Result<(), InverseError> {
        if self.lower.len() != lattice.ndim() || self.upper.len() != lattice.ndim() {
            return Err(InverseError::InvalidInput("support box dimension differs from the lattice".into()));
        }
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let outside = (0..lattice.len())
            .filter(|&k| !self.contains(&lattice.coords(k)))
            .map(|k| (k, values[k].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((node, v)) = outside {
            if v > 1e-12 * peak {
                return Err(InverseError::SupportViolation { node, max_outside: v });
            }
        }
        Ok(())
    }
}

/// The traces h₁, h₂ at one point, with the order and clock they refer to.
#[derive(Debug, Clone)]
pub struct ObservationPair {
    /// Lattice node of the observation point (0 for supplied traces).
    pub q: usize,
    pub h1: TimeSeries,
    pub h2: TimeSeries,
    pub alpha: FracOrder,
    pub clock: ClockMap,
    /// Whether supp w₁ ⊂ Ω was verified; None when no box was declared.
    pub support_checked: Option<bool>,
}

impl ObservationPair {
    pub fn new(h1: TimeSeries, h2: TimeSeries, alpha: FracOrder, clock: ClockMap) -> Result<Self, InverseError> {
        if !h1.same_grid(&h2) {
            return Err(InverseError::InvalidInput("h1 and h2 must share one grid".into()));
        }
        if !(alpha.alpha > 0.0 && alpha.alpha <= 2.0) {
            return Err(InverseError::InvalidInput(format!("alpha must lie in (0, 2], got {}", alpha.alpha)));
        }
        clock.validate_on(&h1.grid)?;
        Ok(Self { q: 0, h1, h2, alpha, clock, support_checked: None })
    }

    pub fn is_wave(&self) -> bool {
        self.alpha.alpha > 1.0
    }
}

/// Runs the two forward problems and extracts the traces at node `q`.
///
/// `problem` supplies α = β₀, the known Θ (m = 1, λ = 1), clock, grid and
/// lattice; its initial data and source are replaced.
pub fn synthesize_observations(
    problem: &CauchyProblem,
    w1: &[C],
    support: Option<&SupportBox>,
    q: usize,
    cfg: &KernelSeriesConfig,
) -> Result<ObservationPair, InverseError> {
    let SpaceMode::Lattice(lat) = &problem.space else {
        return Err(InverseError::InvalidInput("observations need a lattice problem".into()));
    };
    if problem.m() != 1 || problem.lambda != 1.0 {
        return Err(InverseError::InvalidInput("the inverse problem needs m = 1 and lambda = 1".into()));
    }
    if problem.source.is_some() {
        return Err(InverseError::InvalidInput("the inverse problem has no source term".into()));
    }
    if q >= lat.len() {
        return Err(InverseError::InvalidInput(format!("observation node {q} outside the lattice")));
    }
    if w1.len() != lat.len() {
        return Err(InverseError::InvalidInput("w1 does not match the lattice".into()));
    }
    let alpha = FracOrder::new(problem.order(0))?;
    if alpha.alpha > 2.0 {
        return Err(InverseError::InvalidInput(format!("alpha must lie in (0, 2], got {}", alpha.alpha)));
    }
    if let Some(b) = support {
        b.check(lat, w1)?;
    }
    let lap: Vec<C> = frac_laplacian(lat, w1, 1.0)?.into_iter().map(|v| -v).collect();
    let data = |d: Vec<C>| -> Vec<SpatialData> {
        if alpha.n == 2 {
            vec![SpatialData::Zero, SpatialData::Field(d)]
        } else {
            vec![SpatialData::Field(d)]
        }
    };
    let first = problem.clone().with_initial_data(data(w1.to_vec()));
    let second = problem.clone().with_initial_data(data(lap));
    let (w, v) = rayon::join(|| solve_scalar(&first, cfg), || solve_scalar(&second, cfg));
    let w = w?.field.trace(q);
    let v = v?.field.trace(q);
    let phi0 = problem.clock.phi(problem.grid.start());
    let wq = w1[q];
    let h1 = w.map(|t, val| if alpha.n == 2 { val - wq * (problem.clock.phi(t) - phi0) } else { val - wq });
    Ok(ObservationPair { q, h1, h2: v, alpha, clock: problem.clock.clone(), support_checked: support.map(|_| true) })
}

/// Why a node carries no recovered value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskReason {
    /// D^{α,φ}h₁ is extrapolated there.
    Endpoint,
    /// |h₂| is below the masking threshold.
    SmallH2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryDiagnostics {
    /// Smallest recovered value over valid nodes, the estimate of K.
    pub min_ratio: f64,
    pub masked: Vec<(usize, MaskReason)>,
    pub warnings: Vec<String>,
}

/// Θ at every node (NaN where masked) and the validity mask.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub theta: TimeSeries,
    pub valid: Vec<bool>,
    pub diagnostics: RecoveryDiagnostics,
}

impl RecoveryResult {
    pub fn valid_indices(&self) -> Vec<usize> {
        (0..self.valid.len()).filter(|&k| self.valid[k]).collect()
    }
}

/// Θ = D^{α,φ}h₁ / h₂ node by node.
pub fn recover_theta(obs: &ObservationPair) -> Result<RecoveryResult, InverseError> {
    let d = rl_derivative(obs.alpha, &obs.clock, &obs.h1)?;
    let scale = obs.h2.sup_norm();
    let mut valid = vec![true; d.len()];
    let mut masked = Vec::new();
    let mut warnings = Vec::new();
    for (k, ok) in valid.iter_mut().enumerate() {
        if d.flags[k] {
            *ok = false;
            masked.push((k, MaskReason::Endpoint));
        } else if obs.h2.values[k].norm() < H2_MASK_RELATIVE * scale || scale == 0.0 {
            *ok = false;
            masked.push((k, MaskReason::SmallH2));
            warnings.push(format!("h2 vanishes at node {k} (t = {}); theta masked there", obs.h2.times()[k]));
        }
    }
    if !valid.iter().any(|v| *v) {
        return Err(InverseError::AllMasked);
    }
    let theta: Vec<C> = (0..d.len())
        .map(|k| if valid[k] { d.values[k] / obs.h2.values[k] } else { C::new(f64::NAN, f64::NAN) })
        .collect();
    let min_ratio = (0..d.len()).filter(|&k| valid[k]).map(|k| theta[k].re).fold(f64::INFINITY, f64::min);
    let theta = TimeSeries::new(obs.h1.grid.clone(), theta)?;
    Ok(RecoveryResult { theta, valid, diagnostics: RecoveryDiagnostics { min_ratio, masked, warnings } })
}

/// sup |D^{α,φ}h₁ − Θh₂| / sup |D^{α,φ}h₁| over the given nodes.
pub fn green_identity_residual(
    obs: &ObservationPair,
    theta: &TimeCoefficient,
    nodes: &[usize],
) -> Result<f64, InverseError> {
    let d = rl_derivative(obs.alpha, &obs.clock, &obs.h1)?;
    let t = obs.h1.times();
    let num = nodes.iter().map(|&k| (d.values[k] - obs.h2.values[k] * theta.eval(t[k])).norm()).fold(0.0, f64::max);
    let den = nodes.iter().map(|&k| d.values[k].norm()).fold(0.0, f64::max);
    Ok(if den == 0.0 { num } else { num / den })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Pass,
    Fail,
    Unchecked,
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Fail => "fail",
            ConditionStatus::Unchecked => "unchecked",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub status: ConditionStatus,
    /// The measured quantity behind the verdict.
    pub value: f64,
    pub evidence: String,
    /// Offending node, when one is located.
    pub node: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub conditions: Vec<Condition>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.status == ConditionStatus::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Reports the four hypotheses of the recovery theorem on the traces:
/// contraction of the series for the recovered Θ, support of w₁, h₂ smooth
/// and nonzero on (t₀, T], and Θ ≥ K.
pub fn validate_hypotheses(obs: &ObservationPair, k_bound: f64, nu: f64) -> Result<HypothesisReport, InverseError> {
    if !(k_bound > 0.0 && nu > 0.0) {
        return Err(InverseError::InvalidInput("K and nu must be > 0".into()));
    }
    let grid = obs.h1.grid.clone();
    let t = grid.nodes().to_vec();
    let rec = recover_theta(obs);

    // (1) contraction for Θ interpolated from the recovered values
    let contraction = match &rec {
        Ok(r) => {
            let pts: Vec<(f64, f64)> = r.valid_indices().iter().map(|&k| (t[k], r.theta.values[k].re)).collect();
            let pts = Arc::new(pts);
            let interp = {
                let pts = pts.clone();
                move |x: f64| -> f64 {
                    let i = pts.partition_point(|p| p.0 < x);
                    if i == 0 {
                        pts[0].1
                    } else if i >= pts.len() {
                        pts[pts.len() - 1].1
                    } else {
                        let (a, b) = (pts[i - 1], pts[i]);
                        a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
                    }
                }
            };
            let mut p = CauchyProblem::new(
                vec![obs.alpha.alpha],
                1.0,
                vec![TimeCoefficient::constant(1.0)],
                obs.clock.clone(),
                grid.clone(),
            )?;
            p.coeffs = vec![TimeCoefficient::function("recovered", interp)];
            let c = convergence_check(&p, nu)?;
            Condition {
                name: "contraction",
                status: if c.pass { ConditionStatus::Pass } else { ConditionStatus::Fail },
                value: c.c_estimate,
                evidence: format!("C = {:.6e} at nu = {nu}", c.c_estimate),
                node: None,
            }
        }
        Err(e) => Condition {
            name: "contraction",
            status: ConditionStatus::Unchecked,
            value: f64::NAN,
            evidence: format!("no recovered coefficient: {e}"),
            node: None,
        },
    };

    // (2) support of w₁
    let support = match obs.support_checked {
        Some(true) => Condition {
            name: "support",
            status: ConditionStatus::Pass,
            value: 0.0,
            evidence: "w1 vanishes outside the declared box".into(),
            node: None,
        },
        Some(false) => Condition {
            name: "support",
            status: ConditionStatus::Fail,
            value: f64::NAN,
            evidence: "w1 leaves the declared box".into(),
            node: None,
        },
        None => Condition {
            name: "support",
            status: ConditionStatus::Unchecked,
            value: f64::NAN,
            evidence: "no support box declared".into(),
            node: None,
        },
    };

    // (3) h₂ nonzero without sign change on (t₀, T] and smooth
    let h2 = &obs.h2.values;
    let scale = obs.h2.sup_norm();
    let mut bad = None;
    for k in 1..h2.len() {
        if h2[k].norm() < H2_MASK_RELATIVE * scale || scale == 0.0 {
            bad = Some((k, "vanishes"));
            break;
        }
        if k >= 2 && h2[k].re * h2[k - 1].re < 0.0 {
            bad = Some((k, "changes sign"));
            break;
        }
    }
    let order = if obs.is_wave() { 2 } else { 1 };
    let smooth = divided_difference_sup(&t, h2, order);
    let min_abs = h2.iter().skip(1).map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let nonzero = match bad {
        Some((k, what)) => Condition {
            name: "h2_nonzero",
            status: ConditionStatus::Fail,
            value: min_abs,
            evidence: format!("h2 {what} at node {k} (t = {})", t[k]),
            node: Some(k),
        },
        None if !smooth.is_finite() => Condition {
            name: "h2_nonzero",
            status: ConditionStatus::Fail,
            value: min_abs,
            evidence: "h2 divided differences are not finite".into(),
            node: None,
        },
        None => Condition {
            name: "h2_nonzero",
            status: ConditionStatus::Pass,
            value: min_abs,
            evidence: format!("min |h2| on (t0, T] = {min_abs:.6e}; max order-{order} divided difference = {smooth:.6e}"),
            node: None,
        },
    };

    // (4) Θ ≥ K
    let ratio = match &rec {
        Ok(r) => {
            let m = r.diagnostics.min_ratio;
            let node = r.valid_indices().into_iter().min_by(|&a, &b| r.theta.values[a].re.total_cmp(&r.theta.values[b].re));
            Condition {
                name: "ratio_lower_bound",
                status: if m >= k_bound { ConditionStatus::Pass } else { ConditionStatus::Fail },
                value: m,
                evidence: format!("min D^alpha h1 / h2 = {m:.6e} against K = {k_bound}"),
                node,
            }
        }
        Err(e) => Condition {
            name: "ratio_lower_bound",
            status: ConditionStatus::Fail,
            value: f64::NAN,
            evidence: e.to_string(),
            node: None,
        },
    };
    Ok(HypothesisReport { conditions: vec![contraction, support, nonzero, ratio] })
}

/// max |f[t_k, …, t_{k+order}]| over the grid.
fn divided_difference_sup(t: &[f64], f: &[C], order: usize) -> f64 {
    let mut d: Vec<C> = f.to_vec();
    for level in 1..=order {
        d = (0..d.len() - 1).map(|k| (d[k + 1] - d[k]) / (t[k + level] - t[k])).collect();
    }
    d.iter().map(|v| v.norm()).fold(0.0, f64::max)
}
