//! Per-mode time problem and its Picard series.
//!
//! For one frequency with μ = |s|^{2λ} write dᵢ = Θᵢ (i < m), d_m = μΘ_m and
//! A g = Σᵢ dᵢ I^{β₀−βᵢ,φ} g. With y = ᶜD^{β₀,φ}û the mode equation becomes
//! the second-kind Volterra equation
//!
//!   y + A y = ĥ − Σⱼ ŵⱼ Σ_{i ≥ κⱼ} dᵢ D^{βᵢ,φ}Ψⱼ,
//!
//! so y is a Neumann series in A and û = Σⱼ ŵⱼΨⱼ + I^{β₀,φ} y. The kernel
//! Kⱼ = Σ_k (−1)^{k+1} I^{β₀,φ} A^k seedⱼ and the source response
//! I^{β₀,φ}ĥ + G(ĥ) are the two pieces of that expression.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{CauchyProblem, KernelSeriesConfig, SolverError, SpectralSymbol};
use crate::timefrac::{
    caputo_derivative_with, interior_indices, psi_basis, psi_power_derivative, ClockMap, FracOrder,
    IntegralOperator, TimeFracError, TimeGrid, TimeSeries, DEFAULT_INTERIOR_LAYER,
};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

fn sup(v: &[C]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// κⱼ = min{ i ∈ 1..=m : βᵢ ≤ j } for the orders β₀…β_{m−1} (β_m = 0).
pub fn index_sets(betas: &[f64], j: usize) -> Result<usize, SolverError> {
    let b0 = *betas.first().ok_or_else(|| SolverError::InvalidProblem("betas is empty".into()))?;
    let n0 = FracOrder::new(b0)?.n;
    if j >= n0 {
        return Err(SolverError::InvalidProblem(format!("index j = {j} out of range 0..{n0}")));
    }
    let m = betas.len();
    Ok((1..=m).find(|&i| if i < m { betas[i] <= j as f64 } else { true }).unwrap_or(m))
}

/// Non-integer powers of φ − φ₀ in (0, 2) that the Picard iterates carry:
/// the seed exponents j − βᵢ shifted by sums of the gaps β₀ − βᵢ. The
/// integration operators are made exact for the lowest few of them.
fn start_exponents(problem: &CauchyProblem) -> Vec<f64> {
    const LIMIT: f64 = 2.0;
    let m = problem.m();
    let gaps: Vec<f64> = (1..=m).map(|i| problem.order(0) - problem.order(i)).collect();
    let mut found: Vec<f64> = Vec::new();
    let mut frontier: Vec<f64> = Vec::new();
    for j in 0..problem.n0() {
        for i in 1..=m {
            let e = j as f64 - problem.order(i);
            if e >= 0.0 {
                frontier.push(e);
            }
        }
    }
    while let Some(e) = frontier.pop() {
        for g in &gaps {
            let next = e + g;
            if next < LIMIT && !found.iter().any(|f| (f - next).abs() < 1e-9) {
                found.push(next);
                frontier.push(next);
            }
        }
        if e > 0.0 && !found.iter().any(|f| (f - e).abs() < 1e-9) {
            found.push(e);
        }
    }
    found.retain(|e| (e - e.round()).abs() > 1e-9);
    found.sort_by(f64::total_cmp);
    found.truncate(4);
    found
}

/// Which seed a kernel starts from: i ≥ κⱼ, or every i ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelVariant {
    Kappa,
    Full,
}

/// Outcome of the contraction test Σᵢ ‖Θᵢ‖ I^{β₀−βᵢ,φ}e^{νt} ≤ C e^{νt}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub nu: f64,
    pub c_estimate: f64,
    pub pass: bool,
}

/// Everything about the time problem that does not depend on the frequency:
/// sampled coefficients, Ψⱼ and their fractional derivatives, and the
/// product-integration operators, built once and shared by all modes.
pub struct ModeContext {
    betas: Vec<f64>,
    clock: ClockMap,
    grid: Arc<TimeGrid>,
    theta: Vec<Vec<f64>>,
    n0: usize,
    n1: usize,
    op_b0: Arc<IntegralOperator>,
    /// I^{β₀−βᵢ} for i = 1..=m at index i−1
    op_gap: Vec<Arc<IntegralOperator>>,
    /// I^{nᵢ−βᵢ} for i = 0..m−1 (None for integer orders)
    deriv_ops: Vec<Option<Arc<IntegralOperator>>>,
    psi: Vec<Vec<f64>>,
    /// D^{βᵢ}Ψⱼ at [i−1][j] for i = 1..=m; None when not locally integrable
    psi_d: Vec<Vec<Option<Vec<f64>>>>,
}

impl ModeContext {
    pub fn new(problem: &CauchyProblem) -> Result<Self, SolverError> {
        let grid = problem.grid.clone();
        let clock = problem.clock.clone();
        let m = problem.m();
        let n0 = problem.n0();
        let n1 = problem.n_of(1);
        let b0 = problem.order(0);

        let mut orders: Vec<f64> = vec![b0];
        orders.extend((1..=m).map(|i| b0 - problem.order(i)));
        let mut distinct: Vec<f64> = Vec::new();
        for o in orders {
            if !distinct.iter().any(|d| (d - o).abs() <= 1e-14 * o.max(1.0)) {
                distinct.push(o);
            }
        }
        let exps = start_exponents(problem);
        let built: Vec<(f64, Arc<IntegralOperator>)> = distinct
            .par_iter()
            .map(|&o| IntegralOperator::with_start_exponents(o, &clock, grid.clone(), &exps).map(|op| (o, Arc::new(op))))
            .collect::<Result<_, TimeFracError>>()?;
        let lookup = |o: f64| -> Arc<IntegralOperator> {
            built.iter().find(|(d, _)| (d - o).abs() <= 1e-14 * o.max(1.0)).expect("operator was built").1.clone()
        };

        let theta = problem.coeffs.iter().map(|c| c.sample(&grid)).collect();
        let psi = (0..n0).map(|j| psi_basis(j, &clock, grid.clone()).re()).collect();
        let mut psi_d = Vec::with_capacity(m);
        for i in 1..=m {
            let bi = problem.order(i);
            let row = (0..n0)
                .map(|j| match psi_power_derivative(j, bi, &clock, grid.clone()) {
                    Ok(s) => Ok(Some(s.re())),
                    Err(TimeFracError::SingularSeed { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>, _>>()?;
            psi_d.push(row);
        }
        let deriv_ops = (0..m)
            .map(|i| {
                let rest = problem.n_of(i) as f64 - problem.order(i);
                (rest > 0.0)
                    .then(|| IntegralOperator::new(rest, &clock, grid.clone()).map(Arc::new))
                    .transpose()
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            betas: problem.betas.clone(),
            clock,
            grid,
            theta,
            n0,
            n1,
            op_b0: lookup(b0),
            op_gap: (1..=m).map(|i| lookup(b0 - problem.order(i))).collect(),
            deriv_ops,
            psi,
            psi_d,
        })
    }

    pub fn grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    pub fn clock(&self) -> &ClockMap {
        &self.clock
    }

    pub fn m(&self) -> usize {
        self.betas.len()
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    fn order(&self, i: usize) -> f64 {
        if i < self.betas.len() {
            self.betas[i]
        } else {
            0.0
        }
    }

    /// Sampled Θᵢ, i = 1..=m.
    pub fn theta(&self, i: usize) -> &[f64] {
        &self.theta[i - 1]
    }

    pub fn psi(&self, j: usize) -> &[f64] {
        &self.psi[j]
    }

    /// The kernel variant used for Hⱼ: K^{κⱼ} below n₁, the full Kⱼ from n₁ on.
    pub fn h_variant(&self, j: usize) -> KernelVariant {
        if j < self.n1 {
            KernelVariant::Kappa
        } else {
            KernelVariant::Full
        }
    }

    fn d_scale(&self, i: usize, mu: f64) -> f64 {
        if i == self.m() {
            mu
        } else {
            1.0
        }
    }

    /// I^{β₀,φ} g.
    pub fn integrate_b0(&self, g: &[C]) -> Vec<C> {
        self.op_b0.apply_values(g)
    }

    /// A g = Σᵢ dᵢ I^{β₀−βᵢ,φ} g.
    pub fn apply_a(&self, mu: f64, g: &[C]) -> Vec<C> {
        let mut out = vec![ZERO; g.len()];
        for i in 1..=self.m() {
            let s = self.d_scale(i, mu);
            if s == 0.0 {
                continue;
            }
            let ig = self.op_gap[i - 1].apply_values(g);
            for ((o, v), th) in out.iter_mut().zip(&ig).zip(&self.theta[i - 1]) {
                *o += v * (th * s);
            }
        }
        out
    }

    /// Σ_{i ≥ start} dᵢ D^{βᵢ,φ}Ψⱼ.
    fn seed(&self, j: usize, mu: f64, variant: KernelVariant) -> Result<Vec<C>, SolverError> {
        let start = match variant {
            KernelVariant::Kappa => index_sets(&self.betas, j)?,
            KernelVariant::Full => 1,
        };
        let mut out = vec![ZERO; self.grid.len()];
        for i in start..=self.m() {
            let s = self.d_scale(i, mu);
            if s == 0.0 {
                continue;
            }
            let dpsi = self.psi_d[i - 1][j]
                .as_ref()
                .ok_or(TimeFracError::SingularSeed { j, beta: self.order(i) })?;
            for ((o, p), th) in out.iter_mut().zip(dpsi).zip(&self.theta[i - 1]) {
                *o += C::new(p * th * s, 0.0);
            }
        }
        Ok(out)
    }

    /// Σ_{k≥0} (−1)^k A^k g, truncated once the latest term is below
    /// abs_tol · max(1, |sum|). Returns the sum and the number of terms.
    fn neumann(&self, xi: f64, mu: f64, g: Vec<C>, cfg: &KernelSeriesConfig) -> Result<(Vec<C>, usize), SolverError> {
        if sup(&g) == 0.0 {
            return Ok((g, 0));
        }
        let mut sum = g.clone();
        let mut term = g;
        let mut largest = sup(&term);
        let mut sign = 1.0;
        for k in 1..=cfg.max_picard_terms {
            term = self.apply_a(mu, &term);
            sign = -sign;
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t * sign;
            }
            let size = sup(&term);
            if !size.is_finite() {
                break;
            }
            largest = largest.max(size);
            let total = sup(&sum);
            if size <= cfg.abs_tol * total.max(1.0) {
                if largest > cfg.max_growth * total.max(f64::MIN_POSITIVE) {
                    return Err(SolverError::PrecisionLoss { xi, largest, result: total });
                }
                return Ok((sum, k + 1));
            }
        }
        let report = self.contraction(1.0, mu);
        Err(SolverError::NonConvergence { xi, terms: cfg.max_picard_terms, c_estimate: report.c_estimate, nu: 1.0 })
    }

    /// sup_t Σᵢ ‖dᵢ‖ I^{β₀−βᵢ,φ}[e^{νt}] / e^{νt}.
    fn contraction(&self, nu: f64, mu: f64) -> ConvergenceReport {
        let t0 = self.grid.start();
        let e: Vec<C> = self.grid.nodes().iter().map(|&t| C::new((nu * (t - t0)).exp(), 0.0)).collect();
        let mut ratio = vec![0.0; e.len()];
        for i in 1..=self.m() {
            let norm = self.theta[i - 1].iter().fold(0.0f64, |a, v| a.max(v.abs())) * self.d_scale(i, mu);
            if norm == 0.0 {
                continue;
            }
            let ie = self.op_gap[i - 1].apply_values(&e);
            for ((r, v), ev) in ratio.iter_mut().zip(&ie).zip(&e) {
                *r += norm * v.re / ev.re;
            }
        }
        let c = ratio.into_iter().fold(0.0, f64::max);
        ConvergenceReport { nu, c_estimate: c, pass: c < 1.0 }
    }

    /// yⱼ = Σ_k (−1)^{k+1} A^k seedⱼ; the kernel is Kⱼ = I^{β₀,φ} yⱼ.
    pub fn kernel_y(
        &self,
        j: usize,
        symbol: SpectralSymbol,
        variant: KernelVariant,
        cfg: &KernelSeriesConfig,
    ) -> Result<(Vec<C>, usize), SolverError> {
        if j >= self.n0 {
            return Err(SolverError::InvalidProblem(format!("kernel index j = {j} out of range 0..{}", self.n0)));
        }
        let seed = self.seed(j, symbol.multiplier, variant)?;
        let (y, terms) = self.neumann(symbol.xi_magnitude, symbol.multiplier, seed, cfg)?;
        Ok((y.into_iter().map(|v| -v).collect(), terms))
    }

    /// y_h = Σ_k (−1)^k A^k ĥ (so the source response is I^{β₀,φ} y_h).
    pub fn source_y(&self, symbol: SpectralSymbol, h: &[C], cfg: &KernelSeriesConfig) -> Result<(Vec<C>, usize), SolverError> {
        self.neumann(symbol.xi_magnitude, symbol.multiplier, h.to_vec(), cfg)
    }

    /// (ᶜD^{β₀} + Σ_{i<m} Θᵢ ᶜD^{βᵢ}) of Σⱼ aⱼ Ψⱼ + I^{β₀} y, evaluated from
    /// the kernel representation: ᶜD^{βᵢ} of it equals
    /// Σ_{j ≥ βᵢ} aⱼ D^{βᵢ}Ψⱼ + I^{β₀−βᵢ} y.
    pub fn time_operator_from_kernel(&self, amps: &[C], y: &[C]) -> Vec<C> {
        let mut out = y.to_vec();
        for i in 1..self.m() {
            let mut part = self.op_gap[i - 1].apply_values(y);
            for (j, a) in amps.iter().enumerate() {
                if *a == ZERO || (j as f64) < self.order(i) {
                    continue;
                }
                if let Some(d) = &self.psi_d[i - 1][j] {
                    for (p, v) in part.iter_mut().zip(d) {
                        *p += a * v;
                    }
                }
            }
            for ((o, p), th) in out.iter_mut().zip(&part).zip(&self.theta[i - 1]) {
                *o += p * th;
            }
        }
        out
    }

    /// ᶜD^{βᵢ,φ} of a sampled series with the given φ-jets, i < m.
    pub fn caputo(&self, i: usize, values: &[C], jets: &[C]) -> Result<TimeSeries, SolverError> {
        let order = FracOrder::new(self.order(i))?;
        let mut init = jets[..jets.len().min(order.n)].to_vec();
        init.resize(order.n, ZERO);
        let f = TimeSeries::new(self.grid.clone(), values.to_vec())?;
        let op = self.deriv_ops[i].as_deref();
        Ok(caputo_derivative_with(order, &self.clock, &f, Some(&init), op)?)
    }

    /// (ᶜD^{β₀} + Σ_{i<m} Θᵢ ᶜD^{βᵢ}) of a sampled series with known φ-jets,
    /// computed numerically through timefrac. Flags mark extrapolated nodes.
    pub fn apply_time_operator(&self, values: &[C], jets: &[C]) -> Result<TimeSeries, SolverError> {
        let mut acc = self.caputo(0, values, jets)?;
        for i in 1..self.m() {
            let d = self.caputo(i, values, jets)?;
            for (k, (a, v)) in acc.values.iter_mut().zip(&d.values).enumerate() {
                *a += v * self.theta[i - 1][k];
            }
            for (fa, fd) in acc.flags.iter_mut().zip(&d.flags) {
                *fa |= *fd;
            }
        }
        Ok(acc)
    }

    /// The Fourier amplitude of one mode with initial amplitudes `amps` and
    /// optional source samples.
    pub fn solve_mode(
        &self,
        symbol: SpectralSymbol,
        amps: &[C],
        source: Option<&[C]>,
        cfg: &KernelSeriesConfig,
    ) -> Result<ModeSolution, SolverError> {
        if amps.len() != self.n0 {
            return Err(SolverError::InvalidProblem(format!("expected {} amplitudes, got {}", self.n0, amps.len())));
        }
        let len = self.grid.len();
        let mut y = vec![ZERO; len];
        let mut u = vec![ZERO; len];
        let mut terms = 0;
        for (j, a) in amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let (yj, t) = self.kernel_y(j, symbol, self.h_variant(j), cfg)?;
            terms = terms.max(t);
            for k in 0..len {
                y[k] += a * yj[k];
                u[k] += a * self.psi[j][k];
            }
        }
        if let Some(h) = source {
            let (yh, t) = self.source_y(symbol, h, cfg)?;
            terms = terms.max(t);
            for (a, b) in y.iter_mut().zip(&yh) {
                *a += b;
            }
        }
        let iy = self.integrate_b0(&y);
        for (a, b) in u.iter_mut().zip(&iy) {
            *a += b;
        }
        let time_op = self.time_operator_from_kernel(amps, &y);
        Ok(ModeSolution { u, caputo_b0: y, time_op, picard_terms: terms })
    }
}

/// One mode of the solution: û, ᶜD^{β₀}û and (ᶜD^{β₀} + Σ_{i<m}ΘᵢᶜD^{βᵢ})û,
/// the last two taken from the kernel representation.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub u: Vec<C>,
    pub caputo_b0: Vec<C>,
    pub time_op: Vec<C>,
    pub picard_terms: usize,
}

/// The kernel K_j (or K_j^{κ_j}) on the problem grid for one symbol.
#[allow(non_snake_case)]
pub fn kernel_K(
    j: usize,
    symbol: SpectralSymbol,
    problem: &CauchyProblem,
    variant: KernelVariant,
    cfg: &KernelSeriesConfig,
) -> Result<TimeSeries, SolverError> {
    let ctx = ModeContext::new(problem)?;
    let (y, _) = ctx.kernel_y(j, symbol, variant, cfg)?;
    Ok(TimeSeries::new(ctx.grid.clone(), ctx.integrate_b0(&y))?)
}

/// G(ĥ) = Σ_{k≥1} (−1)^k I^{β₀,φ} A^k ĥ. The full source response of the
/// mode is I^{β₀,φ}ĥ + G(ĥ).
#[allow(non_snake_case)]
pub fn source_series_G(
    h_hat: &TimeSeries,
    symbol: SpectralSymbol,
    problem: &CauchyProblem,
    cfg: &KernelSeriesConfig,
) -> Result<TimeSeries, SolverError> {
    let ctx = ModeContext::new(problem)?;
    if !(Arc::ptr_eq(&h_hat.grid, &ctx.grid) || *h_hat.grid == *ctx.grid) {
        return Err(TimeFracError::GridMismatch("source and problem grids differ".into()).into());
    }
    let (y, _) = ctx.source_y(symbol, &h_hat.values, cfg)?;
    let tail: Vec<C> = y.iter().zip(&h_hat.values).map(|(a, b)| a - b).collect();
    Ok(TimeSeries::new(ctx.grid.clone(), ctx.integrate_b0(&tail))?)
}

/// Evaluates C = sup_t Σᵢ ‖Θᵢ‖_max I^{β₀−βᵢ,φ}[e^{νt}] / e^{νt} on the
/// problem grid (Θ_m without the |s|^{2λ} factor); pass means C < 1.
pub fn convergence_check(problem: &CauchyProblem, nu: f64) -> Result<ConvergenceReport, SolverError> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(SolverError::InvalidProblem(format!("nu must be > 0, got {nu}")));
    }
    let b0 = problem.order(0);
    let grid = problem.grid.clone();
    let t0 = grid.start();
    let e: Vec<C> = grid.nodes().iter().map(|&t| C::new((nu * (t - t0)).exp(), 0.0)).collect();
    let mut cache: HashMap<u64, Vec<C>> = HashMap::new();
    let mut ratio = vec![0.0; e.len()];
    for i in 1..=problem.m() {
        let norm = problem.coeffs[i - 1].sample(&grid).iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if norm == 0.0 {
            continue;
        }
        let gap = b0 - problem.order(i);
        let ie = match cache.get(&gap.to_bits()) {
            Some(v) => v.clone(),
            None => {
                let v = IntegralOperator::new(gap, &problem.clock, grid.clone())?.apply_values(&e);
                cache.insert(gap.to_bits(), v.clone());
                v
            }
        };
        for ((r, v), ev) in ratio.iter_mut().zip(&ie).zip(&e) {
            *r += norm * v.re / ev.re;
        }
    }
    let c = ratio.into_iter().fold(0.0, f64::max);
    Ok(ConvergenceReport { nu, c_estimate: c, pass: c < 1.0 })
}

/// Relative residual of ᶜD^{β₀}û + Σ_{i<m}ΘᵢᶜD^{βᵢ}û + Θ_m|s|^{2λ}û − ĥ on
/// interior nodes, with all derivatives taken numerically by timefrac from
/// the samples of û and its exact φ-jets. The scale is the largest sup-norm
/// among the individual terms.
pub fn mode_residual(
    ctx: &ModeContext,
    symbol: SpectralSymbol,
    u: &[C],
    jets: &[C],
    source: Option<&[C]>,
) -> Result<f64, SolverError> {
    let f = ctx.apply_time_operator(u, jets)?;
    let th = ctx.theta(ctx.m());
    let lap: Vec<C> = u.iter().zip(th).map(|(v, t)| v * (t * symbol.multiplier)).collect();
    let idx = interior_indices(ctx.grid(), ctx.n0().max(1), DEFAULT_INTERIOR_LAYER);
    let mut res = 0.0f64;
    let (mut s1, mut s2, mut s3) = (0.0f64, 0.0f64, 0.0f64);
    for &k in &idx {
        let h = source.map(|s| s[k]).unwrap_or(ZERO);
        res = res.max((f.values[k] + lap[k] - h).norm());
        s1 = s1.max(f.values[k].norm());
        s2 = s2.max(lap[k].norm());
        s3 = s3.max(h.norm());
    }
    let scale = s1.max(s2).max(s3);
    Ok(if scale == 0.0 { res } else { res / scale })
}
