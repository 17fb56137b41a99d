//! Closed-form modes for constant coefficients.
//!
//! With λᵢ* = Θᵢ (i < m), λ_m* = |s|^{2λ}Θ_m, γᵢ = β₀ − βᵢ and p = φ(t) − φ(t₀),
//!
//!   Hⱼ(t) = −Σ_{i=κⱼ}^{m} λᵢ* p^{j+γᵢ} E_{(γ), j+1+γᵢ}(−λ₁*p^{γ₁}, …, −λ_m*p^{γ_m}),
//!
//! and the source response is the convolution of ĥ with
//! p^{β₀−1} E_{(γ),β₀}(−λ*p^γ) in the φ variable.

use std::sync::Arc;

use num_complex::Complex64;

use super::kernel::{index_sets, ModeContext};
use super::spatial::{BasisProvider, ModeBasis, Modal, Part};
use super::{CauchyProblem, KernelSeriesConfig, ScalarSolution, SolverError, SpectralSymbol};
use crate::specfun::{gamma, ml_multivariate, MultiMLParams, SeriesConfig};
use crate::timefrac::IntegralOperator;

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);

pub(crate) struct ConstantBasis<'a> {
    ctx: &'a ModeContext,
    betas: Vec<f64>,
    theta: Vec<f64>,
    offsets: Vec<f64>,
    op_b0: Arc<IntegralOperator>,
    /// Present when the φ-grid is uniform: the step.
    uniform_step: Option<f64>,
    ml_cfg: SeriesConfig,
}

impl<'a> ConstantBasis<'a> {
    pub fn new(problem: &CauchyProblem, ctx: &'a ModeContext) -> Result<Self, SolverError> {
        let theta = problem
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.as_constant().ok_or_else(|| {
                    SolverError::InvalidProblem(format!("coeffs[{i}] = {} is not constant", c.label()))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let grid = &problem.grid;
        let phi0 = problem.clock.phi(grid.start());
        let offsets: Vec<f64> = grid.nodes().iter().map(|&t| problem.clock.phi(t) - phi0).collect();
        let step = offsets.get(1).copied().unwrap_or(0.0);
        let uniform = step > 0.0 && offsets.windows(2).all(|w| ((w[1] - w[0]) - step).abs() <= 1e-12 * step);
        let op_b0 = Arc::new(IntegralOperator::new(problem.order(0), &problem.clock, grid.clone())?);
        Ok(Self {
            ctx,
            betas: problem.betas.clone(),
            theta,
            offsets,
            op_b0,
            uniform_step: uniform.then_some(step),
            ml_cfg: SeriesConfig::default(),
        })
    }

    fn order(&self, i: usize) -> f64 {
        self.betas.get(i).copied().unwrap_or(0.0)
    }

    /// (γᵢ, λᵢ*) for the indices i = 1..=m whose λᵢ* is nonzero.
    fn active(&self, mu: f64) -> Vec<(usize, f64, f64)> {
        let m = self.betas.len();
        (1..=m)
            .filter_map(|i| {
                let l = if i == m { self.theta[i - 1] * mu } else { self.theta[i - 1] };
                (l != 0.0).then(|| (i, self.order(0) - self.order(i), l))
            })
            .collect()
    }

    fn ml(&self, group: usize, params: &MultiMLParams, z: &[C]) -> Result<C, SolverError> {
        ml_multivariate(params, z, &self.ml_cfg)
            .map(|v| v.value)
            .map_err(|source| SolverError::ClosedForm { mode: group, source })
    }

    fn z_at(active: &[(usize, f64, f64)], p: f64) -> Vec<C> {
        active.iter().map(|&(_, g, l)| C::new(-l * p.powf(g), 0.0)).collect()
    }

    /// Hⱼ on the grid.
    fn h(&self, group: usize, j: usize, mu: f64) -> Result<Vec<C>, SolverError> {
        let active = self.active(mu);
        let kappa = index_sets(&self.betas, j)?;
        let gammas: Vec<f64> = active.iter().map(|a| a.1).collect();
        let mut out = vec![ZERO; self.offsets.len()];
        if active.is_empty() {
            return Ok(out);
        }
        let params: Vec<(f64, MultiMLParams)> = active
            .iter()
            .filter(|a| a.0 >= kappa)
            .map(|&(_, g, l)| Ok((l, MultiMLParams::new(gammas.clone(), j as f64 + 1.0 + g)?)))
            .collect::<Result<_, SolverError>>()?;
        let exps: Vec<f64> = active.iter().filter(|a| a.0 >= kappa).map(|a| j as f64 + a.1).collect();
        for (k, &p) in self.offsets.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            let z = Self::z_at(&active, p);
            let mut acc = ZERO;
            for ((l, par), e) in params.iter().zip(&exps) {
                acc += self.ml(group, par, &z)? * (l * p.powf(*e));
            }
            out[k] = -acc;
        }
        Ok(out)
    }

    /// The source response ∫ (p_n − v)^{β₀−1} E_{(γ),β₀}(−λ*(p_n − v)^γ) g(v) dv.
    fn source(&self, group: usize, mu: f64, g: &[C]) -> Result<Vec<C>, SolverError> {
        let active = self.active(mu);
        let b0 = self.order(0);
        if active.is_empty() {
            return Ok(self.op_b0.apply_values(g));
        }
        let gammas: Vec<f64> = active.iter().map(|a| a.1).collect();
        let params = MultiMLParams::new(gammas, b0)?;
        let e0 = 1.0 / gamma(b0)?;
        let len = self.offsets.len();
        let kernel = |d: f64| -> Result<C, SolverError> {
            if d <= 0.0 {
                Ok(C::new(e0, 0.0))
            } else {
                self.ml(group, &params, &Self::z_at(&active, d))
            }
        };
        let table: Option<Vec<C>> = match self.uniform_step {
            Some(h) => Some((0..len).map(|d| kernel(d as f64 * h)).collect::<Result<_, _>>()?),
            None => None,
        };
        let scale = gamma(b0)?;
        let mut out = vec![ZERO; len];
        for (n, o) in out.iter_mut().enumerate().skip(1) {
            let row = self.op_b0.row(n);
            let mut acc = ZERO;
            for (k, w) in row.iter().enumerate().take(n + 1) {
                if *w == 0.0 {
                    continue;
                }
                let e = match &table {
                    Some(t) => t[n - k],
                    None => kernel(self.offsets[n] - self.offsets[k])?,
                };
                acc += e * g[k] * *w;
            }
            *o = acc * scale;
        }
        Ok(out)
    }
}

impl BasisProvider for ConstantBasis<'_> {
    fn basis(
        &self,
        group: usize,
        symbol: SpectralSymbol,
        needed: &[bool],
        source_time: Option<&[C]>,
        want_op: bool,
        _cfg: &KernelSeriesConfig,
    ) -> Result<ModeBasis, SolverError> {
        let n0 = self.ctx.n0();
        let mut basis = Vec::with_capacity(n0);
        let mut basis_op = Vec::with_capacity(n0);
        for j in 0..n0 {
            if !needed[j] {
                basis.push(Vec::new());
                basis_op.push(Vec::new());
                continue;
            }
            let h = self.h(group, j, symbol.multiplier)?;
            let u: Vec<C> = h.iter().zip(self.ctx.psi(j)).map(|(a, p)| a + p).collect();
            if want_op {
                let mut jets = vec![ZERO; n0];
                jets[j] = C::new(1.0, 0.0);
                basis_op.push(self.ctx.apply_time_operator(&u, &jets)?.values);
            } else {
                basis_op.push(Vec::new());
            }
            basis.push(u);
        }
        let (src, src_op) = match source_time {
            Some(g) => {
                let s = self.source(group, symbol.multiplier, g)?;
                let op = if want_op { Some(self.ctx.apply_time_operator(&s, &vec![ZERO; n0])?.values) } else { None };
                (Some(s), op)
            }
            None => (None, None),
        };
        Ok(ModeBasis { basis, basis_op, src, src_op, terms: 0 })
    }
}

/// Solves a constant-coefficient problem mode by mode with the closed forms.
pub fn solve_scalar_constant(problem: &CauchyProblem, cfg: &KernelSeriesConfig) -> Result<ScalarSolution, SolverError> {
    problem.validate()?;
    let ctx = ModeContext::new(problem)?;
    let provider = ConstantBasis::new(problem, &ctx)?;
    let modal = Modal::build(problem, &provider, false, cfg)?;
    let field = modal.field(&problem.grid, Part::Value)?;
    Ok(ScalarSolution { field, diagnostics: modal.diagnostics })
}
