//! The first-order operator 𝔇 = P + 𝔣F + 𝔣⁺ on Witt-extended multivectors,
//! where F = ᶜD^{β₀} + Σ_{i<m}ΘᵢᶜD^{βᵢ} acts componentwise in time and
//! P = Θ_m^{1/2} 𝒟_λ with 𝒟_λ the Fourier multiplier i(Σ e_k s_k)|s|^{λ−1}.
//! Because 𝔣² = (𝔣⁺)² = 0, 𝔣𝔣⁺ + 𝔣⁺𝔣 = 1 and e_k anticommutes with both,
//! 𝔇² = Θ_m(−Δ)^λ + F whenever Θ_m does not depend on t.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::constant::ConstantBasis;
use super::kernel::ModeContext;
use super::spatial::{BasisProvider, KernelBasis, Modal, Part, SolveDiagnostics, SpaceLayout, SpaceTimeField};
use super::{CauchyProblem, KernelSeriesConfig, SolverError, SpaceMode, SpatialData};
use crate::clifford::{witt_pair, Blade, Multivector, MultivectorField};
use crate::timefrac::TimeGrid;

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);

/// i s_k |s|^{λ−1}, or zero at s = 0.
fn dirac_multiplier(s: &[f64], lambda: f64) -> Vec<C> {
    let r = s.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return vec![ZERO; s.len()];
    }
    let g = r.powf(lambda - 1.0);
    s.iter().map(|v| C::new(0.0, v * g)).collect()
}

/// A multivector-valued time series for one Fourier mode, with the φ-jets
/// of each component at t₀ (needed by the Caputo derivatives).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMultivector {
    pub s: Vec<f64>,
    pub grid: Arc<TimeGrid>,
    pub components: BTreeMap<Blade, Vec<C>>,
    pub jets: BTreeMap<Blade, Vec<C>>,
}

impl ModeMultivector {
    pub fn zero(s: Vec<f64>, grid: Arc<TimeGrid>) -> Self {
        Self { s, grid, components: BTreeMap::new(), jets: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.s.len()
    }

    /// Adds scale·blade·(values, jets).
    pub fn add(&mut self, blade: Blade, scale: C, values: &[C], jets: &[C]) {
        let len = self.grid.len();
        let dst = self.components.entry(blade).or_insert_with(|| vec![ZERO; len]);
        for (d, v) in dst.iter_mut().zip(values) {
            *d += scale * v;
        }
        let dj = self.jets.entry(blade).or_default();
        if dj.len() < jets.len() {
            dj.resize(jets.len(), ZERO);
        }
        for (d, v) in dj.iter_mut().zip(jets) {
            *d += scale * v;
        }
    }

    /// The multivector at time node k.
    pub fn at(&self, k: usize) -> Multivector {
        let mut m = Multivector::zero(self.dim());
        for (b, v) in &self.components {
            m.add_term(*b, v[k]);
        }
        m
    }

    /// max over the listed time nodes of the coefficient norm of self − other.
    pub fn max_diff_on(&self, other: &Self, nodes: &[usize]) -> f64 {
        nodes.iter().map(|&k| self.at(k).checked_sub(&other.at(k)).map(|d| d.norm()).unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }

    pub fn max_norm_on(&self, nodes: &[usize]) -> f64 {
        nodes.iter().map(|&k| self.at(k).norm()).fold(0.0, f64::max)
    }
}

/// 𝔇 for one problem, acting on [`ModeMultivector`]s.
pub struct DiracOperator {
    ctx: ModeContext,
    lambda: f64,
    theta_m: Vec<f64>,
    theta_m_constant: bool,
}

impl DiracOperator {
    pub fn new(problem: &CauchyProblem) -> Result<Self, SolverError> {
        let ctx = ModeContext::new(problem)?;
        let theta_m = ctx.theta(ctx.m()).to_vec();
        let theta_m_constant = problem.laplacian_coeff().as_constant().is_some();
        Ok(Self { ctx, lambda: problem.lambda, theta_m, theta_m_constant })
    }

    pub fn context(&self) -> &ModeContext {
        &self.ctx
    }

    /// Whether 𝔇² reduces to Θ_m(−Δ)^λ + F for this problem.
    pub fn squares_to_scalar_operator(&self) -> bool {
        self.theta_m_constant
    }

    fn check(&self, v: &ModeMultivector) -> Result<(), SolverError> {
        if v.grid.len() != self.ctx.grid().len() {
            return Err(SolverError::InvalidProblem("mode multivector lives on another grid".into()));
        }
        Ok(())
    }

    fn jets_of(&self, v: &ModeMultivector, b: &Blade) -> Vec<C> {
        let mut j = v.jets.get(b).cloned().unwrap_or_default();
        j.resize(self.ctx.n0(), ZERO);
        j
    }

    /// 𝔇V. The 𝔣-part of the result carries zero jets; they never matter
    /// for a second application because 𝔣F𝔣 = 𝔣²F = 0.
    pub fn apply(&self, v: &ModeMultivector) -> Result<ModeMultivector, SolverError> {
        self.check(v)?;
        let n = v.dim();
        let mult = dirac_multiplier(&v.s, self.lambda);
        let (f, fp) = witt_pair::<C>(n);
        let root: Vec<C> = self.theta_m.iter().map(|t| C::new(t.sqrt(), 0.0)).collect();
        let mut out = ModeMultivector::zero(v.s.clone(), v.grid.clone());
        for (b, vals) in &v.components {
            let jets = self.jets_of(v, b);
            let scaled: Vec<C> = vals.iter().zip(&root).map(|(a, r)| a * r).collect();
            let scaled_jets: Vec<C> = jets.iter().map(|a| a * root[0]).collect();
            for (k, mk) in mult.iter().enumerate() {
                if *mk == ZERO {
                    continue;
                }
                let (sign, target) = Blade::generator(k).product(*b, n);
                out.add(target, mk * sign as f64, &scaled, &scaled_jets);
            }
            let fv = self.ctx.apply_time_operator(vals, &jets)?.values;
            for (fb, fc) in f.terms() {
                let (sign, target) = fb.product(*b, n);
                out.add(target, fc * sign as f64, &fv, &[]);
            }
            for (fb, fc) in fp.terms() {
                let (sign, target) = fb.product(*b, n);
                out.add(target, fc * sign as f64, vals, &jets);
            }
        }
        Ok(out)
    }

    /// (Θ_m|s|^{2λ} + F)V componentwise.
    pub fn apply_scalar_operator(&self, v: &ModeMultivector) -> Result<ModeMultivector, SolverError> {
        self.check(v)?;
        let r = v.s.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mu = if r == 0.0 { 0.0 } else { r.powf(2.0 * self.lambda) };
        let mut out = ModeMultivector::zero(v.s.clone(), v.grid.clone());
        for (b, vals) in &v.components {
            let mut fv = self.ctx.apply_time_operator(vals, &self.jets_of(v, b))?.values;
            for ((o, a), t) in fv.iter_mut().zip(vals).zip(&self.theta_m) {
                *o += a * (t * mu);
            }
            out.add(*b, C::new(1.0, 0.0), &fv, &[]);
        }
        Ok(out)
    }
}

/// V = 𝔇w for the scalar solution w: vector part Θ_m^{1/2}𝒟_λ w, 𝔣-part
/// F w and 𝔣⁺-part w itself.
#[derive(Debug, Clone)]
pub struct DiracSolution {
    pub dim: usize,
    /// The scalar solution w, which is also the 𝔣⁺ coefficient.
    pub w: SpaceTimeField,
    /// Coefficient of e_k at index k−1.
    pub vector: Vec<SpaceTimeField>,
    pub f_part: SpaceTimeField,
    pub diagnostics: SolveDiagnostics,
    mode_jets: Option<(Vec<f64>, Vec<C>)>,
    theta_m0: f64,
    lambda: f64,
}

impl DiracSolution {
    pub fn f_plus(&self) -> &SpaceTimeField {
        &self.w
    }

    /// The multivector at time node k and spatial point p.
    pub fn multivector_at(&self, k: usize, p: usize) -> Multivector {
        let n = self.dim;
        let mut m = Multivector::zero(n);
        for (axis, f) in self.vector.iter().enumerate() {
            m.add_term(Blade::generator(axis), f.values[k][p]);
        }
        let a = self.f_part.values[k][p];
        let b = self.w.values[k][p];
        m.add_term(Blade::e_plus(n), (a + b) * 0.5);
        m.add_term(Blade::e_minus(n), (b - a) * 0.5);
        m
    }

    /// The whole lattice field at time node k.
    pub fn field_at(&self, k: usize) -> Result<MultivectorField, SolverError> {
        let SpaceLayout::Lattice(l) = &self.w.layout else {
            return Err(SolverError::InvalidProblem("field_at needs a lattice layout".into()));
        };
        let n = self.dim;
        let mut out = MultivectorField::zeros(l.clone());
        let set = |out: &mut MultivectorField, b: Blade, v: Vec<C>| {
            out.set(b, v).map_err(|e| SolverError::InvalidProblem(e.to_string()))
        };
        for (axis, f) in self.vector.iter().enumerate() {
            set(&mut out, Blade::generator(axis), f.values[k].clone())?;
        }
        let a = &self.f_part.values[k];
        let b = &self.w.values[k];
        set(&mut out, Blade::e_plus(n), a.iter().zip(b).map(|(a, b)| (a + b) * 0.5).collect())?;
        set(&mut out, Blade::e_minus(n), a.iter().zip(b).map(|(a, b)| (b - a) * 0.5).collect())?;
        Ok(out)
    }

    /// For a single-mode problem, the solution as a [`ModeMultivector`]
    /// with its φ-jets, ready for [`DiracOperator::apply`].
    pub fn mode_multivector(&self) -> Result<ModeMultivector, SolverError> {
        let Some((s, amps)) = &self.mode_jets else {
            return Err(SolverError::InvalidProblem("mode_multivector needs a single-mode problem".into()));
        };
        let n = self.dim;
        let (f, fp) = witt_pair::<C>(n);
        let mut out = ModeMultivector::zero(s.clone(), self.w.grid.clone());
        let mult = dirac_multiplier(s, self.lambda);
        let root0 = self.theta_m0.sqrt();
        for (axis, fld) in self.vector.iter().enumerate() {
            let vals = fld.trace(0).values;
            let jets: Vec<C> = amps.iter().map(|a| a * mult[axis] * root0).collect();
            out.add(Blade::generator(axis), C::new(1.0, 0.0), &vals, &jets);
        }
        let fv = self.f_part.trace(0).values;
        for (b, c) in f.terms() {
            out.add(*b, *c, &fv, &[]);
        }
        let wv = self.w.trace(0).values;
        for (b, c) in fp.terms() {
            out.add(*b, *c, &wv, amps);
        }
        Ok(out)
    }
}

fn solve_with(
    problem: &CauchyProblem,
    provider: &dyn BasisProvider,
    cfg: &KernelSeriesConfig,
) -> Result<DiracSolution, SolverError> {
    if problem.source.is_some() {
        return Err(SolverError::InvalidProblem("the Dirac solver handles homogeneous problems only".into()));
    }
    let dim = match &problem.space {
        SpaceMode::SingleMode { xi } => xi.len(),
        SpaceMode::Lattice(l) => l.ndim(),
        SpaceMode::Radial { .. } => {
            return Err(SolverError::InvalidProblem("the Dirac solver does not support radial mode".into()))
        }
    };
    let mut modal = Modal::build(problem, provider, true, cfg)?;
    let grid = problem.grid.clone();
    let theta_m = problem.laplacian_coeff().sample(&grid);
    if problem.laplacian_coeff().as_constant().is_none() {
        modal.diagnostics.warnings.push(
            "Theta_m depends on t, so the square of the Dirac factor is not the scalar operator".into(),
        );
    }
    let w = modal.field(&grid, Part::Value)?;
    let f_part = modal.field(&grid, Part::TimeOp)?;
    let nyquist: Vec<bool> = match &problem.space {
        SpaceMode::Lattice(l) => (0..l.len()).map(|k| l.touches_nyquist(k)).collect(),
        _ => vec![false; modal.wavevectors.len()],
    };
    let mults: Vec<Vec<C>> = modal.wavevectors.iter().map(|s| dirac_multiplier(s, problem.lambda)).collect();
    let per_time: Vec<Vec<Vec<C>>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let spec = modal.spectrum(k, Part::Value);
            let root = theta_m[k].sqrt();
            (0..dim)
                .map(|axis| {
                    let s: Vec<C> = spec
                        .iter()
                        .enumerate()
                        .map(|(mode, v)| if nyquist[mode] { ZERO } else { v * mults[mode][axis] * root })
                        .collect();
                    modal.to_physical(&s)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let vector = (0..dim)
        .map(|axis| SpaceTimeField {
            grid: grid.clone(),
            layout: modal.layout.clone(),
            values: per_time.iter().map(|v| v[axis].clone()).collect(),
        })
        .collect();
    let mode_jets = match &problem.space {
        SpaceMode::SingleMode { xi } => Some((
            xi.clone(),
            problem
                .initial_data
                .iter()
                .map(|d| match d {
                    SpatialData::Amplitude(a) => *a,
                    _ => ZERO,
                })
                .collect(),
        )),
        _ => None,
    };
    Ok(DiracSolution {
        dim,
        w,
        vector,
        f_part,
        diagnostics: modal.diagnostics,
        mode_jets,
        theta_m0: theta_m[0],
        lambda: problem.lambda,
    })
}

/// V = 𝔇w with w from the kernel series. Homogeneous problems only.
pub fn solve_dirac(problem: &CauchyProblem, cfg: &KernelSeriesConfig) -> Result<DiracSolution, SolverError> {
    problem.validate()?;
    let ctx = ModeContext::new(problem)?;
    solve_with(problem, &KernelBasis { ctx: &ctx }, cfg)
}

/// As [`solve_dirac`] with closed-form modes (constant coefficients).
pub fn solve_dirac_constant(problem: &CauchyProblem, cfg: &KernelSeriesConfig) -> Result<DiracSolution, SolverError> {
    problem.validate()?;
    let ctx = ModeContext::new(problem)?;
    let provider = ConstantBasis::new(problem, &ctx)?;
    solve_with(problem, &provider, cfg)
}
