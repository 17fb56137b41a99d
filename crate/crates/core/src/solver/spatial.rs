use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::hankel::HankelQuadrature;
use super::kernel::{convergence_check, ConvergenceReport, ModeContext};
use super::{CauchyProblem, KernelSeriesConfig, SolverError, SpaceMode, SpatialData, SpectralSymbol};
use crate::lattice::PeriodicLattice;
use crate::timefrac::{TimeGrid, TimeSeries};

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);

/// Modes whose data are below this fraction of the largest amplitude are
/// treated as exactly zero. Sampling and FFT leave rounding noise near
/// 1e-16 in every mode, and a Laplacian applied to the data lifts it by
/// |s|², so the floor sits well above that.
const SKIP_RELATIVE: f64 = 1e-12;

/// Where the values of a [`SpaceTimeField`] live.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceLayout {
    /// Fourier amplitude of a single mode.
    SingleMode { xi: Vec<f64> },
    Lattice(PeriodicLattice),
    /// Values at the radii |x| listed.
    Radial { dim: usize, radii: Vec<f64> },
}

impl SpaceLayout {
    pub fn points(&self) -> usize {
        match self {
            SpaceLayout::SingleMode { .. } => 1,
            SpaceLayout::Lattice(l) => l.len(),
            SpaceLayout::Radial { radii, .. } => radii.len(),
        }
    }
}

/// Time-major samples: `values[k][p]` is the value at time node k, point p.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub grid: Arc<TimeGrid>,
    pub layout: SpaceLayout,
    pub values: Vec<Vec<C>>,
}

impl SpaceTimeField {
    pub fn zeros(grid: Arc<TimeGrid>, layout: SpaceLayout) -> Self {
        let p = layout.points();
        let values = vec![vec![ZERO; p]; grid.len()];
        Self { grid, layout, values }
    }

    /// The time trace at one spatial point.
    pub fn trace(&self, point: usize) -> TimeSeries {
        TimeSeries::new(self.grid.clone(), self.values.iter().map(|v| v[point]).collect())
            .expect("trace length matches the grid")
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveDiagnostics {
    pub convergence: ConvergenceReport,
    pub modes_solved: usize,
    pub modes_skipped: usize,
    pub distinct_symbols: usize,
    pub max_picard_terms: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ScalarSolution {
    pub field: SpaceTimeField,
    pub diagnostics: SolveDiagnostics,
}

/// Time functions of one frequency magnitude: `basis[j]` is the response
/// to a unit j-th datum, `src` the response to the source time profile, and
/// the `*_op` entries are (ᶜD^{β₀} + Σ_{i<m}ΘᵢᶜD^{βᵢ}) applied to them.
pub(crate) struct ModeBasis {
    pub basis: Vec<Vec<C>>,
    pub basis_op: Vec<Vec<C>>,
    pub src: Option<Vec<C>>,
    pub src_op: Option<Vec<C>>,
    pub terms: usize,
}

pub(crate) trait BasisProvider: Sync {
    fn basis(
        &self,
        group: usize,
        symbol: SpectralSymbol,
        needed: &[bool],
        source_time: Option<&[C]>,
        want_op: bool,
        cfg: &KernelSeriesConfig,
    ) -> Result<ModeBasis, SolverError>;
}

/// Kernel-series provider.
pub(crate) struct KernelBasis<'a> {
    pub ctx: &'a ModeContext,
}

impl BasisProvider for KernelBasis<'_> {
    fn basis(
        &self,
        _group: usize,
        symbol: SpectralSymbol,
        needed: &[bool],
        source_time: Option<&[C]>,
        want_op: bool,
        cfg: &KernelSeriesConfig,
    ) -> Result<ModeBasis, SolverError> {
        let ctx = self.ctx;
        let n0 = ctx.n0();
        let len = ctx.grid().len();
        let mut basis = Vec::with_capacity(n0);
        let mut basis_op = Vec::with_capacity(n0);
        let mut terms = 0;
        for j in 0..n0 {
            if !needed[j] {
                basis.push(Vec::new());
                basis_op.push(Vec::new());
                continue;
            }
            let (y, t) = ctx.kernel_y(j, symbol, ctx.h_variant(j), cfg)?;
            terms = terms.max(t);
            let iy = ctx.integrate_b0(&y);
            basis.push(iy.iter().zip(ctx.psi(j)).map(|(v, p)| v + p).collect());
            if want_op {
                let mut unit = vec![ZERO; n0];
                unit[j] = C::new(1.0, 0.0);
                basis_op.push(ctx.time_operator_from_kernel(&unit, &y));
            } else {
                basis_op.push(Vec::new());
            }
        }
        let (src, src_op) = match source_time {
            Some(g) => {
                let (y, t) = ctx.source_y(symbol, g, cfg)?;
                terms = terms.max(t);
                let op = want_op.then(|| ctx.time_operator_from_kernel(&vec![ZERO; n0], &y));
                (Some(ctx.integrate_b0(&y)), op)
            }
            None => (None, None),
        };
        debug_assert!(basis.iter().all(|b| b.is_empty() || b.len() == len));
        Ok(ModeBasis { basis, basis_op, src, src_op, terms })
    }
}

/// Data of all modes in Fourier form plus their grouping by |s|.
pub(crate) struct Modal {
    pub layout: SpaceLayout,
    pub wavevectors: Vec<Vec<f64>>,
    pub amps: Vec<Vec<C>>,
    pub src_amp: Vec<C>,
    pub group_of: Vec<Option<usize>>,
    pub groups: Vec<ModeBasis>,
    pub hankel: Option<HankelQuadrature>,
    pub diagnostics: SolveDiagnostics,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Part {
    Value,
    TimeOp,
}

fn spectrum_of(layout: &SpaceLayout, d: &SpatialData, modes: &[f64], hq: Option<&HankelQuadrature>) -> Result<Vec<C>, SolverError> {
    let count = match layout {
        SpaceLayout::SingleMode { .. } => 1,
        SpaceLayout::Lattice(l) => l.len(),
        SpaceLayout::Radial { .. } => hq.map(|h| h.nodes().len()).unwrap_or(0),
    };
    Ok(match (layout, d) {
        (_, SpatialData::Zero) => vec![ZERO; count],
        (SpaceLayout::SingleMode { .. }, SpatialData::Amplitude(a)) => vec![*a],
        (SpaceLayout::Lattice(l), SpatialData::Field(v)) => l.forward(v)?,
        (SpaceLayout::Radial { .. }, SpatialData::RadialSpectrum(f)) => modes.iter().map(|&r| f(r)).collect(),
        _ => return Err(SolverError::InvalidProblem("datum does not match the space mode".into())),
    })
}

impl Modal {
    pub fn build(
        problem: &CauchyProblem,
        provider: &dyn BasisProvider,
        want_op: bool,
        cfg: &KernelSeriesConfig,
    ) -> Result<Self, SolverError> {
        problem.validate()?;
        let n0 = problem.n0();
        let (layout, hankel, wavevectors): (SpaceLayout, Option<HankelQuadrature>, Vec<Vec<f64>>) = match &problem.space {
            SpaceMode::SingleMode { xi } => (SpaceLayout::SingleMode { xi: xi.clone() }, None, vec![xi.clone()]),
            SpaceMode::Lattice(l) => {
                (SpaceLayout::Lattice(l.clone()), None, (0..l.len()).map(|k| l.wavevector(k)).collect())
            }
            SpaceMode::Radial { dim, radii } => {
                let mut profiles: Vec<Arc<dyn Fn(f64) -> C + Send + Sync>> = Vec::new();
                for d in problem.initial_data.iter().chain(problem.source.iter().map(|s| &s.space)) {
                    if let SpatialData::RadialSpectrum(f) = d {
                        profiles.push(f.clone());
                    }
                }
                let x_max = radii.iter().cloned().fold(0.0, f64::max);
                let hq = HankelQuadrature::for_profiles(*dim, x_max, &profiles)?;
                let wv = hq.nodes().iter().map(|&r| vec![r]).collect();
                (SpaceLayout::Radial { dim: *dim, radii: radii.clone() }, Some(hq), wv)
            }
        };
        let radial_nodes: Vec<f64> = hankel.as_ref().map(|h| h.nodes().to_vec()).unwrap_or_default();
        let per_datum: Vec<Vec<C>> = problem
            .initial_data
            .iter()
            .map(|d| spectrum_of(&layout, d, &radial_nodes, hankel.as_ref()))
            .collect::<Result<_, _>>()?;
        let modes = wavevectors.len();
        let amps: Vec<Vec<C>> = (0..modes).map(|k| per_datum.iter().map(|s| s[k]).collect()).collect();
        let src_amp = match &problem.source {
            Some(s) => spectrum_of(&layout, &s.space, &radial_nodes, hankel.as_ref())?,
            None => vec![ZERO; modes],
        };
        let source_time: Option<Vec<C>> =
            problem.source.as_ref().map(|s| s.time.sample(&problem.grid).into_iter().map(|v| C::new(v, 0.0)).collect());

        let biggest = amps.iter().flatten().chain(&src_amp).map(|c| c.norm()).fold(0.0, f64::max);
        let floor = biggest * SKIP_RELATIVE;
        let xi_of = |k: usize| wavevectors[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut keys: HashMap<u64, usize> = HashMap::new();
        let mut group_xi: Vec<f64> = Vec::new();
        let mut group_needed: Vec<(Vec<bool>, bool)> = Vec::new();
        let mut group_amp: Vec<f64> = Vec::new();
        let mut group_of = vec![None; modes];
        let mut skipped = 0;
        for k in 0..modes {
            let need: Vec<bool> = amps[k].iter().map(|a| a.norm() > floor).collect();
            let need_src = source_time.is_some() && src_amp[k].norm() > floor;
            if !need.iter().any(|b| *b) && !need_src {
                skipped += 1;
                continue;
            }
            let xi = xi_of(k);
            let key = (xi * 1e9).round() as u64;
            let g = *keys.entry(key).or_insert_with(|| {
                group_xi.push(xi);
                group_needed.push((vec![false; n0], false));
                group_amp.push(0.0);
                group_xi.len() - 1
            });
            let amp = amps[k].iter().chain(need_src.then_some(&src_amp[k])).map(|a| a.norm()).fold(0.0, f64::max);
            group_amp[g] = group_amp[g].max(amp);
            for (a, b) in group_needed[g].0.iter_mut().zip(&need) {
                *a |= *b;
            }
            group_needed[g].1 |= need_src;
            group_of[k] = Some(g);
        }
        let groups: Vec<ModeBasis> = (0..group_xi.len())
            .into_par_iter()
            .map(|g| {
                let symbol = SpectralSymbol::new(group_xi[g], problem.lambda);
                let src = if group_needed[g].1 { source_time.as_deref() } else { None };
                // Growth only costs accuracy in proportion to the data it multiplies.
                let weight = (group_amp[g] / biggest).clamp(1e-300, 1.0);
                let local = KernelSeriesConfig { max_growth: cfg.max_growth / weight, ..*cfg };
                provider.basis(g, symbol, &group_needed[g].0, src, want_op, &local)
            })
            .collect::<Result<_, _>>()?;

        let convergence = convergence_check(problem, cfg.nu)?;
        let mut warnings = Vec::new();
        if !convergence.pass {
            warnings.push(format!(
                "convergence hypothesis not met at nu = {}: C = {:.3e} >= 1 (the series may still converge)",
                convergence.nu, convergence.c_estimate
            ));
        }
        let diagnostics = SolveDiagnostics {
            convergence,
            modes_solved: modes - skipped,
            modes_skipped: skipped,
            distinct_symbols: groups.len(),
            max_picard_terms: groups.iter().map(|g| g.terms).max().unwrap_or(0),
            warnings,
        };
        Ok(Self { layout, wavevectors, amps, src_amp, group_of, groups, hankel, diagnostics })
    }

    /// Fourier-side values of every mode at time node `k`.
    pub fn spectrum(&self, k: usize, part: Part) -> Vec<C> {
        (0..self.wavevectors.len())
            .map(|mode| {
                let Some(g) = self.group_of[mode] else { return ZERO };
                let gb = &self.groups[g];
                let mut acc = ZERO;
                for (j, a) in self.amps[mode].iter().enumerate() {
                    let series = match part {
                        Part::Value => &gb.basis[j],
                        Part::TimeOp => &gb.basis_op[j],
                    };
                    if !series.is_empty() {
                        acc += a * series[k];
                    }
                }
                let src = match part {
                    Part::Value => gb.src.as_ref(),
                    Part::TimeOp => gb.src_op.as_ref(),
                };
                if let Some(s) = src {
                    acc += self.src_amp[mode] * s[k];
                }
                acc
            })
            .collect()
    }

    /// Maps a spectrum to physical values in the layout.
    pub fn to_physical(&self, spectrum: &[C]) -> Result<Vec<C>, SolverError> {
        Ok(match &self.layout {
            SpaceLayout::SingleMode { .. } => spectrum.to_vec(),
            SpaceLayout::Lattice(l) => l.inverse(spectrum)?,
            SpaceLayout::Radial { radii, .. } => {
                let hq = self.hankel.as_ref().expect("radial layout has a quadrature");
                radii.iter().map(|&x| hq.transform(spectrum, x)).collect()
            }
        })
    }

    pub fn field(&self, grid: &Arc<TimeGrid>, part: Part) -> Result<SpaceTimeField, SolverError> {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| self.to_physical(&self.spectrum(k, part)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpaceTimeField { grid: grid.clone(), layout: self.layout.clone(), values })
    }
}

/// Solves the scalar problem by kernel series, mode by mode.
pub fn solve_scalar(problem: &CauchyProblem, cfg: &KernelSeriesConfig) -> Result<ScalarSolution, SolverError> {
    problem.validate()?;
    let ctx = ModeContext::new(problem)?;
    let modal = Modal::build(problem, &KernelBasis { ctx: &ctx }, false, cfg)?;
    let field = modal.field(&problem.grid, Part::Value)?;
    Ok(ScalarSolution { field, diagnostics: modal.diagnostics })
}

/// (−Δ)^λ on a periodic lattice: the Fourier multiplier |s|^{2λ}.
pub fn frac_laplacian(lattice: &PeriodicLattice, values: &[C], lambda: f64) -> Result<Vec<C>, SolverError> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(SolverError::InvalidProblem(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok(lattice.apply_multiplier(values, |s, _| {
        let r = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        C::new(SpectralSymbol::new(r, lambda).multiplier, 0.0)
    })?)
}
