//! The JSON problem file, schema "fracdirac.problem/1". Unknown fields are
//! rejected everywhere.

use std::path::Path;
use std::sync::Arc;

use fracdirac_core::inverse::SupportBox;
use fracdirac_core::lattice::PeriodicLattice;
use fracdirac_core::solver::{
    CauchyProblem, KernelSeriesConfig, SourceTerm, SpaceMode, SpatialData, TimeCoefficient,
};
use fracdirac_core::{ClockMap, Complex64, TimeGrid};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "fracdirac.problem/1";

/// A rejected input, with the dotted path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub field: String,
    pub message: String,
}

impl SpecError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    #[default]
    Scalar,
    Dirac,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    KernelSeries,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoeffSpec {
    Constant(f64),
    Power { scale: f64, exponent: f64 },
    /// c₀ + c₁t + c₂t² + …
    Polynomial(Vec<f64>),
}

impl CoeffSpec {
    fn build(&self) -> TimeCoefficient {
        match self {
            CoeffSpec::Constant(c) => TimeCoefficient::constant(*c),
            CoeffSpec::Power { scale, exponent } => TimeCoefficient::power(*scale, *exponent),
            CoeffSpec::Polynomial(c) => {
                let c = c.clone();
                let label = c.iter().enumerate().map(|(k, v)| format!("{v}t^{k}")).collect::<Vec<_>>().join("+");
                TimeCoefficient::function(label, move |t| c.iter().rev().fold(0.0, |acc, v| acc * t + v))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    #[serde(default)]
    pub start: f64,
    pub end: f64,
    pub steps: usize,
    /// Grading exponent r ≥ 1 for nodes t₀ + (T−t₀)(k/N)^r.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    SingleMode { xi: Vec<f64> },
    Lattice { nodes: Vec<usize>, lengths: Vec<f64> },
    Radial { dim: usize, radii: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeTerm {
    pub wavevector: Vec<f64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Zero,
    /// Complex amplitude [re, im] of a single mode.
    Amplitude([f64; 2]),
    /// Σ cos·cos(k·x) + sin·sin(k·x) on a lattice.
    Modes(Vec<ModeTerm>),
    Gaussian { center: Vec<f64>, width: f64, amplitude: f64 },
    /// Radial Fourier profile amplitude·exp(−width²ρ²/2).
    SpectralGaussian { width: f64, amplitude: f64 },
    /// Real node samples in lattice order.
    Values(Vec<f64>),
}

impl DataSpec {
    fn build(&self, space: &SpaceMode, field: &str) -> Result<SpatialData, SpecError> {
        let err = |m: &str| SpecError::new(field, m.to_string());
        match (self, space) {
            (DataSpec::Zero, _) => Ok(SpatialData::Zero),
            (DataSpec::Amplitude([re, im]), SpaceMode::SingleMode { .. }) => {
                Ok(SpatialData::Amplitude(Complex64::new(*re, *im)))
            }
            (DataSpec::Modes(terms), SpaceMode::Lattice(lat)) => {
                if terms.iter().any(|t| t.wavevector.len() != lat.ndim()) {
                    return Err(err("wavevector dimension differs from the lattice"));
                }
                Ok(SpatialData::Field(lat.sample_real(|x| {
                    terms
                        .iter()
                        .map(|t| {
                            let phase: f64 = t.wavevector.iter().zip(x).map(|(k, v)| k * v).sum();
                            t.cos * phase.cos() + t.sin * phase.sin()
                        })
                        .sum()
                })))
            }
            (DataSpec::Gaussian { center, width, amplitude }, SpaceMode::Lattice(lat)) => {
                if center.len() != lat.ndim() || *width <= 0.0 {
                    return Err(err("gaussian needs a center of lattice dimension and width > 0"));
                }
                let (c, w, a) = (center.clone(), *width, *amplitude);
                Ok(SpatialData::Field(lat.sample_real(move |x| {
                    let r2: f64 = x.iter().zip(&c).map(|(v, c)| (v - c).powi(2)).sum();
                    a * (-r2 / (2.0 * w * w)).exp()
                })))
            }
            (DataSpec::SpectralGaussian { width, amplitude }, SpaceMode::Radial { .. }) => {
                let (w, a) = (*width, *amplitude);
                Ok(SpatialData::radial(move |rho| Complex64::new(a * (-(w * rho).powi(2) / 2.0).exp(), 0.0)))
            }
            (DataSpec::Values(v), SpaceMode::Lattice(lat)) => {
                if v.len() != lat.len() {
                    return Err(err(&format!("expected {} values, got {}", lat.len(), v.len())));
                }
                Ok(SpatialData::Field(v.iter().map(|x| Complex64::new(*x, 0.0)).collect()))
            }
            _ => Err(err("this kind of data does not fit the declared space")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub space: DataSpec,
    pub time: CoeffSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub abs_tol: f64,
    pub max_picard_terms: usize,
    pub max_growth: f64,
    pub nu: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let d = KernelSeriesConfig::default();
        Self { abs_tol: d.abs_tol, max_picard_terms: d.max_picard_terms, max_growth: d.max_growth, nu: d.nu }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// When present, w₁ is multiplied by a smooth cutoff of this margin first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseSpec {
    pub w1: DataSpec,
    /// Flat lattice index of the observation point.
    pub observe: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportSpec>,
    /// Lower bound K tested against the recovered ratio.
    #[serde(default = "default_k")]
    pub k_bound: f64,
}

fn default_k() -> f64 {
    1e-6
}

fn default_lambda() -> f64 {
    1.0
}

fn default_clock() -> String {
    "identity".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub schema: String,
    #[serde(default)]
    pub operator: Operator,
    #[serde(default)]
    pub method: Method,
    pub betas: Vec<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    pub coefficients: Vec<CoeffSpec>,
    /// "identity", "power:p", "exp" or "tabulated:FILE" (CSV t,phi,phi_prime,
    /// relative to the spec file).
    #[serde(default = "default_clock")]
    pub clock: String,
    pub time: TimeSpec,
    pub space: SpaceSpec,
    #[serde(default)]
    pub initial_data: Vec<DataSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<InverseSpec>,
}

/// Command-line values that replace fields of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub steps: Option<usize>,
    pub modes: Option<usize>,
    pub tol: Option<f64>,
}

pub struct Built {
    pub problem: CauchyProblem,
    pub cfg: KernelSeriesConfig,
    pub inverse: Option<BuiltInverse>,
}

pub struct BuiltInverse {
    pub w1: Vec<Complex64>,
    pub observe: usize,
    pub support: Option<SupportBox>,
    pub k_bound: f64,
}

pub fn parse(text: &str) -> Result<ProblemSpec, SpecError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: ProblemSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        SpecError::new(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })?;
    if spec.schema != SCHEMA {
        return Err(SpecError::new("schema", format!("expected \"{SCHEMA}\", got \"{}\"", spec.schema)));
    }
    Ok(spec)
}

/// Names the field a core validation message refers to.
fn field_of(message: &str) -> &'static str {
    const KEYS: [(&str, &str); 9] = [
        ("beta", "betas"),
        ("lambda", "lambda"),
        ("Theta", "coefficients"),
        ("coeff", "coefficients"),
        ("initial data", "initial_data"),
        ("clock", "clock"),
        ("source", "source"),
        ("grid", "time"),
        ("lattice", "space"),
    ];
    KEYS.iter().find(|(k, _)| message.contains(k)).map(|(_, f)| *f).unwrap_or("problem")
}

impl ProblemSpec {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.steps {
            self.time.steps = n;
        }
        if let (Some(m), SpaceSpec::Lattice { nodes, .. }) = (o.modes, &mut self.space) {
            nodes.iter_mut().for_each(|v| *v = m);
        }
        if let Some(t) = o.tol {
            self.solver.abs_tol = t;
        }
    }

    pub fn build(&self, base: &Path) -> Result<Built, SpecError> {
        let t = &self.time;
        let grid = match t.grading {
            None => TimeGrid::uniform(t.start, t.end, t.steps),
            Some(r) => TimeGrid::graded(t.start, t.end, t.steps, r),
        }
        .map_err(|e| SpecError::new("time", e.to_string()))?;
        let clock = match self.clock.strip_prefix("tabulated:") {
            Some(file) => {
                let text = std::fs::read_to_string(base.join(file))
                    .map_err(|e| SpecError::new("clock", format!("cannot read {file}: {e}")))?;
                ClockMap::tabulated_from_csv(&text)
            }
            None => ClockMap::from_name(&self.clock, t.start, t.end),
        }
        .map_err(|e| SpecError::new("clock", e.to_string()))?;
        let space = match &self.space {
            SpaceSpec::SingleMode { xi } => SpaceMode::SingleMode { xi: xi.clone() },
            SpaceSpec::Lattice { nodes, lengths } => SpaceMode::Lattice(
                PeriodicLattice::new(nodes.clone(), lengths.clone())
                    .map_err(|e| SpecError::new("space.lattice", e.to_string()))?,
            ),
            SpaceSpec::Radial { dim, radii } => SpaceMode::Radial { dim: *dim, radii: radii.clone() },
        };
        let core = |e: fracdirac_core::solver::SolverError| {
            let m = e.to_string();
            SpecError::new(field_of(&m), m)
        };
        let coeffs = self.coefficients.iter().map(CoeffSpec::build).collect();
        let mut problem = CauchyProblem::new(self.betas.clone(), self.lambda, coeffs, clock, Arc::new(grid)).map_err(core)?;
        let data = self
            .initial_data
            .iter()
            .enumerate()
            .map(|(j, d)| d.build(&space, &format!("initial_data[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if !data.is_empty() || self.inverse.is_none() {
            problem.initial_data = data;
        }
        if let Some(src) = &self.source {
            problem.source = Some(SourceTerm { space: src.space.build(&space, "source.space")?, time: src.time.build() });
        }
        let inverse = match &self.inverse {
            None => None,
            Some(inv) => {
                let SpaceMode::Lattice(lat) = &space else {
                    return Err(SpecError::new("space", "the inverse problem needs a lattice"));
                };
                let SpatialData::Field(mut w1) = inv.w1.build(&space, "inverse.w1")? else {
                    return Err(SpecError::new("inverse.w1", "w1 must be a lattice field"));
                };
                let support = inv.support.as_ref().map(|s| SupportBox { lower: s.lower.clone(), upper: s.upper.clone() });
                if let (Some(b), Some(margin)) = (&support, inv.support.as_ref().and_then(|s| s.taper)) {
                    w1 = b.taper(lat, &w1, margin);
                }
                Some(BuiltInverse { w1, observe: inv.observe, support, k_bound: inv.k_bound })
            }
        };
        problem.space = space;
        if inverse.is_none() {
            problem.validate().map_err(core)?;
        }
        let s = &self.solver;
        let cfg = KernelSeriesConfig {
            abs_tol: s.abs_tol,
            max_picard_terms: s.max_picard_terms,
            max_growth: s.max_growth,
            time_steps: t.steps,
            nu: s.nu,
        };
        Ok(Built { problem, cfg, inverse })
    }
}
