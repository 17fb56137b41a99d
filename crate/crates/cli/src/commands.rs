use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fracdirac_core::inverse::{
    recover_theta, synthesize_observations, validate_hypotheses, InverseError, ObservationPair,
};
use fracdirac_core::solver::{
    convergence_check, solve_dirac, solve_dirac_constant, solve_scalar, solve_scalar_constant, ConvergenceReport,
    SolveDiagnostics, SolverError, SpaceLayout, SpaceTimeField,
};
use fracdirac_core::specfun::{bessel_j, kilbas_saigo, ml_multivariate, SeriesConfig, SeriesValue};
use fracdirac_core::{ClockMap, Complex64, FracOrder, KilbasSaigoParams, MultiMLParams, TimeGrid, TimeSeries};
use serde_json::{json, Value};

use crate::output::{num, sha256_hex, write_output, Csv, RunManifest};
use crate::spec::{self, Method, Operator, Overrides, SpecError};

/// Exit status and a short machine-readable reason.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    BadSpec,
    Io,
    Convergence,
    Numerical,
    SelfCheck,
}

impl Failure {
    pub fn exit_code(self) -> i32 {
        match self {
            Failure::BadSpec | Failure::Io => 1,
            Failure::Convergence | Failure::Numerical => 2,
            Failure::SelfCheck => 3,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Failure::BadSpec => "bad_spec",
            Failure::Io => "io",
            Failure::Convergence => "convergence",
            Failure::Numerical => "numerical",
            Failure::SelfCheck => "selfcheck_failed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: Failure,
    pub field: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Failure, message: impl Into<String>) -> Self {
        Self { kind, field: None, message: message.into() }
    }
}

impl fmt::Display for CliError {
    /// `error code=<code> [field=<path>] message=<text>` on one line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error code={}", self.kind.code())?;
        if let Some(field) = &self.field {
            write!(f, " field={field}")?;
        }
        write!(f, " message={}", self.message.replace('\n', " "))
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        Self { kind: Failure::BadSpec, field: Some(e.field), message: e.message }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::new(Failure::Io, format!("{}: {e}", path.display()))
}

fn solver_err(e: SolverError) -> CliError {
    match e {
        SolverError::NonConvergence { .. } | SolverError::PrecisionLoss { .. } => {
            CliError::new(Failure::Convergence, e.to_string())
        }
        SolverError::InvalidProblem(m) => CliError::from(SpecError::new("problem", m)),
        other => CliError::new(Failure::Numerical, other.to_string()),
    }
}

fn inverse_err(e: InverseError) -> CliError {
    match e {
        InverseError::Solver(s) => solver_err(s),
        InverseError::InvalidInput(m) => CliError::from(SpecError::new("inverse", m)),
        InverseError::SupportViolation { .. } => CliError::from(SpecError::new("inverse.support", e.to_string())),
        other => CliError::new(Failure::Numerical, other.to_string()),
    }
}

fn report_json(r: &ConvergenceReport) -> Value {
    json!({ "nu": r.nu, "c_estimate": r.c_estimate, "pass": r.pass })
}

fn diagnostics_json(d: &SolveDiagnostics) -> Value {
    json!({
        "convergence": report_json(&d.convergence),
        "modes_solved": d.modes_solved,
        "modes_skipped": d.modes_skipped,
        "distinct_symbols": d.distinct_symbols,
        "max_picard_terms": d.max_picard_terms,
    })
}

/// The outcome of a command that got far enough to own a manifest.
pub struct Run {
    pub manifest: RunManifest,
    pub error: Option<CliError>,
}

fn load_spec(path: &Path, overrides: &Overrides, manifest: &mut RunManifest) -> Result<spec::Built, CliError> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    manifest.input_digest = Some(sha256_hex(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::from(SpecError::new("<root>", "spec is not UTF-8")))?;
    let mut s = spec::parse(&text)?;
    s.apply(overrides);
    manifest.config = serde_json::to_value(&s).expect("spec serializes");
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(s.build(base)?)
}

fn point_columns(layout: &SpaceLayout) -> Vec<String> {
    match layout {
        SpaceLayout::SingleMode { .. } => vec![],
        SpaceLayout::Lattice(l) => (0..l.ndim()).map(|k| format!("x{k}")).collect(),
        SpaceLayout::Radial { .. } => vec!["r".into()],
    }
}

fn point_coords(layout: &SpaceLayout, p: usize) -> Vec<String> {
    match layout {
        SpaceLayout::SingleMode { .. } => vec![],
        SpaceLayout::Lattice(l) => l.coords(p).into_iter().map(num).collect(),
        SpaceLayout::Radial { radii, .. } => vec![num(radii[p])],
    }
}

/// Rows ordered by time node, then point; one (re, im) pair per component.
fn field_csv(components: &[(&str, &SpaceTimeField)]) -> Csv {
    let first = components[0].1;
    let mut header = vec!["t".to_string(), "point".to_string()];
    header.extend(point_columns(&first.layout));
    for (name, _) in components {
        header.push(format!("{name}_re"));
        header.push(format!("{name}_im"));
    }
    let mut csv = Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    for (k, &t) in first.grid.nodes().iter().enumerate() {
        for p in 0..first.layout.points() {
            let mut row = vec![num(t), p.to_string()];
            row.extend(point_coords(&first.layout, p));
            for (_, f) in components {
                let v = f.values[k][p];
                row.push(num(v.re));
                row.push(num(v.im));
            }
            csv.line(row);
        }
    }
    csv
}

pub fn solve_forward(spec_path: &Path, out: &Path, overrides: &Overrides) -> Run {
    let mut manifest = RunManifest::new("solve-forward");
    let error = forward_inner(spec_path, out, overrides, &mut manifest).err();
    Run { manifest, error }
}

fn forward_inner(spec_path: &Path, out: &Path, overrides: &Overrides, m: &mut RunManifest) -> Result<(), CliError> {
    let built = load_spec(spec_path, overrides, m)?;
    if built.inverse.is_some() {
        return Err(SpecError::new("inverse", "solve-forward does not take an inverse section").into());
    }
    let op: Operator = serde_json::from_value(m.config["operator"].clone()).expect("echoed operator");
    let method: Method = serde_json::from_value(m.config["method"].clone()).expect("echoed method");
    let (p, cfg) = (&built.problem, &built.cfg);
    let on_fail = |e: SolverError, m: &mut RunManifest| {
        let err = solver_err(e);
        if err.kind == Failure::Convergence {
            if let Ok(r) = convergence_check(p, cfg.nu) {
                m.convergence.push(report_json(&r));
            }
        }
        err
    };
    let csv = match op {
        Operator::Scalar => {
            let sol = match method {
                Method::KernelSeries => solve_scalar(p, cfg),
                Method::ClosedForm => solve_scalar_constant(p, cfg),
            }
            .map_err(|e| on_fail(e, m))?;
            m.convergence.push(diagnostics_json(&sol.diagnostics));
            m.warnings.extend(sol.diagnostics.warnings.iter().cloned());
            field_csv(&[("w", &sol.field)])
        }
        Operator::Dirac => {
            let sol = match method {
                Method::KernelSeries => solve_dirac(p, cfg),
                Method::ClosedForm => solve_dirac_constant(p, cfg),
            }
            .map_err(|e| on_fail(e, m))?;
            m.convergence.push(diagnostics_json(&sol.diagnostics));
            m.warnings.extend(sol.diagnostics.warnings.iter().cloned());
            let names: Vec<String> = (1..=sol.dim).map(|k| format!("e{k}")).collect();
            let mut comps: Vec<(&str, &SpaceTimeField)> =
                names.iter().map(String::as_str).zip(sol.vector.iter()).collect();
            comps.push(("f", &sol.f_part));
            comps.push(("f_plus", sol.f_plus()));
            field_csv(&comps)
        }
    };
    m.outputs.push(write_output(out, "solution.csv", csv.as_str()).map_err(|e| io_err(out, e))?);
    Ok(())
}

/// Inverse input: a full problem file, or two (t, value) trace files.
pub enum InverseInput {
    Spec(PathBuf),
    Traces { h1: PathBuf, h2: PathBuf, alpha: f64, clock: String },
}

pub fn solve_inverse(input: &InverseInput, out: &Path, overrides: &Overrides) -> Run {
    let mut manifest = RunManifest::new("solve-inverse");
    let error = inverse_inner(input, out, overrides, &mut manifest).err();
    Run { manifest, error }
}

/// Times, values and the raw bytes (for the input digest).
type Trace = (Vec<f64>, Vec<f64>, Vec<u8>);

fn read_trace(path: &Path) -> Result<Trace, CliError> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<(f64, f64)> = match cells.as_slice() {
            [a, b] => a.parse().ok().zip(b.parse().ok()),
            _ => None,
        };
        match parsed {
            Some((a, b)) => {
                t.push(a);
                v.push(b);
            }
            None if i == 0 => continue,
            None => {
                return Err(SpecError::new(path.display().to_string(), format!("line {}: expected t,value", i + 1)).into())
            }
        }
    }
    Ok((t, v, bytes))
}

fn traces_to_obs(h1: &Path, h2: &Path, alpha: f64, clock: &str, m: &mut RunManifest) -> Result<ObservationPair, CliError> {
    let (t1, v1, b1) = read_trace(h1)?;
    let (t2, v2, b2) = read_trace(h2)?;
    m.input_digest = Some(sha256_hex(&[b1, b2].concat()));
    m.config = json!({ "h1": h1, "h2": h2, "alpha": alpha, "clock": clock });
    if t1 != t2 {
        return Err(SpecError::new("h2", "h1 and h2 must be sampled at the same times").into());
    }
    let grid = Arc::new(TimeGrid::from_nodes(t1).map_err(|e| SpecError::new("h1", e.to_string()))?);
    let clock = ClockMap::from_name(clock, grid.start(), grid.end()).map_err(|e| SpecError::new("clock", e.to_string()))?;
    let alpha = FracOrder::new(alpha).map_err(|e| SpecError::new("alpha", e.to_string()))?;
    let series = |v: Vec<f64>| TimeSeries::new(grid.clone(), v.into_iter().map(|x| Complex64::new(x, 0.0)).collect());
    let h1 = series(v1).map_err(|e| SpecError::new("h1", e.to_string()))?;
    let h2 = series(v2).map_err(|e| SpecError::new("h2", e.to_string()))?;
    ObservationPair::new(h1, h2, alpha, clock).map_err(inverse_err)
}

fn inverse_inner(input: &InverseInput, out: &Path, overrides: &Overrides, m: &mut RunManifest) -> Result<(), CliError> {
    let (obs, k_bound, nu) = match input {
        InverseInput::Spec(path) => {
            let built = load_spec(path, overrides, m)?;
            let Some(inv) = &built.inverse else {
                return Err(SpecError::new("inverse", "missing inverse section").into());
            };
            let obs = synthesize_observations(&built.problem, &inv.w1, inv.support.as_ref(), inv.observe, &built.cfg)
                .map_err(inverse_err)?;
            (obs, inv.k_bound, built.cfg.nu)
        }
        InverseInput::Traces { h1, h2, alpha, clock } => {
            (traces_to_obs(h1, h2, *alpha, clock, m)?, 1e-6, fracdirac_core::KernelSeriesConfig::default().nu)
        }
    };
    let rec = recover_theta(&obs).map_err(inverse_err)?;
    let report = validate_hypotheses(&obs, k_bound, nu).map_err(inverse_err)?;

    let mut csv = Csv::new(&["t", "theta", "mask"]);
    for (k, &t) in obs.h1.times().iter().enumerate() {
        let mask = if rec.valid[k] { "0" } else { "1" };
        csv.line([num(t), num(rec.theta.values[k].re), mask.to_string()]);
    }
    m.outputs.push(write_output(out, "theta.csv", csv.as_str()).map_err(|e| io_err(out, e))?);

    let masked: BTreeMap<String, usize> = rec.diagnostics.masked.iter().fold(BTreeMap::new(), |mut acc, (_, why)| {
        *acc.entry(format!("{why:?}")).or_default() += 1;
        acc
    });
    let conditions: Vec<Value> = report
        .conditions
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "status": c.status.to_string(),
                "value": if c.value.is_finite() { json!(c.value) } else { Value::Null },
                "evidence": c.evidence,
                "node": c.node,
            })
        })
        .collect();
    let hyp = json!({
        "observation_node": obs.q,
        "min_ratio": rec.diagnostics.min_ratio,
        "masked": masked,
        "warning_count": rec.diagnostics.warnings.len(),
        "conditions": conditions,
    });
    let text = serde_json::to_string_pretty(&hyp).expect("report serializes") + "\n";
    m.outputs.push(write_output(out, "hypotheses.json", &text).map_err(|e| io_err(out, e))?);
    m.convergence.push(hyp);
    m.warnings.extend(rec.diagnostics.warnings);
    Ok(())
}

/// `key=value` pairs separated by commas; list values use ';'.
fn parse_params(text: &str) -> Result<BTreeMap<String, Vec<f64>>, CliError> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::from(SpecError::new("params", format!("'{item}' is not key=value"))))?;
        let vals = v
            .split(';')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::from(SpecError::new(format!("params.{k}"), format!("cannot parse '{v}'"))))?;
        out.insert(k.trim().to_string(), vals);
    }
    Ok(out)
}

fn scalar(p: &BTreeMap<String, Vec<f64>>, key: &str) -> Result<f64, CliError> {
    match p.get(key).map(Vec::as_slice) {
        Some([v]) => Ok(*v),
        Some(_) => Err(SpecError::new(format!("params.{key}"), "expected one number").into()),
        None => Err(SpecError::new(format!("params.{key}"), "missing").into()),
    }
}

/// Evenly spaced arguments `from:to:count`.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::from(SpecError::new("range", format!("'{text}' is not from:to:count")));
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    let (a, b): (f64, f64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    Ok((0..n).map(|k| if n == 1 { a } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect())
}

pub fn eval(function: &str, params: &str, range: &str, out: Option<&Path>) -> Result<(Run, String), CliError> {
    let mut manifest = RunManifest::new("eval-ml");
    let p = parse_params(params)?;
    let xs = parse_range(range)?;
    manifest.config = json!({ "function": function, "params": p, "range": range });
    let cfg = SeriesConfig::default();
    let spec_err = |e: fracdirac_core::specfun::SpecFunError| CliError::from(SpecError::new("params", e.to_string()));
    let evaluate: Box<dyn Fn(f64) -> Result<SeriesValue, fracdirac_core::specfun::SpecFunError>> = match function {
        "ml" => {
            let params = MultiMLParams::new(vec![scalar(&p, "alpha")?], scalar(&p, "beta")?).map_err(spec_err)?;
            Box::new(move |x| ml_multivariate(&params, &[Complex64::new(x, 0.0)], &cfg))
        }
        "ml-multi" => {
            let a = p.get("a").cloned().ok_or_else(|| CliError::from(SpecError::new("params.a", "missing")))?;
            let coeffs = p.get("coeffs").cloned().unwrap_or_else(|| vec![1.0; a.len()]);
            if coeffs.len() != a.len() {
                return Err(SpecError::new("params.coeffs", "needs one entry per a_i").into());
            }
            let params = MultiMLParams::new(a, scalar(&p, "b")?).map_err(spec_err)?;
            Box::new(move |x| {
                let z: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(c * x, 0.0)).collect();
                ml_multivariate(&params, &z, &cfg)
            })
        }
        "kilbas-saigo" => {
            let params = KilbasSaigoParams::new(
                scalar(&p, "alpha")?,
                scalar(&p, "beta")?,
                scalar(&p, "gamma")?,
                scalar(&p, "lambda")?,
            )
            .map_err(spec_err)?;
            Box::new(move |x| kilbas_saigo(&params, Complex64::new(x, 0.0), &cfg))
        }
        "bessel-j" => {
            let nu = scalar(&p, "nu")?;
            if nu < -0.5 {
                return Err(SpecError::new("params.nu", "order must be >= -1/2").into());
            }
            if xs.iter().any(|x| *x < 0.0) {
                return Err(SpecError::new("range", "bessel-j needs arguments >= 0").into());
            }
            Box::new(move |x| Ok(SeriesValue { value: Complex64::new(bessel_j(nu, x), 0.0), error_estimate: 0.0, terms: 0 }))
        }
        other => {
            return Err(SpecError::new("function", format!("unknown function '{other}'; use ml, ml-multi, kilbas-saigo or bessel-j")).into())
        }
    };
    let mut csv = Csv::new(&["argument", "value", "error_estimate"]);
    for x in xs {
        let v = evaluate(x).map_err(|e| CliError::new(Failure::Numerical, format!("at {x}: {e}")))?;
        csv.line([num(x), num(v.value.re), num(v.error_estimate)]);
    }
    if let Some(dir) = out {
        manifest.outputs.push(write_output(dir, "table.csv", csv.as_str()).map_err(|e| io_err(dir, e))?);
    }
    Ok((Run { manifest, error: None }, csv.as_str().to_string()))
}
