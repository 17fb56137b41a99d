//! Invariant suites run by `fracdirac selfcheck`. Each suite belongs to one
//! core module, so a broken building block shows up under its own name.

use std::f64::consts::PI;
use std::sync::Arc;

use fracdirac_core::clifford::{dirac_apply_fd, witt_pair, Blade, Multivector, MultivectorField};
use fracdirac_core::inverse::{recover_theta, synthesize_observations};
use fracdirac_core::lattice::PeriodicLattice;
use fracdirac_core::solver::{
    solve_scalar, CauchyProblem, DiracOperator, KernelSeriesConfig, ModeMultivector, SpaceMode, SpatialData,
    TimeCoefficient,
};
use fracdirac_core::specfun::{bessel_j, kilbas_saigo, ml_two_param, SeriesConfig};
use fracdirac_core::timefrac::{
    frac_integral, interior_indices, rl_derivative, ClockMap, FracOrder, TimeGrid, TimeSeries, DEFAULT_INTERIOR_LAYER,
};
use fracdirac_core::{Complex64, KilbasSaigoParams};
use serde::Serialize;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    pub fn steps(self) -> usize {
        match self {
            Level::Fast => 512,
            Level::Full => 2048,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Invariant {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub pass: bool,
    pub invariants: Vec<Invariant>,
}

fn check(name: impl Into<String>, measured: f64, tolerance: f64) -> Invariant {
    // NaN never passes
    Invariant { name: name.into(), measured, tolerance, pass: measured <= tolerance }
}

fn failed(name: &str, e: impl std::fmt::Display) -> Invariant {
    Invariant { name: format!("{name}: {e}"), measured: f64::INFINITY, tolerance: 0.0, pass: false }
}

fn rel_sup(a: &TimeSeries, b: &TimeSeries, idx: &[usize]) -> f64 {
    let num = idx.iter().map(|&k| (a.values[k] - b.values[k]).norm()).fold(0.0, f64::max);
    let den = idx.iter().map(|&k| b.values[k].norm()).fold(0.0, f64::max);
    num / den
}

fn timefrac_suite(level: Level) -> Vec<Invariant> {
    let steps = level.steps();
    // the bound holds at 2048 steps; the error is at least first order in h
    let tol = 1e-3 * 2048.0 / steps as f64;
    let clocks = [
        ClockMap::identity(0.0, 1.0),
        ClockMap::power(2.0, 0.5, 1.5),
        ClockMap::exp(0.0, 1.0),
    ];
    let functions: [(&str, fn(f64) -> f64); 4] =
        [("1", |_| 1.0), ("t", |t| t), ("sin t", f64::sin), ("exp(-t)", |t| (-t).exp())];
    let mut out = Vec::new();
    for clock in clocks {
        let clock = clock.expect("registered clock");
        let grid = Arc::new(TimeGrid::uniform(clock.t_start, clock.t_end, steps).expect("grid"));
        for alpha in [0.3, 0.7, 1.4] {
            let order = FracOrder::new(alpha).expect("order");
            let idx = interior_indices(&grid, order.n, DEFAULT_INTERIOR_LAYER);
            for (label, f) in functions {
                let name = format!("D I f = f [{} alpha={alpha} f={label}]", clock.name());
                let fs = TimeSeries::from_real_fn(grid.clone(), f);
                match frac_integral(order, &clock, &fs).and_then(|i| rl_derivative(order, &clock, &i)) {
                    Ok(d) => out.push(check(name, rel_sup(&d, &fs, &idx), tol)),
                    Err(e) => out.push(failed(&name, e)),
                }
            }
        }
    }
    // I^{1/2} 1 = 2 sqrt(t/pi), with the constant written out
    let clock = ClockMap::identity(0.0, 1.0).expect("identity clock");
    let grid = Arc::new(TimeGrid::uniform(0.0, 1.0, steps).expect("grid"));
    let one = TimeSeries::from_real_fn(grid.clone(), |_| 1.0);
    let want = TimeSeries::from_real_fn(grid.clone(), |t| 2.0 * (t / PI).sqrt());
    let idx: Vec<usize> = (1..grid.len()).collect();
    match frac_integral(FracOrder::new(0.5).expect("order"), &clock, &one) {
        Ok(i) => out.push(check("I^(1/2) 1 = 2 sqrt(t/pi)", rel_sup(&i, &want, &idx), 1e-10)),
        Err(e) => out.push(failed("I^(1/2) 1", e)),
    }
    out
}

fn specfun_suite() -> Vec<Invariant> {
    let cfg = SeriesConfig::default();
    let mut out = Vec::new();
    let worst = |xs: &[f64], f: &dyn Fn(f64) -> Result<f64, String>, exact: &dyn Fn(f64) -> f64| -> Result<f64, String> {
        xs.iter().try_fold(0.0f64, |acc, &x| Ok(acc.max((f(x)? - exact(x)).abs() / exact(x).abs().max(1.0))))
    };
    let xs: Vec<f64> = (0..=40).map(|k| -1.0 + k as f64 / 20.0).collect();
    let ml = |a: f64, b: f64| move |x: f64| ml_two_param(a, b, C::new(x, 0.0), &cfg).map(|v| v.value.re).map_err(|e| e.to_string());
    let cases: Vec<(&str, Result<f64, String>)> = vec![
        ("E_(1,1)(x) = exp(x) on [-1,1]", worst(&xs, &ml(1.0, 1.0), &f64::exp)),
        (
            "E_(2,1)(-x^2) = cos(x) on [0,3]",
            worst(&xs.iter().map(|x| 1.5 * (x + 1.0)).collect::<Vec<_>>(), &|x| ml(2.0, 1.0)(-x * x), &f64::cos),
        ),
        ("kilbas-saigo(1,1,0,1) = exp on [-1,1]", {
            let p = KilbasSaigoParams::new(1.0, 1.0, 0.0, 1.0).expect("parameters");
            worst(&xs, &|x| kilbas_saigo(&p, C::new(x, 0.0), &cfg).map(|v| v.value.re).map_err(|e| e.to_string()), &f64::exp)
        }),
        (
            "J_(1/2)(x) = sqrt(2/(pi x)) sin x on (0,10]",
            worst(&(1..=50).map(|k| k as f64 / 5.0).collect::<Vec<_>>(), &|x| Ok(bessel_j(0.5, x)), &|x| {
                (2.0 / (PI * x)).sqrt() * x.sin()
            }),
        ),
    ];
    for (name, r) in cases {
        out.push(match r {
            Ok(v) => check(name, v, 1e-12),
            Err(e) => failed(name, e),
        });
    }
    out
}

fn witt_suite() -> Vec<Invariant> {
    let mut out = Vec::new();
    for n in 1..=4 {
        let (f, fp) = witt_pair::<C>(n);
        let one = Multivector::scalar(n, C::new(1.0, 0.0));
        let mut worst = (&f * &f).norm().max((&fp * &fp).norm()).max((&(&(&f * &fp) + &(&fp * &f)) - &one).norm());
        for i in 1..=n {
            let e = Multivector::<C>::e(n, i).expect("generator");
            worst = worst.max((&(&f * &e) + &(&e * &f)).norm()).max((&(&fp * &e) + &(&e * &fp)).norm());
        }
        out.push(check(format!("witt identities n={n}"), worst, 0.0));
    }
    out
}

/// Needs both the lattice Dirac operator and Bessel J, so it gets its own suite.
fn bessel_dirac_suite() -> Vec<Invariant> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for r in [0.5, 1.0, 2.0] {
            let name = format!("bessel kernel Dirac identity n={n} r={r}");
            out.push(match bessel_dirac_error(n, r) {
                Ok(v) => check(name, v, 1e-3),
                Err(e) => failed(&name, e),
            });
        }
    }
    out
}

/// Finite-difference Dirac operator on |x|^{1−n/2}J_{n/2−1}(r|x|) against
/// −(r x/|x|^{n/2})J_{n/2}(r|x|) on [0.3, 2.3]^n.
fn bessel_dirac_error(n: usize, r: f64) -> Result<f64, String> {
    let nodes = if n == 2 { 121 } else { 61 };
    let h = 2.0 / (nodes - 1) as f64;
    let lat = PeriodicLattice::with_origin(vec![nodes; n], vec![h * nodes as f64; n], vec![0.3; n]).map_err(|e| e.to_string())?;
    let nu = n as f64 / 2.0 - 1.0;
    let values = lat.sample_real(|x| {
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        rho.powf(-nu) * bessel_j(nu, r * rho)
    });
    let field = MultivectorField::from_scalar(lat.clone(), values).map_err(|e| e.to_string())?;
    let (d, mask) = dirac_apply_fd(&field).map_err(|e| e.to_string())?;
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for k in (0..lat.len()).filter(|&k| mask[k]) {
        let x = lat.coords(k);
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let radial = -r * rho.powf(-(n as f64) / 2.0) * bessel_j(n as f64 / 2.0, r * rho);
        let mut want = Multivector::zero(n);
        for (i, xi) in x.iter().enumerate() {
            want.add_term(Blade::generator(i), C::new(radial * xi, 0.0));
        }
        err = err.max((&d.at(k) - &want).norm());
        scale = scale.max(want.norm());
    }
    Ok(err / scale)
}

fn unit_interval(steps: usize) -> (ClockMap, Arc<TimeGrid>) {
    (
        ClockMap::identity(0.0, 1.0).expect("identity clock"),
        Arc::new(TimeGrid::uniform(0.0, 1.0, steps).expect("grid")),
    )
}

fn wave_problem(steps: usize, speed: f64) -> Result<CauchyProblem, String> {
    let (clock, grid) = unit_interval(steps);
    let lat = PeriodicLattice::new(vec![64], vec![2.0 * PI]).map_err(|e| e.to_string())?;
    let w1 = lat.sample_real(|x| x[0].sin());
    Ok(CauchyProblem::new(vec![2.0], 1.0, vec![TimeCoefficient::constant(speed * speed)], clock, grid)
        .map_err(|e| e.to_string())?
        .with_space(SpaceMode::Lattice(lat))
        .with_initial_data(vec![SpatialData::Zero, SpatialData::Field(w1)]))
}

fn wave_error(steps: usize) -> Result<f64, String> {
    let speed = 2.0;
    let p = wave_problem(steps, speed)?;
    let sol = solve_scalar(&p, &KernelSeriesConfig::default()).map_err(|e| e.to_string())?;
    let SpaceMode::Lattice(lat) = &p.space else { unreachable!() };
    let mut err = 0.0f64;
    for (k, &t) in p.grid.nodes().iter().enumerate() {
        for (i, v) in sol.field.values[k].iter().enumerate() {
            let x = lat.coords(i)[0];
            let exact = -((x + speed * t).cos() - (x - speed * t).cos()) / (2.0 * speed);
            err = err.max((v - exact).norm());
        }
    }
    Ok(err)
}

fn kilbas_saigo_error(steps: usize) -> Result<f64, String> {
    let a0 = 1.5;
    let (clock, grid) = unit_interval(steps);
    let p = CauchyProblem::new(vec![a0], 1.0, vec![TimeCoefficient::power(1.0, a0)], clock, grid)
        .map_err(|e| e.to_string())?
        .with_space(SpaceMode::SingleMode { xi: vec![1.0] })
        .with_initial_data(vec![SpatialData::Amplitude(C::new(0.0, 0.0)), SpatialData::Amplitude(C::new(1.0, 0.0))]);
    let sol = solve_scalar(&p, &KernelSeriesConfig::default()).map_err(|e| e.to_string())?;
    let params = KilbasSaigoParams::new(1.0, 2.0 * a0, a0 + 1.0, a0).map_err(|e| e.to_string())?;
    let mut err = 0.0f64;
    for (k, &t) in p.grid.nodes().iter().enumerate() {
        let ks = kilbas_saigo(&params, C::new(-t.powf(2.0 * a0), 0.0), &SeriesConfig::default()).map_err(|e| e.to_string())?;
        err = err.max((sol.field.values[k][0] - t * ks.value.re).norm());
    }
    Ok(err)
}

/// 𝔇² against Θ_m(−Δ)^λ + F on a few fixed fields.
fn factorization_error(steps: usize) -> Result<f64, String> {
    let (clock, grid) = unit_interval(steps);
    let p = CauchyProblem::new(
        vec![1.8, 0.9],
        0.75,
        vec![TimeCoefficient::function("0.5+0.3t", |t| 0.5 + 0.3 * t), TimeCoefficient::constant(2.0)],
        clock,
        grid.clone(),
    )
    .map_err(|e| e.to_string())?;
    let op = DiracOperator::new(&p).map_err(|e| e.to_string())?;
    let idx = interior_indices(&grid, p.n0(), DEFAULT_INTERIOR_LAYER);
    let fields: [(&[f64; 2], u32, f64); 4] = [(&[1.0, 0.0], 0b0001, 1.0), (&[2.0, -3.0], 0b0110, 2.5), (&[-4.0, 5.0], 0b1011, 0.7), (&[6.0, 6.0], 0b1111, 3.1)];
    let mut worst = 0.0f64;
    for (s, mask, omega) in fields {
        let mut v = ModeMultivector::zero(s.to_vec(), grid.clone());
        let vals: Vec<C> = grid.nodes().iter().map(|&t| C::new(0.3 + t + (omega * t).sin(), 0.2 * t)).collect();
        v.add(Blade { mask }, C::new(1.0, 0.0), &vals, &[C::new(0.3, 0.0), C::new(1.0 + omega, 0.2)]);
        let twice = op.apply(&op.apply(&v).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let once = op.apply_scalar_operator(&v).map_err(|e| e.to_string())?;
        worst = worst.max(twice.max_diff_on(&once, &idx));
    }
    Ok(worst)
}

fn solver_suite(level: Level) -> Vec<Invariant> {
    let steps = level.steps();
    let cases: [(&str, Result<f64, String>, f64); 3] = [
        ("wave on the ring matches the closed form", wave_error(steps.max(2048)), 1e-4),
        ("Theta = t^1.5 kernel matches Kilbas-Saigo", kilbas_saigo_error(steps), 1e-4),
        ("squared Dirac operator equals the scalar operator", factorization_error(steps), 1e-3),
    ];
    cases
        .into_iter()
        .map(|(name, r, tol)| match r {
            Ok(v) => check(name, v, tol),
            Err(e) => failed(name, e),
        })
        .collect()
}

fn recovery_error(steps: usize, beta: f64, theta: TimeCoefficient, exact: impl Fn(f64) -> f64, t_min: f64) -> Result<f64, String> {
    let (clock, grid) = unit_interval(steps);
    let lat = PeriodicLattice::new(vec![64], vec![2.0 * PI]).map_err(|e| e.to_string())?;
    let w1 = lat.sample_real(|x| x[0].sin());
    let p = CauchyProblem::new(vec![beta], 1.0, vec![theta], clock, grid)
        .map_err(|e| e.to_string())?
        .with_space(SpaceMode::Lattice(lat));
    let obs = synthesize_observations(&p, &w1, None, 16, &KernelSeriesConfig::default()).map_err(|e| e.to_string())?;
    let rec = recover_theta(&obs).map_err(|e| e.to_string())?;
    let t = rec.theta.times();
    Ok(rec
        .valid_indices()
        .into_iter()
        .filter(|&k| t[k] >= t_min)
        .map(|k| (rec.theta.values[k].re - exact(t[k])).abs() / exact(t[k]).abs())
        .fold(0.0, f64::max))
}

fn inverse_suite(level: Level) -> Vec<Invariant> {
    let steps = level.steps().max(2048);
    let mut out = vec![match recovery_error(steps, 2.0, TimeCoefficient::constant(4.0), |_| 4.0, 0.05) {
        Ok(v) => check("wave speed squared recovered", v, 1e-3),
        Err(e) => failed("wave speed squared recovered", e),
    }];
    let betas: &[f64] = if level == Level::Full { &[1.25, 1.5, 1.9] } else { &[1.5] };
    for &b in betas {
        let name = format!("Theta = t^{b} recovered on [0.1, 1]");
        out.push(match recovery_error(steps, b, TimeCoefficient::power(1.0, b), |t| t.powf(b), 0.1) {
            Ok(v) => check(name, v, 1e-2),
            Err(e) => failed(&name, e),
        });
    }
    out
}

pub fn run(level: Level) -> Vec<SuiteResult> {
    let suites: Vec<(&'static str, Vec<Invariant>)> = vec![
        ("timefrac", timefrac_suite(level)),
        ("specfun", specfun_suite()),
        ("witt", witt_suite()),
        ("bessel_dirac", bessel_dirac_suite()),
        ("solver", solver_suite(level)),
        ("inverse", inverse_suite(level)),
    ];
    suites
        .into_iter()
        .map(|(suite, invariants)| SuiteResult { suite, pass: invariants.iter().all(|i| i.pass), invariants })
        .collect()
}
