//! Forward problems with known solutions, shared by the solver tests and the
//! acceptance harness.

use std::f64::consts::PI;
use std::sync::Arc;

use fracdirac_core::clifford::{dirac_apply, witt_pair, Blade, Multivector};
use fracdirac_core::lattice::PeriodicLattice;
use fracdirac_core::solver::{
    CauchyProblem, DiracOperator, DiracSolution, ModeContext, ModeMultivector, SpaceLayout, SpaceMode,
    SpatialData, TimeCoefficient,
};
use fracdirac_core::specfun::{kilbas_saigo, KilbasSaigoParams, SeriesConfig};
use fracdirac_core::timefrac::{interior_indices, ClockMap, TimeGrid, DEFAULT_INTERIOR_LAYER};
use fracdirac_core::Complex64 as C;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn unit_grid(steps: usize) -> Arc<TimeGrid> {
    Arc::new(TimeGrid::uniform(0.0, 1.0, steps).unwrap())
}

pub fn identity_clock() -> ClockMap {
    ClockMap::identity(0.0, 1.0).unwrap()
}

/// A single-mode problem on [0, 1] with the identity clock.
pub fn single_mode(betas: Vec<f64>, coeffs: Vec<TimeCoefficient>, xi: f64, data: Vec<C>, steps: usize) -> CauchyProblem {
    CauchyProblem::new(betas, 1.0, coeffs, identity_clock(), unit_grid(steps))
        .unwrap()
        .with_space(SpaceMode::SingleMode { xi: vec![xi] })
        .with_initial_data(data.into_iter().map(SpatialData::Amplitude).collect())
}

pub fn ring(nodes: usize) -> PeriodicLattice {
    PeriodicLattice::new(vec![nodes], vec![2.0 * PI]).unwrap()
}

/// ᶜD²w = c²Δw on the periodic ring with w = 0, ∂ₜw = sin x at t = 0.
pub fn wave_problem(speed: f64, nodes: usize, steps: usize) -> CauchyProblem {
    let lat = ring(nodes);
    let w1 = lat.sample_real(|x| x[0].sin());
    CauchyProblem::new(vec![2.0], 1.0, vec![TimeCoefficient::constant(speed * speed)], identity_clock(), unit_grid(steps))
        .unwrap()
        .with_space(SpaceMode::Lattice(lat))
        .with_initial_data(vec![SpatialData::Zero, SpatialData::Field(w1)])
}

pub fn wave_exact(speed: f64, x: f64, t: f64) -> f64 {
    -((x + speed * t).cos() - (x - speed * t).cos()) / (2.0 * speed)
}

/// Max over all nodes of |w − exact|.
pub fn wave_error(speed: f64, field: &fracdirac_core::solver::SpaceTimeField) -> f64 {
    let SpaceLayout::Lattice(lat) = &field.layout else { panic!("lattice layout expected") };
    let mut err = 0.0f64;
    for (k, &t) in field.grid.nodes().iter().enumerate() {
        for (p, v) in field.values[k].iter().enumerate() {
            err = err.max((v - wave_exact(speed, lat.coords(p)[0], t)).norm());
        }
    }
    err
}

/// ᶜD^{α₀}u + t^{α₀}|s|²u = 0 with u(0) = 0, u′(0) = 1 on one mode.
pub fn kilbas_saigo_problem(alpha0: f64, xi: f64, steps: usize) -> CauchyProblem {
    single_mode(vec![alpha0], vec![TimeCoefficient::power(1.0, alpha0)], xi, vec![c(0.0), c(1.0)], steps)
}

/// t · E^{α₀}_{1,2α₀,α₀+1}(−|s|²t^{2α₀}), the solution of [`kilbas_saigo_problem`].
pub fn kilbas_saigo_exact(alpha0: f64, xi: f64, t: f64) -> f64 {
    let p = KilbasSaigoParams::new(1.0, 2.0 * alpha0, alpha0 + 1.0, alpha0).unwrap();
    let z = c(-xi * xi * t.powf(2.0 * alpha0));
    t * kilbas_saigo(&p, z, &SeriesConfig::default()).unwrap().value.re
}

/// Relative residual of 𝔇V on the lattice, with the spatial part taken by the
/// spectral Euclidean Dirac operator (λ = 1) and the time part node by node
/// through timefrac. V is the wave-type Dirac solution.
pub fn dirac_lattice_residual(problem: &CauchyProblem, sol: &DiracSolution) -> f64 {
    assert_eq!(problem.lambda, 1.0);
    let SpaceMode::Lattice(lat) = &problem.space else { panic!("lattice problem expected") };
    let ctx = ModeContext::new(problem).unwrap();
    let n = lat.ndim();
    let grid = problem.grid.clone();
    let root = problem.laplacian_coeff().as_constant().unwrap().sqrt();
    let (f, fp) = witt_pair::<C>(n);

    // φ-jets of w at every node and of its spatial partials
    let data: Vec<Vec<C>> = problem
        .initial_data
        .iter()
        .map(|d| match d {
            SpatialData::Field(v) => v.clone(),
            _ => vec![c(0.0); lat.len()],
        })
        .collect();
    let partials: Vec<Vec<Vec<C>>> =
        data.iter().map(|d| (0..n).map(|k| lat.derivative(d, k).unwrap()).collect()).collect();

    let steps = grid.len();
    let mut time_part: Vec<Multivector> = vec![Multivector::zero(n); steps * lat.len()];
    for p in 0..lat.len() {
        let mut comps: Vec<(Blade, Vec<C>, Vec<C>)> = Vec::new();
        for k in 0..n {
            let vals = sol.vector[k].trace(p).values;
            let jets = partials.iter().map(|pk| pk[k][p] * root).collect();
            comps.push((Blade::generator(k), vals, jets));
        }
        let a = sol.f_part.trace(p).values;
        let b = sol.w.trace(p).values;
        let wj: Vec<C> = data.iter().map(|d| d[p]).collect();
        comps.push((
            Blade::e_plus(n),
            a.iter().zip(&b).map(|(a, b)| (a + b) * 0.5).collect(),
            wj.iter().map(|v| v * 0.5).collect(),
        ));
        comps.push((
            Blade::e_minus(n),
            a.iter().zip(&b).map(|(a, b)| (b - a) * 0.5).collect(),
            wj.iter().map(|v| v * 0.5).collect(),
        ));
        for (blade, vals, jets) in comps {
            let fv = ctx.apply_time_operator(&vals, &jets).unwrap().values;
            for k in 0..steps {
                let piece = Multivector::from_blade(n, blade, fv[k]);
                let m = &time_part[k * lat.len() + p];
                time_part[k * lat.len() + p] = m + &(&f * &piece);
            }
        }
    }

    let idx = interior_indices(&grid, problem.n0(), DEFAULT_INTERIOR_LAYER);
    let (mut res, mut scale) = (0.0f64, 0.0f64);
    for &k in &idx {
        let v = sol.field_at(k).unwrap();
        let space = dirac_apply(&v).unwrap();
        for p in 0..lat.len() {
            let vp = v.at(p);
            let total = &(&space.at(p).scale(c(root)) + &time_part[k * lat.len() + p]) + &(&fp * &vp);
            res = res.max(total.norm());
            scale = scale.max(vp.norm());
        }
    }
    res / scale
}

/// β₀ = 1.8, β₁ = 0.9 with Θ₁ = 0.5 + 0.3t, Θ₂ = 2 and λ = 0.75 on [0, 1]:
/// the problem behind the factorization check.
pub fn factorization_problem(steps: usize) -> CauchyProblem {
    CauchyProblem::new(
        vec![1.8, 0.9],
        0.75,
        vec![TimeCoefficient::function("0.5+0.3t", |t| 0.5 + 0.3 * t), TimeCoefficient::constant(2.0)],
        identity_clock(),
        unit_grid(steps),
    )
    .unwrap()
}

/// A random band-limited multivector field on the 64×64 lattice of
/// [0, 2π)², returned mode by mode. Each component is
/// c₀ + c₁t + c₂ sin(ωt) in time, so its φ-jets are (c₀, c₁ + c₂ω).
pub fn random_field(rng: &mut StdRng, grid: &Arc<TimeGrid>) -> Vec<ModeMultivector> {
    let n = 2;
    let modes = rng.random_range(1..=3);
    let rc = |rng: &mut StdRng| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    (0..modes)
        .map(|_| {
            let s = vec![rng.random_range(-6i32..=6) as f64, rng.random_range(-6i32..=6) as f64];
            let mut v = ModeMultivector::zero(s, grid.clone());
            for _ in 0..rng.random_range(1..=4) {
                let blade = Blade { mask: rng.random_range(0..(1u32 << (n + 2))) };
                let (c0, c1, c2) = (rc(rng), rc(rng), rc(rng));
                let omega = rng.random_range(0.5..4.0);
                let vals: Vec<C> = grid.nodes().iter().map(|&t| c0 + c1 * t + c2 * (omega * t).sin()).collect();
                v.add(blade, c(1.0), &vals, &[c0, c1 + c2 * omega]);
            }
            v
        })
        .collect()
}

/// For each of `count` random fields, Σ over its modes of the interior sup
/// of |𝔇²V − (Θ_m(−Δ)^λ + F)V|; the sum bounds the sup-norm on the lattice.
pub fn factorization_errors(count: usize, steps: usize, seed: u64) -> Vec<f64> {
    let problem = factorization_problem(steps);
    let op = DiracOperator::new(&problem).unwrap();
    let idx = interior_indices(&problem.grid, problem.n0(), DEFAULT_INTERIOR_LAYER);
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            random_field(&mut rng, &problem.grid)
                .iter()
                .map(|v| {
                    let twice = op.apply(&op.apply(v).unwrap()).unwrap();
                    let once = op.apply_scalar_operator(v).unwrap();
                    twice.max_diff_on(&once, &idx)
                })
                .sum()
        })
        .collect()
}
