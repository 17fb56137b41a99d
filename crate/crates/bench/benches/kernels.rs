use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fracdirac_bench::wave;
use fracdirac_core::solver::{solve_scalar, KernelSeriesConfig};
use fracdirac_core::specfun::{ml_multivariate, ml_two_param, SeriesConfig};
use fracdirac_core::timefrac::{frac_integral, rl_derivative, IntegralOperator};
use fracdirac_core::{ClockMap, Complex64, FracOrder, MultiMLParams, TimeGrid, TimeSeries};

fn special_functions(c: &mut Criterion) {
    let cfg = SeriesConfig::default();
    c.bench_function("ml_two_param(0.7, 1, -3)", |b| {
        b.iter(|| ml_two_param(0.7, 1.0, black_box(Complex64::new(-3.0, 0.0)), &cfg).unwrap())
    });
    let p = MultiMLParams::new(vec![0.9, 1.3, 1.8], 1.5).unwrap();
    let z = [Complex64::new(-0.5, 0.0), Complex64::new(0.3, 0.0), Complex64::new(-1.0, 0.0)];
    c.bench_function("ml_multivariate 3 variables", |b| b.iter(|| ml_multivariate(&p, black_box(&z), &cfg).unwrap()));
}

fn time_operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("time operators");
    group.sample_size(10);
    let clock = ClockMap::exp(0.0, 1.0).unwrap();
    for steps in [512, 2048] {
        let grid = Arc::new(TimeGrid::uniform(0.0, 1.0, steps).unwrap());
        let f = TimeSeries::from_real_fn(grid.clone(), |t| (3.0 * t).sin());
        let alpha = FracOrder::new(0.7).unwrap();
        group.bench_with_input(BenchmarkId::new("build I^0.7", steps), &grid, |b, g| {
            b.iter(|| IntegralOperator::new(0.7, &clock, g.clone()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("D^0.7 I^0.7 f", steps), &f, |b, f| {
            b.iter(|| rl_derivative(alpha, &clock, &frac_integral(alpha, &clock, f).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn forward_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward solve");
    group.sample_size(10);
    let cfg = KernelSeriesConfig::default();
    for (nodes, steps) in [(64, 512), (64, 2048)] {
        let p = wave(nodes, steps);
        group.bench_with_input(BenchmarkId::new("wave ring", format!("{nodes}x{steps}")), &p, |b, p| {
            b.iter(|| solve_scalar(p, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, special_functions, time_operators, forward_solve);
criterion_main!(benches);
