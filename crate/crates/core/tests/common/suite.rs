//! The fixed test suite for the time operators: four functions, three clocks,
//! three orders. Each clock lives on its own interval because t² needs t > 0.

use std::sync::Arc;

use fracdirac_core::timefrac::{
    interior_indices, rl_derivative_with, ClockMap, FracOrder, IntegralOperator, TimeGrid, TimeSeries,
    DEFAULT_INTERIOR_LAYER,
};

pub const ORDERS: [f64; 3] = [0.3, 0.7, 1.4];

pub fn functions() -> Vec<(&'static str, fn(f64) -> f64)> {
    vec![("1", |_| 1.0), ("t", |t| t), ("sin t", f64::sin), ("exp(-t)", |t| (-t).exp())]
}

pub fn clocks() -> Vec<ClockMap> {
    vec![
        ClockMap::identity(0.0, 1.0).unwrap(),
        ClockMap::power(2.0, 0.5, 1.5).unwrap(),
        ClockMap::exp(0.0, 1.0).unwrap(),
    ]
}

pub fn grid_for(clock: &ClockMap, steps: usize) -> Arc<TimeGrid> {
    Arc::new(TimeGrid::uniform(clock.t_start, clock.t_end, steps).unwrap())
}

/// Max |a−b| / max |b| over the given nodes.
pub fn rel_sup(a: &TimeSeries, b: &TimeSeries, idx: &[usize]) -> f64 {
    let num = idx.iter().map(|&k| (a.values[k] - b.values[k]).norm()).fold(0.0, f64::max);
    let den = idx.iter().map(|&k| b.values[k].norm()).fold(0.0, f64::max);
    num / den
}

/// Worst interior relative error of D^α I^α f − f, one entry per suite case,
/// labelled "clock/alpha/f".
pub fn left_inverse_errors(steps: usize) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for clock in clocks() {
        let grid = grid_for(&clock, steps);
        for alpha in ORDERS {
            let order = FracOrder::new(alpha).unwrap();
            let int = IntegralOperator::new(alpha, &clock, grid.clone()).unwrap();
            let rest = order.n as f64 - alpha;
            let inner = IntegralOperator::new(rest, &clock, grid.clone()).unwrap();
            let idx = interior_indices(&grid, order.n, DEFAULT_INTERIOR_LAYER);
            for (name, f) in functions() {
                let fs = TimeSeries::from_real_fn(grid.clone(), f);
                let d = rl_derivative_with(order, &clock, &int.apply(&fs).unwrap(), Some(&inner)).unwrap();
                out.push((format!("{}/{alpha}/{name}", clock.name()), rel_sup(&d, &fs, &idx)));
            }
        }
    }
    out
}
