//! Problem builders shared by the benchmarks.

use std::f64::consts::PI;
use std::sync::Arc;

use fracdirac_core::lattice::PeriodicLattice;
use fracdirac_core::solver::{CauchyProblem, SpaceMode, SpatialData, TimeCoefficient};
use fracdirac_core::{ClockMap, TimeGrid};

/// ᶜD²w = 4Δw on a ring of `nodes` points with w = 0, ∂ₜw = sin x.
pub fn wave(nodes: usize, steps: usize) -> CauchyProblem {
    let lat = PeriodicLattice::new(vec![nodes], vec![2.0 * PI]).expect("lattice");
    let w1 = lat.sample_real(|x| x[0].sin() + 0.2 * (3.0 * x[0]).cos());
    CauchyProblem::new(
        vec![2.0],
        1.0,
        vec![TimeCoefficient::constant(4.0)],
        ClockMap::identity(0.0, 1.0).expect("clock"),
        Arc::new(TimeGrid::uniform(0.0, 1.0, steps).expect("grid")),
    )
    .expect("problem")
    .with_space(SpaceMode::Lattice(lat))
    .with_initial_data(vec![SpatialData::Zero, SpatialData::Field(w1)])
}
