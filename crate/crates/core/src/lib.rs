//! Numerical fractional calculus with respect to a clock function φ, the
//! special functions that appear in its closed-form solutions, a Witt-extended
//! Clifford algebra, and forward/inverse solvers for time-fractional
//! Dirac-type Cauchy problems.
//!
//! Module map:
//! - [`timefrac`]: fractional integrals and derivatives with respect to φ on a time grid.
//! - [`specfun`]: Gamma, Bessel J, Mittag-Leffler (two-parameter and multivariate), Kilbas-Saigo.
//! - [`clifford`]: blades, multivectors, Witt nilpotents and the Euclidean Dirac operator.
//! - [`lattice`]: periodic lattices and n-dimensional FFT plumbing shared by the solvers.
//! - [`solver`]: scalar and Dirac-type forward problems.
//! - [`inverse`]: recovery of a time-dependent coefficient from two observation traces.

// `!(x > y)` is used on purpose so NaN is rejected along with the bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clifford;
pub mod inverse;
pub mod lattice;
pub mod solver;
pub mod specfun;
pub mod timefrac;

pub use num_complex::Complex64;

pub use clifford::{Blade, Multivector, MultivectorField};
pub use inverse::{ObservationPair, RecoveryResult};
pub use lattice::PeriodicLattice;
pub use solver::{CauchyProblem, KernelSeriesConfig, SpaceTimeField, SpectralSymbol};
pub use specfun::{KilbasSaigoParams, MultiMLParams, SeriesValue};
pub use timefrac::{ClockMap, FracOrder, TimeGrid, TimeSeries};
