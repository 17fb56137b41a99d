use std::sync::Arc;

use num_complex::Complex64;

use super::TimeFracError;

/// Strictly increasing time nodes t₀ < … < t_N.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    nodes: Vec<f64>,
}

impl TimeGrid {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self, TimeFracError> {
        if nodes.len() < 3 {
            return Err(TimeFracError::GridTooShort { nodes: nodes.len(), needed: 3 });
        }
        if nodes.iter().any(|t| !t.is_finite()) || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(TimeFracError::GridMismatch("grid nodes must be finite and strictly increasing".into()));
        }
        Ok(Self { nodes })
    }

    /// N equal steps on [t0, t1] (N+1 nodes).
    pub fn uniform(t0: f64, t1: f64, steps: usize) -> Result<Self, TimeFracError> {
        if steps < 2 {
            return Err(TimeFracError::GridTooShort { nodes: steps + 1, needed: 3 });
        }
        let h = (t1 - t0) / steps as f64;
        let mut nodes: Vec<f64> = (0..=steps).map(|k| t0 + h * k as f64).collect();
        nodes[steps] = t1;
        Self::from_nodes(nodes)
    }

    /// Graded nodes t_k = t0 + (t1−t0)(k/N)^r, r ≥ 1, clustered at t0.
    pub fn graded(t0: f64, t1: f64, steps: usize, r: f64) -> Result<Self, TimeFracError> {
        if !(r >= 1.0) {
            return Err(TimeFracError::GridMismatch(format!("grading exponent must be >= 1, got {r}")));
        }
        let nodes = (0..=steps).map(|k| t0 + (t1 - t0) * (k as f64 / steps as f64).powf(r)).collect();
        Self::from_nodes(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of steps N (nodes − 1).
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }
}

/// Complex samples of a function on a shared [`TimeGrid`]. `flags[k]` marks
/// nodes whose value was extrapolated rather than computed.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub grid: Arc<TimeGrid>,
    pub values: Vec<Complex64>,
    pub flags: Vec<bool>,
}

impl TimeSeries {
    pub fn new(grid: Arc<TimeGrid>, values: Vec<Complex64>) -> Result<Self, TimeFracError> {
        if values.len() != grid.len() {
            return Err(TimeFracError::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let flags = vec![false; values.len()];
        Ok(Self { grid, values, flags })
    }

    pub fn zeros(grid: Arc<TimeGrid>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n], flags: vec![false; n] }
    }

    pub fn from_fn(grid: Arc<TimeGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        let n = grid.len();
        Self { grid, values, flags: vec![false; n] }
    }

    pub fn from_real_fn(grid: Arc<TimeGrid>, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn same_grid(&self, other: &TimeSeries) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// max |values| over all nodes.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self.grid.nodes().iter().zip(&self.values).map(|(&t, &v)| f(t, v)).collect();
        Self { grid: self.grid.clone(), values, flags: self.flags.clone() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| v * c)
    }

    /// Pointwise a·self + b·other; flags are OR-ed.
    pub fn axpby(&self, a: Complex64, other: &TimeSeries, b: Complex64) -> Result<Self, TimeFracError> {
        if !self.same_grid(other) {
            return Err(TimeFracError::GridMismatch("series live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        let flags = self.flags.iter().zip(&other.flags).map(|(p, q)| *p || *q).collect();
        Ok(Self { grid: self.grid.clone(), values, flags })
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }
}

/// A real fractional order α > 0 with n = −⌊−α⌋, i.e. n−1 < α ≤ n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    pub alpha: f64,
    pub n: usize,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, TimeFracError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(TimeFracError::InvalidOrder(alpha));
        }
        Ok(Self { alpha, n: (-(-alpha).floor()) as usize })
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == self.n as f64
    }
}
