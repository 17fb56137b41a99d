//! Inverse Fourier transform of radial functions on ℝⁿ:
//!
//! w(x) = |x|^{1−n/2} (2π)^{−n/2} ∫₀^∞ φ(r) r^{n/2} J_{n/2−1}(r|x|) dr,
//!
//! with the x = 0 limit (2π)^{−n/2} / (2^{n/2−1} Γ(n/2)) ∫₀^∞ φ(r) r^{n−1} dr.
//! The integral is cut where the profiles have decayed and integrated with
//! composite Gauss-Legendre panels narrow enough to resolve the oscillation
//! of J at the largest requested |x|.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::SolverError;
use crate::specfun::{bessel_j, gamma};

type C = Complex64;

const GL_POINTS: usize = 16;
const TAIL_RELATIVE: f64 = 1e-15;
const R_LIMIT: f64 = 1e4;

/// Nodes and weights of the n-point Gauss-Legendre rule on [−1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A radial quadrature shared by every profile of one problem.
#[derive(Debug, Clone)]
pub struct HankelQuadrature {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HankelQuadrature {
    /// Builds panels of width min(π/(2 x_max), 1) until every profile has
    /// decayed below 1e-15 of its peak (in the r^{n−1} weighted sense) over
    /// two consecutive panels.
    pub fn for_profiles(
        dim: usize,
        x_max: f64,
        profiles: &[Arc<dyn Fn(f64) -> C + Send + Sync>],
    ) -> Result<Self, SolverError> {
        if dim == 0 {
            return Err(SolverError::InvalidProblem("radial transform needs dim >= 1".into()));
        }
        let width = if x_max > 0.0 { (PI / (2.0 * x_max)).min(1.0) } else { 1.0 };
        let (gx, gw) = gauss_legendre(GL_POINTS);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut peak = 0.0f64;
        let mut quiet = 0;
        let mut a = 0.0;
        loop {
            let mut panel_max = 0.0f64;
            for (x, w) in gx.iter().zip(&gw) {
                let r = a + 0.5 * width * (x + 1.0);
                let rw = r.powi(dim as i32 - 1);
                for p in profiles {
                    panel_max = panel_max.max(p(r).norm() * rw);
                }
                nodes.push(r);
                weights.push(0.5 * width * w);
            }
            peak = peak.max(panel_max);
            if !panel_max.is_finite() {
                return Err(SolverError::InvalidProblem(format!("radial profile is not finite near r = {a}")));
            }
            quiet = if panel_max <= TAIL_RELATIVE * peak { quiet + 1 } else { 0 };
            a += width;
            if quiet >= 2 {
                break;
            }
            if a > R_LIMIT {
                if peak == 0.0 {
                    return Ok(Self { dim, nodes: Vec::new(), weights: Vec::new() });
                }
                return Err(SolverError::TailNotDecaying { r: a });
            }
        }
        Ok(Self { dim, nodes, weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Radii at which profiles (and mode solutions) must be sampled.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// w(x) from the profile values at [`Self::nodes`].
    pub fn transform(&self, values: &[C], x: f64) -> C {
        let n = self.dim as f64;
        let norm = (2.0 * PI).powf(-n / 2.0);
        if x == 0.0 {
            let c = norm / (2f64.powf(n / 2.0 - 1.0) * gamma(n / 2.0).expect("Gamma of a positive half-integer"));
            let s: C = self.nodes.iter().zip(&self.weights).zip(values).map(|((r, w), v)| v * (w * r.powf(n - 1.0))).sum();
            return s * c;
        }
        let order = n / 2.0 - 1.0;
        let s: C = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(values)
            .map(|((r, w), v)| v * (w * r.powf(n / 2.0) * bessel_j(order, r * x)))
            .sum();
        s * (norm * x.powf(1.0 - n / 2.0))
    }
}

/// The radial inverse Fourier transform of `profile` on ℝ^dim at the radii `xs`.
pub fn hankel_inverse_fourier(
    profile: impl Fn(f64) -> C + Send + Sync + 'static,
    dim: usize,
    xs: &[f64],
) -> Result<Vec<C>, SolverError> {
    if let Some(x) = xs.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(SolverError::InvalidProblem(format!("radii must be >= 0, got {x}")));
    }
    let profile: Arc<dyn Fn(f64) -> C + Send + Sync> = Arc::new(profile);
    let x_max = xs.iter().cloned().fold(0.0, f64::max);
    let q = HankelQuadrature::for_profiles(dim, x_max, std::slice::from_ref(&profile))?;
    let values: Vec<C> = q.nodes().iter().map(|&r| profile(r)).collect();
    Ok(xs.iter().map(|&x| q.transform(&values, x)).collect())
}
