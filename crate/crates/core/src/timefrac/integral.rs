//! Product-integration weights for I^{α,φ}.
//!
//! In the variable u = φ(s) the integral becomes
//! (1/Γ(α)) ∫_{u₀}^{U} (U − u)^{α−1} f(u) du. On each cell [u_k, u_{k+1}] the
//! integrand f is replaced by its linear interpolant and the weakly singular
//! factor is integrated exactly. Row n of the operator holds the weights of
//! f(u_0..u_n) for the target U = u_n.

use std::sync::Arc;

use num_complex::Complex64;

use super::{ClockMap, TimeFracError, TimeGrid, TimeSeries};
use crate::specfun::gamma;

/// Lower-triangular weight matrix for I^{α,φ} on a fixed grid and clock.
#[derive(Debug, Clone)]
pub struct IntegralOperator {
    alpha: f64,
    grid: Arc<TimeGrid>,
    /// packed rows, row n at offset n(n+1)/2 with n+1 entries
    weights: Vec<f64>,
}

/// Weights (on the left node, on the right node) of one cell for kernel
/// exponent α−1, with distances a = U − u_k > b = U − u_{k+1} ≥ 0.
fn cell_weights(alpha: f64, a: f64, b: f64) -> (f64, f64) {
    let delta = a - b;
    let rho = if b > 0.0 { delta / b } else { f64::INFINITY };
    if rho <= 0.25 {
        // Binomial expansion of (b + δx)^{α−1} avoids the cancellation in
        // differences of nearly equal powers for cells far from U.
        let lead = delta * b.powf(alpha - 1.0);
        let mut c = 1.0;
        let mut p = 1.0;
        let (mut left, mut right) = (0.0, 0.0);
        for m in 0..60 {
            let mf = m as f64;
            let t = c * p;
            left += t / (mf + 2.0);
            right += t / ((mf + 1.0) * (mf + 2.0));
            if t.abs() < 1e-18 {
                break;
            }
            c *= (alpha - 1.0 - mf) / (mf + 1.0);
            p *= rho;
        }
        (lead * left, lead * right)
    } else {
        let pa = a.powf(alpha);
        let pb = if b > 0.0 { b.powf(alpha) } else { 0.0 };
        let i0 = (pa - pb) / alpha;
        let i1 = (pa * a - pb * b) / (alpha + 1.0);
        let left = (i1 - b * i0) / delta;
        (left, i0 - left)
    }
}

impl IntegralOperator {
    pub fn new(alpha: f64, clock: &ClockMap, grid: Arc<TimeGrid>) -> Result<Self, TimeFracError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(TimeFracError::InvalidOrder(alpha));
        }
        clock.validate_on(&grid)?;
        let u: Vec<f64> = grid.nodes().iter().map(|&t| clock.phi(t)).collect();
        let inv_gamma = 1.0 / gamma(alpha).map_err(|_| TimeFracError::InvalidOrder(alpha))?;
        let len = u.len();
        let mut weights = vec![0.0; len * (len + 1) / 2];
        for n in 1..len {
            let row = &mut weights[n * (n + 1) / 2..n * (n + 1) / 2 + n + 1];
            let un = u[n];
            for k in 0..n {
                let (wl, wr) = cell_weights(alpha, un - u[k], un - u[k + 1]);
                row[k] += wl * inv_gamma;
                row[k + 1] += wr * inv_gamma;
            }
        }
        Ok(Self { alpha, grid, weights })
    }

    /// As [`Self::new`], plus starting weights that make every row exact
    /// for (φ − φ₀)^e with e in `exponents` (besides 0 and 1, which the
    /// linear rule already integrates exactly). Only the first few columns
    /// change. Row n can fix at most n + 1 exponents, so the most singular
    /// ones are served first. Exponents must be > 0.
    pub fn with_start_exponents(
        alpha: f64,
        clock: &ClockMap,
        grid: Arc<TimeGrid>,
        exponents: &[f64],
    ) -> Result<Self, TimeFracError> {
        let mut op = Self::new(alpha, clock, grid)?;
        let mut extra: Vec<f64> = exponents
            .iter()
            .copied()
            .filter(|e| e.is_finite() && *e > 0.0 && (e - e.round()).abs() > 1e-9)
            .collect();
        if extra.is_empty() {
            return Ok(op);
        }
        extra.sort_by(f64::total_cmp);
        extra.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        let mut order = vec![0.0];
        order.extend(extra.iter().filter(|e| **e < 1.0));
        order.push(1.0);
        order.extend(extra.iter().filter(|e| **e > 1.0));

        let u0 = clock.phi(op.grid.start());
        let d: Vec<f64> = op.grid.nodes().iter().map(|&t| clock.phi(t) - u0).collect();
        let h = d[1];
        let exact_scale: Vec<f64> =
            order.iter().map(|&e| Ok(gamma(e + 1.0)? / gamma(e + 1.0 + alpha)?)).collect::<Result<_, _>>().map_err(
                |_: crate::specfun::SpecFunError| TimeFracError::InvalidOrder(alpha),
            )?;
        let pow = |x: f64, e: f64| if e == 0.0 { 1.0 } else if x == 0.0 { 0.0 } else { x.powf(e) };
        for n in 1..d.len() {
            let r = order.len().min(n + 1);
            let start = n * (n + 1) / 2;
            let row = &op.weights[start..start + n + 1];
            // residual of the base rule on each exponent, scaled by h^{-e}
            let mut mat = vec![vec![0.0; r + 1]; r];
            for (q, &e) in order[..r].iter().enumerate() {
                let base: f64 = row.iter().zip(&d).map(|(w, x)| w * pow(*x, e)).sum();
                let exact = exact_scale[q] * d[n].powf(e + alpha);
                let s = h.powf(-e);
                for (c, m) in mat[q][..r].iter_mut().enumerate() {
                    *m = pow(d[c], e) * s;
                }
                mat[q][r] = (exact - base) * s;
            }
            let delta = solve_small(mat);
            for (c, dc) in delta.into_iter().enumerate() {
                op.weights[start + c] += dc;
            }
        }
        Ok(op)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.weights[n * (n + 1) / 2..n * (n + 1) / 2 + n + 1]
    }

    /// Applies the operator to raw values on the operator's grid.
    pub fn apply_values(&self, f: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.grid.len(), "value count must match the grid");
        (0..f.len())
            .map(|n| {
                let row = self.row(n);
                let (mut re, mut im) = (0.0, 0.0);
                for (w, v) in row.iter().zip(f) {
                    re += w * v.re;
                    im += w * v.im;
                }
                Complex64::new(re, im)
            })
            .collect()
    }

    pub fn apply(&self, f: &TimeSeries) -> Result<TimeSeries, TimeFracError> {
        if !(Arc::ptr_eq(&f.grid, &self.grid) || *f.grid == *self.grid) {
            return Err(TimeFracError::GridMismatch("series grid differs from operator grid".into()));
        }
        TimeSeries::new(f.grid.clone(), self.apply_values(&f.values))
    }
}

/// Gaussian elimination with partial pivoting on an augmented r×(r+1) system.
fn solve_small(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let r = a.len();
    for col in 0..r {
        let piv = (col..r).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        let p = a[col][col];
        if p == 0.0 {
            continue;
        }
        let (head, tail) = a.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for row in tail.iter_mut() {
            let f = row[col] / p;
            for (x, y) in row[col..=r].iter_mut().zip(&pivot_row[col..=r]) {
                *x -= f * y;
            }
        }
    }
    let mut x = vec![0.0; r];
    for i in (0..r).rev() {
        let s: f64 = (i + 1..r).map(|j| a[i][j] * x[j]).sum();
        x[i] = if a[i][i] == 0.0 { 0.0 } else { (a[i][r] - s) / a[i][i] };
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_closed_form_branches_agree() {
        for &alpha in &[0.3, 0.7, 1.0, 1.4, 2.0] {
            // ρ just below and above the switch point
            let b = 4.0;
            for &delta in &[0.999, 1.001] {
                let (l1, r1) = cell_weights(alpha, b + delta, b);
                // reference by fine midpoint quadrature
                let m = 20000;
                let (mut l2, mut r2) = (0.0, 0.0);
                for i in 0..m {
                    let x = (i as f64 + 0.5) / m as f64;
                    let v = b + delta * x;
                    let w = v.powf(alpha - 1.0) * delta / m as f64;
                    l2 += w * x;
                    r2 += w * (1.0 - x);
                }
                assert!((l1 - l2).abs() < 1e-8 * l2.abs(), "alpha={alpha} delta={delta}");
                assert!((r1 - r2).abs() < 1e-8 * r2.abs(), "alpha={alpha} delta={delta}");
            }
        }
    }

    #[test]
    fn last_cell_with_b_zero() {
        let (l, r) = cell_weights(0.5, 1.0, 0.0);
        // ∫_0^1 v^{-1/2} v dv = 2/3 on the far node, ∫ v^{-1/2}(1−v) = 2 − 2/3
        assert!((l - 2.0 / 3.0).abs() < 1e-15);
        assert!((r - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn starting_weights_integrate_singular_powers() {
        let clock = ClockMap::identity(0.0, 1.0).unwrap();
        let grid = Arc::new(TimeGrid::uniform(0.0, 1.0, 64).unwrap());
        let alpha = 0.7;
        let base = IntegralOperator::new(alpha, &clock, grid.clone()).unwrap();
        let fixed = IntegralOperator::with_start_exponents(alpha, &clock, grid.clone(), &[0.7, 1.4]).unwrap();
        for e in [0.0, 0.7, 1.0, 1.4] {
            let f: Vec<Complex64> = grid.nodes().iter().map(|t| Complex64::new(t.powf(e), 0.0)).collect();
            let exact = |t: f64| gamma(e + 1.0).unwrap() / gamma(e + 1.0 + alpha).unwrap() * t.powf(e + alpha);
            let err = |op: &IntegralOperator| {
                op.apply_values(&f).iter().zip(grid.nodes()).skip(4).map(|(v, &t)| (v.re - exact(t)).abs()).fold(0.0, f64::max)
            };
            assert!(err(&fixed) < 1e-12, "e = {e}: {:e}", err(&fixed));
            if e == 0.7 {
                assert!(err(&base) > 1e-5);
            }
        }
    }
}
