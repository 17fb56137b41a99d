use std::sync::Arc;

use num_complex::Complex64;

use super::{ClockMap, FracOrder, IntegralOperator, TimeFracError, TimeGrid, TimeSeries};
use crate::specfun::recip_gamma;

fn check_grid(clock: &ClockMap, f: &TimeSeries) -> Result<Vec<f64>, TimeFracError> {
    clock.validate_on(&f.grid)?;
    Ok(f.grid.nodes().iter().map(|&t| clock.phi(t)).collect())
}

/// Fornberg finite-difference weights for the first derivative at `z` using
/// the nodes `x`.
fn fornberg_first(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    // c[i][m]: weight of node i for derivative order m ∈ {0, 1}
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// One application of d/du = (1/φ′) d/dt on nodes u: five-point stencils
/// (fourth order), centered inside and one-sided near the ends, so that n
/// successive applications keep second-order accuracy up to the endpoints.
/// Grids with fewer than five nodes fall back to three-point stencils.
fn d_du(u: &[f64], f: &[Complex64]) -> Vec<Complex64> {
    let n = u.len();
    let p = if n >= 5 { 5 } else { 3 };
    let half = p / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let s = k.saturating_sub(half).min(n - p);
        let w = fornberg_first(u[k], &u[s..s + p]);
        out[k] = w.iter().zip(&f[s..s + p]).map(|(w, v)| v * w).sum();
    }
    out
}

/// f_φ^{[j]} = ((1/φ′) d/dt)^j f by j successive first-order φ-differences
/// (five-point stencils, one-sided at the ends).
pub fn phi_diff(j: usize, clock: &ClockMap, f: &TimeSeries) -> Result<TimeSeries, TimeFracError> {
    let needed = 2 * j + 2;
    if f.len() < needed {
        return Err(TimeFracError::GridTooShort { nodes: f.len(), needed });
    }
    let u = check_grid(clock, f)?;
    let mut v = f.values.clone();
    for _ in 0..j {
        v = d_du(&u, &v);
    }
    TimeSeries::new(f.grid.clone(), v)
}

/// Overwrites the first n values with the degree-n polynomial (in u) through
/// nodes n..=2n and flags them.
fn extrapolate_head(u: &[f64], v: &mut [Complex64], flags: &mut [bool], n: usize) {
    if n == 0 {
        return;
    }
    let idx: Vec<usize> = (n..=2 * n).collect();
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for &i in &idx {
            let mut l = 1.0;
            for &m in &idx {
                if m != i {
                    l *= (u[k] - u[m]) / (u[i] - u[m]);
                }
            }
            acc += v[i] * l;
        }
        v[k] = acc;
        flags[k] = true;
    }
}

/// D^{α,φ} f = ((1/φ′) d/dt)ⁿ I^{n−α,φ} f, with an optional prebuilt operator
/// for I^{n−α,φ}. The first n nodes are extrapolated and flagged.
pub fn rl_derivative_with(
    alpha: FracOrder,
    clock: &ClockMap,
    f: &TimeSeries,
    op: Option<&IntegralOperator>,
) -> Result<TimeSeries, TimeFracError> {
    let n = alpha.n;
    let needed = 2 * n + 2;
    if f.len() < needed {
        return Err(TimeFracError::GridTooShort { nodes: f.len(), needed });
    }
    let u = check_grid(clock, f)?;
    let rest = n as f64 - alpha.alpha;
    let mut v = if rest > 0.0 {
        match op {
            Some(op) => {
                if (op.alpha() - rest).abs() > 1e-14 * rest.max(1.0) {
                    return Err(TimeFracError::InvalidOrder(op.alpha()));
                }
                op.apply(f)?.values
            }
            None => IntegralOperator::new(rest, clock, f.grid.clone())?.apply(f)?.values,
        }
    } else {
        f.values.clone()
    };
    for _ in 0..n {
        v = d_du(&u, &v);
    }
    let mut flags = vec![false; v.len()];
    extrapolate_head(&u, &mut v, &mut flags, n);
    Ok(TimeSeries { grid: f.grid.clone(), values: v, flags })
}

/// Riemann-Liouville type derivative D^{α,φ} f.
pub fn rl_derivative(alpha: FracOrder, clock: &ClockMap, f: &TimeSeries) -> Result<TimeSeries, TimeFracError> {
    rl_derivative_with(alpha, clock, f, None)
}

/// I^{α,φ} f.
pub fn frac_integral(alpha: FracOrder, clock: &ClockMap, f: &TimeSeries) -> Result<TimeSeries, TimeFracError> {
    IntegralOperator::new(alpha.alpha, clock, f.grid.clone())?.apply(f)
}

/// Estimates f_φ^{[j]}(t₀) for j < n by one-sided φ-differences (the same
/// stencils as [`phi_diff`], so at least second order).
pub fn estimate_jets(n: usize, clock: &ClockMap, f: &TimeSeries) -> Result<Vec<Complex64>, TimeFracError> {
    let u = check_grid(clock, f)?;
    let needed = 2 * n + 2;
    if f.len() < needed {
        return Err(TimeFracError::GridTooShort { nodes: f.len(), needed });
    }
    let mut v = f.values.clone();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        if j > 0 {
            v = d_du(&u, &v);
        }
        out.push(v[0]);
    }
    Ok(out)
}

/// Subtracts the φ-Taylor jet Σ_{j<n} jets[j]/j!·(φ(t)−φ(t₀))^j.
pub fn subtract_jet(clock: &ClockMap, f: &TimeSeries, jets: &[Complex64]) -> TimeSeries {
    let u0 = clock.phi(f.grid.start());
    f.map(|t, v| {
        let d = clock.phi(t) - u0;
        let mut acc = v;
        let mut p = 1.0;
        let mut fact = 1.0;
        for (j, c) in jets.iter().enumerate() {
            if j > 0 {
                p *= d;
                fact *= j as f64;
            }
            acc -= c * (p / fact);
        }
        acc
    })
}

/// Caputo type derivative ᶜD^{α,φ} f = D^{α,φ}[f − jet]. When `init` is None
/// the jet is estimated from the grid (lower accuracy).
pub fn caputo_derivative_with(
    alpha: FracOrder,
    clock: &ClockMap,
    f: &TimeSeries,
    init: Option<&[Complex64]>,
    op: Option<&IntegralOperator>,
) -> Result<TimeSeries, TimeFracError> {
    let jets = match init {
        Some(j) => {
            if j.len() != alpha.n {
                return Err(TimeFracError::WrongJetLength { expected: alpha.n, got: j.len() });
            }
            j.to_vec()
        }
        None => estimate_jets(alpha.n, clock, f)?,
    };
    let g = subtract_jet(clock, f, &jets);
    rl_derivative_with(alpha, clock, &g, op)
}

pub fn caputo_derivative(
    alpha: FracOrder,
    clock: &ClockMap,
    f: &TimeSeries,
    init: Option<&[Complex64]>,
) -> Result<TimeSeries, TimeFracError> {
    caputo_derivative_with(alpha, clock, f, init, None)
}

/// Ψ_j(t) = (φ(t) − φ(t₀))^j / Γ(j+1).
pub fn psi_basis(j: usize, clock: &ClockMap, grid: Arc<TimeGrid>) -> TimeSeries {
    let u0 = clock.phi(grid.start());
    let fact: f64 = (1..=j).map(|k| k as f64).product();
    TimeSeries::from_real_fn(grid, |t| (clock.phi(t) - u0).powi(j as i32) / fact)
}

/// Closed-form power rule D^{β,φ} Ψ_j = (φ − φ₀)^{j−β} / Γ(j−β+1), valid for
/// j − β > −1. A non-positive integer j−β+1 gives the zero function.
pub fn psi_power_derivative(
    j: usize,
    beta: f64,
    clock: &ClockMap,
    grid: Arc<TimeGrid>,
) -> Result<TimeSeries, TimeFracError> {
    let e = j as f64 - beta;
    if e <= -1.0 {
        return Err(TimeFracError::SingularSeed { j, beta });
    }
    let rg = if e >= 0.0 && e.fract() == 0.0 {
        1.0 / (1..=e as usize).map(|k| k as f64).product::<f64>()
    } else {
        recip_gamma(e + 1.0)
    };
    let u0 = clock.phi(grid.start());
    Ok(TimeSeries::from_real_fn(grid, |t| {
        let d = clock.phi(t) - u0;
        if e == 0.0 {
            rg
        } else if d == 0.0 {
            if e > 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d.powf(e) * rg
        }
    }))
}
