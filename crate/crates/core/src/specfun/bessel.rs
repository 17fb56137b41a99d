//! Bessel functions of the first kind J_ν(x) for real ν ≥ −1/2 and x ≥ 0.
//!
//! For x ≤ 2 the ascending series is summed directly (no cancellation there).
//! For x > 2 the Steed/Temme continued-fraction method gives J_μ and Y_μ at a
//! reduced order μ ∈ [0, 1), followed by a stable recurrence; negative orders
//! use J_{−μ} = cos(μπ) J_μ − sin(μπ) Y_μ.

use std::f64::consts::PI;

use super::gamma::{ln_gamma_signed, recip_gamma};

const SERIES_LIMIT: f64 = 2.0;
const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;

/// J_ν(x). Accurate to about 1e-14 absolute on x ∈ [0, 100], ν ∈ [−1/2, 20].
///
/// Outside the documented box the routine still returns the mathematically
/// defined value as long as ν ≥ −1/2; at x = 0 with ν < 0 it returns +∞.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(nu >= -0.5, "bessel_j: order {nu} below -1/2");
    assert!(x >= 0.0 && x.is_finite(), "bessel_j: argument {x} must be finite and >= 0");
    if x == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if x <= SERIES_LIMIT {
        return ascending_series(nu, x);
    }
    if nu >= 0.0 {
        steed(nu, x).0
    } else {
        let mu = -nu;
        let (j, y) = steed(mu, x);
        (mu * PI).cos() * j - (mu * PI).sin() * y
    }
}

fn ascending_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    // leading factor (x/2)^ν / Γ(ν+1), computed in log form for large ν
    let lead = if nu + 1.0 > 0.0 {
        let (lg, _) = ln_gamma_signed(nu + 1.0).expect("ν+1 > 0");
        (nu * (0.5 * x).ln() - lg).exp()
    } else {
        (0.5 * x).powf(nu) * recip_gamma(nu + 1.0)
    };
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Returns (J_ν(x), Y_ν(x)) for ν ≥ 0 and x > 2.
fn steed(nu: f64, x: f64) -> (f64, f64) {
    let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_ν/J_ν by modified Lentz
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence from ν to μ = ν − nl
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    // CF2: p + iq by complex modified Lentz
    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < 0.0 {
        rjmu = -rjmu;
    }
    let mut rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let mut ry1 = xmu * xi * rymu - rymup;
    let scale = rjmu / rjl;
    let rj = rjl1 * scale;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    (rj, rymu)
}
