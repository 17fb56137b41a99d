//! Kilbas-Saigo type function E^λ_{α,β,γ}(z) = Σ c_k z^k with c₀ = 1 and
//! c_{k+1} = c_k · Γ(α(kβ+γ)+1) / Γ(α(kβ+γ)+λ+1).

use num_complex::Complex64;

use super::gamma::ln_gamma_signed;
use super::mittag_leffler::finish;
use super::{SeriesConfig, SeriesValue, SpecFunError};

/// Parameters of E^λ_{α,β,γ}. γ is real in this implementation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KilbasSaigoParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
}

impl KilbasSaigoParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> Result<Self, SpecFunError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(SpecFunError::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(SpecFunError::InvalidParameter(format!("beta must be > 0, got {beta}")));
        }
        if !(gamma.is_finite() && lambda.is_finite()) {
            return Err(SpecFunError::InvalidParameter("gamma and lambda must be finite".into()));
        }
        Ok(Self { alpha, beta, gamma, lambda })
    }

    fn pivot(&self, k: usize) -> f64 {
        self.alpha * (k as f64 * self.beta + self.gamma)
    }
}

/// The state of the coefficient recurrence in log form: c_k = sign · exp(ln_abs).
#[derive(Debug, Clone, Copy)]
struct Coef {
    ln_abs: f64,
    sign: f64,
    zero: bool,
}

fn next_coef(p: &KilbasSaigoParams, k: usize, c: Coef) -> Result<Coef, SpecFunError> {
    if c.zero {
        return Ok(c);
    }
    let x = p.pivot(k);
    let (num, num_sign) = ln_gamma_signed(x + 1.0)?;
    let den_arg = x + p.lambda + 1.0;
    if den_arg <= 0.0 && den_arg == den_arg.floor() {
        // 1/Γ vanishes: the series terminates.
        return Ok(Coef { ln_abs: f64::NEG_INFINITY, sign: 1.0, zero: true });
    }
    let (den, den_sign) = ln_gamma_signed(den_arg)?;
    Ok(Coef { ln_abs: c.ln_abs + num - den, sign: c.sign * num_sign * den_sign, zero: false })
}

/// The first `count` coefficients c₀, c₁, … of E^λ_{α,β,γ}.
pub fn kilbas_saigo_coefficients(params: &KilbasSaigoParams, count: usize) -> Result<Vec<f64>, SpecFunError> {
    let mut out = Vec::with_capacity(count);
    let mut c = Coef { ln_abs: 0.0, sign: 1.0, zero: false };
    for k in 0..count {
        out.push(if c.zero { 0.0 } else { c.sign * c.ln_abs.exp() });
        c = next_coef(params, k, c)?;
    }
    Ok(out)
}

/// Evaluates E^λ_{α,β,γ}(z). Stops once |c_k z^k| < `cfg.abs_tol` for three
/// consecutive k; the error estimate is a geometric tail bound built from the
/// last term ratio (valid once ratios decrease, which holds for λ > 0) plus
/// a rounding term.
pub fn kilbas_saigo(params: &KilbasSaigoParams, z: Complex64, cfg: &SeriesConfig) -> Result<SeriesValue, SpecFunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecFunError::InvalidParameter("z must be finite".into()));
    }
    let ln_z = z.norm().ln();
    let arg_z = z.arg();
    let real_input = z.im == 0.0;
    let mut c = Coef { ln_abs: 0.0, sign: 1.0, zero: false };
    let mut total = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut max_abs = 0.0f64;
    let mut passes = 0;
    let mut prev_mag = f64::NAN;
    for k in 0..cfg.max_terms {
        if c.zero {
            return finish("kilbas_saigo", total, 0.0, super::ROUNDING_ULPS * abs_sum, max_abs, k, cfg);
        }
        let mag = if k == 0 { 1.0 } else if z.norm() == 0.0 { 0.0 } else { (c.ln_abs + k as f64 * ln_z).exp() };
        let term = if real_input {
            let neg = z.re < 0.0 && k % 2 == 1;
            Complex64::new(if neg { -c.sign * mag } else { c.sign * mag }, 0.0)
        } else {
            Complex64::from_polar(c.sign * mag, k as f64 * arg_z)
        };
        total += term;
        abs_sum += mag;
        max_abs = max_abs.max(mag);
        if mag < cfg.abs_tol {
            passes += 1;
            if passes >= 3 {
                let ratio = if prev_mag > 0.0 { mag / prev_mag } else { 0.0 };
                let tail = if ratio < 1.0 { mag * ratio / (1.0 - ratio) } else { f64::INFINITY };
                if tail.is_finite() {
                    return finish("kilbas_saigo", total, tail, super::ROUNDING_ULPS * abs_sum, max_abs, k + 1, cfg);
                }
            }
        } else {
            passes = 0;
        }
        prev_mag = mag;
        c = next_coef(params, k, c)?;
    }
    Err(SpecFunError::NonConvergence { function: "kilbas_saigo", terms: cfg.max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_argument_is_one() {
        let p = KilbasSaigoParams::new(1.5, 3.0, 1.5, 1.5).unwrap();
        let v = kilbas_saigo(&p, Complex64::new(0.0, 0.0), &SeriesConfig::default()).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn telescoping_case_is_exponential() {
        let p = KilbasSaigoParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        for z in [-2.0, -0.5, 0.3, 1.7] {
            let v = kilbas_saigo(&p, Complex64::new(z, 0.0), &SeriesConfig::default()).unwrap();
            assert!((v.value.re - f64::exp(z)).abs() < 1e-13 * f64::exp(z).max(1.0), "z={z}");
        }
    }

    #[test]
    fn coefficients_of_telescoping_case_are_reciprocal_factorials() {
        let p = KilbasSaigoParams::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let c = kilbas_saigo_coefficients(&p, 10).unwrap();
        let mut f = 1.0;
        for (k, ck) in c.iter().enumerate() {
            if k > 0 {
                f *= k as f64;
            }
            assert!((ck * f - 1.0).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn numerator_pole_is_reported() {
        // α(0·β+γ)+1 = 0 at γ = -1
        let p = KilbasSaigoParams::new(1.0, 1.0, -1.0, 0.5).unwrap();
        assert!(kilbas_saigo(&p, Complex64::new(0.5, 0.0), &SeriesConfig::default()).is_err());
    }
}
