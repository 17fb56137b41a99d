//! Multivariate Mittag-Leffler function
//!
//! E_{(a),b}(z) = Σ_k Σ_{l₁+…+l_n=k} k!/(l₁!…l_n!) Π zᵢ^{lᵢ} / Γ(b + Σ aᵢlᵢ),
//!
//! summed shell by shell in the total degree k.

use num_complex::Complex64;

use super::gamma::{ln_gamma_signed, ln_recip_gamma_sup_from, recip_gamma_sup_from};
use super::{SeriesConfig, SeriesValue, SpecFunError};

/// Parameters (a₁…a_n, b) of the multivariate Mittag-Leffler function.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMLParams {
    pub a: Vec<f64>,
    pub b: f64,
}

impl MultiMLParams {
    pub fn new(a: Vec<f64>, b: f64) -> Result<Self, SpecFunError> {
        if a.is_empty() {
            return Err(SpecFunError::InvalidParameter("a must be non-empty".into()));
        }
        if let Some(bad) = a.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(SpecFunError::InvalidParameter(format!("every a_i must be > 0, got {bad}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(SpecFunError::InvalidParameter(format!("b must be > 0, got {b}")));
        }
        Ok(Self { a, b })
    }
}

struct ShellWalker<'a> {
    a: &'a [f64],
    b: f64,
    ln_abs_z: Vec<f64>,
    arg_z: Vec<f64>,
    zero: Vec<bool>,
    ln_fact: &'a [f64],
    real_input: bool,
    sign_neg: Vec<bool>,
}

struct ShellSum {
    value: Complex64,
    abs_sum: f64,
    max_abs: f64,
}

impl ShellWalker<'_> {
    /// Sums all multinomial terms of total degree k.
    fn shell(&self, k: usize) -> Result<ShellSum, SpecFunError> {
        let mut acc = ShellSum { value: Complex64::new(0.0, 0.0), abs_sum: 0.0, max_abs: 0.0 };
        let n = self.a.len();
        let mut ls = vec![0usize; n];
        self.recurse(0, k, k, &mut ls, &mut acc)?;
        debug_assert_eq!(ls.len(), n);
        Ok(acc)
    }

    fn recurse(
        &self,
        i: usize,
        remaining: usize,
        k: usize,
        ls: &mut Vec<usize>,
        acc: &mut ShellSum,
    ) -> Result<(), SpecFunError> {
        let n = self.a.len();
        if i == n - 1 {
            ls[i] = remaining;
            return self.term(k, ls, acc);
        }
        for l in 0..=remaining {
            if l > 0 && self.zero[i] {
                break;
            }
            ls[i] = l;
            self.recurse(i + 1, remaining - l, k, ls, acc)?;
        }
        Ok(())
    }

    fn term(&self, k: usize, ls: &[usize], acc: &mut ShellSum) -> Result<(), SpecFunError> {
        let mut ln_mag = self.ln_fact[k];
        let mut phase = 0.0;
        let mut negative = false;
        let mut gamma_arg = self.b;
        for (i, &l) in ls.iter().enumerate() {
            if l == 0 {
                continue;
            }
            if self.zero[i] {
                return Ok(());
            }
            ln_mag += l as f64 * self.ln_abs_z[i] - self.ln_fact[l];
            gamma_arg += self.a[i] * l as f64;
            if self.real_input {
                negative ^= self.sign_neg[i] && l % 2 == 1;
            } else {
                phase += l as f64 * self.arg_z[i];
            }
        }
        let (lg, gsign) = ln_gamma_signed(gamma_arg)?;
        let mag = (ln_mag - lg).exp();
        let signed = if negative { -mag * gsign } else { mag * gsign };
        let t = if self.real_input {
            Complex64::new(signed, 0.0)
        } else {
            Complex64::from_polar(signed, phase)
        };
        acc.value += t;
        acc.abs_sum += mag;
        acc.max_abs = acc.max_abs.max(mag);
        Ok(())
    }
}

fn ln_factorials(up_to: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(up_to + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for k in 1..=up_to {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Shell-ordered evaluation of the multivariate Mittag-Leffler function.
///
/// Stops once the majorant (Σ|zᵢ|)^k · sup_{y ≥ b + k·min aᵢ} 1/Γ(y) drops below
/// `cfg.abs_tol` for three consecutive shells. The reported error estimate is
/// the remaining majorant tail plus a rounding term proportional to Σ|terms|.
pub fn ml_multivariate(
    params: &MultiMLParams,
    z: &[Complex64],
    cfg: &SeriesConfig,
) -> Result<SeriesValue, SpecFunError> {
    if z.len() != params.a.len() {
        return Err(SpecFunError::InvalidParameter(format!(
            "z has {} entries but a has {}",
            z.len(),
            params.a.len()
        )));
    }
    if z.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(SpecFunError::InvalidParameter("z must be finite".into()));
    }
    let max_shells = cfg.max_terms;
    let ln_fact = ln_factorials(max_shells + 1);
    let real_input = z.iter().all(|v| v.im == 0.0);
    let walker = ShellWalker {
        a: &params.a,
        b: params.b,
        ln_abs_z: z.iter().map(|v| v.norm().ln()).collect(),
        arg_z: z.iter().map(|v| v.arg()).collect(),
        zero: z.iter().map(|v| v.norm() == 0.0).collect(),
        ln_fact: &ln_fact,
        real_input,
        sign_neg: z.iter().map(|v| v.re < 0.0).collect(),
    };
    let a_min = params.a.iter().cloned().fold(f64::INFINITY, f64::min);
    let z_sum: f64 = z.iter().map(|v| v.norm()).sum();
    let ln_z_sum = z_sum.ln();
    let bound = |k: usize| -> f64 {
        if z_sum == 0.0 {
            return if k == 0 { recip_gamma_sup_from(params.b) } else { 0.0 };
        }
        (k as f64 * ln_z_sum + ln_recip_gamma_sup_from(params.b + k as f64 * a_min)).exp()
    };

    let mut total = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut max_abs = 0.0f64;
    let mut passes = 0;
    let mut last = None;
    for k in 0..max_shells {
        let s = walker.shell(k)?;
        total += s.value;
        abs_sum += s.abs_sum;
        max_abs = max_abs.max(s.max_abs);
        if bound(k) < cfg.abs_tol {
            passes += 1;
            if passes >= 3 {
                last = Some(k);
                break;
            }
        } else {
            passes = 0;
        }
    }
    let Some(last) = last else {
        return Err(SpecFunError::NonConvergence { function: "ml_multivariate", terms: max_shells });
    };
    // Tail of the majorant beyond the last summed shell.
    let mut tail = 0.0;
    let mut k = last + 1;
    loop {
        let b = bound(k);
        tail += b;
        if b <= 1e-3 * tail.max(f64::MIN_POSITIVE) || b == 0.0 || k > last + 2000 {
            break;
        }
        k += 1;
    }
    let rounding = super::ROUNDING_ULPS * abs_sum;
    finish("ml_multivariate", total, tail, rounding, max_abs, last + 1, cfg)
}

pub(crate) fn finish(
    function: &'static str,
    total: Complex64,
    tail: f64,
    rounding: f64,
    max_abs: f64,
    terms: usize,
    cfg: &SeriesConfig,
) -> Result<SeriesValue, SpecFunError> {
    let scale = total.norm().max(1.0);
    if rounding > cfg.max_rounding * scale {
        return Err(SpecFunError::PrecisionLoss { function, largest_term: max_abs, estimate: rounding });
    }
    Ok(SeriesValue { value: total, error_estimate: tail + rounding, terms })
}

/// Two-parameter Mittag-Leffler E_{α,β}(z) = Σ z^k/Γ(αk+β): the n = 1 case
/// of [`ml_multivariate`].
pub fn ml_two_param(alpha: f64, beta: f64, z: Complex64, cfg: &SeriesConfig) -> Result<SeriesValue, SpecFunError> {
    let p = MultiMLParams::new(vec![alpha], beta)?;
    ml_multivariate(&p, &[z], cfg)
}
