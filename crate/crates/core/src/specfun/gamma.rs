//! Gamma and log-Gamma by the Lanczos approximation (Pugh's g = 10.900511,
//! eleven coefficients), with reflection below 1/2.

use std::f64::consts::{E, PI};

use super::SpecFunError;

const LANCZOS_G: f64 = 10.900511;

const LANCZOS_D: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];

/// 2·sqrt(e/π)
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;
/// ln(2·sqrt(e/π))
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

/// Largest argument for which Γ(x) is finite in double precision.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// Test-only fault injection. A non-zero perturbation p multiplies every
/// Γ value by (1+p). Used by the self-check harness to prove that suites
/// fail in isolation; never set it in production code.
#[doc(hidden)]
pub mod fault {
    use std::sync::atomic::{AtomicU64, Ordering};

    static PERTURBATION: AtomicU64 = AtomicU64::new(0);

    pub fn set_gamma_perturbation(p: f64) {
        PERTURBATION.store(p.to_bits(), Ordering::SeqCst);
    }

    pub(crate) fn gamma_perturbation() -> f64 {
        f64::from_bits(PERTURBATION.load(Ordering::Relaxed))
    }
}

fn lanczos_sum(x: f64) -> f64 {
    // Series evaluated at x >= 1/2: d0 + Σ d_k / (x + k - 1)
    LANCZOS_D
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_D[0], |s, (k, d)| s + d / (x + k as f64 - 1.0))
}

/// sin(πx) with argument reduction done before the multiplication by π, so
/// that values near integers keep full relative accuracy.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r.abs() <= 0.5 {
        (PI * r).sin()
    } else {
        // sin(π r) = sin(π (sign(r) - r))
        (PI * (r.signum() - r)).sin()
    }
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn unperturbed_gamma(x: f64) -> Result<f64, SpecFunError> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if is_pole(x) {
        return Err(SpecFunError::GammaPole { x });
    }
    if x < 0.5 {
        let g = unperturbed_gamma(1.0 - x)?;
        return Ok(PI / (sin_pi(x) * g));
    }
    if x > GAMMA_MAX_ARG {
        return Ok(f64::INFINITY);
    }
    let s = lanczos_sum(x);
    // Split the power so the intermediate does not overflow near x = 171.
    let half = ((x - 0.5 + LANCZOS_G) / E).powf(0.5 * (x - 0.5));
    Ok(s * TWO_SQRT_E_OVER_PI * half * half)
}

/// Γ(x). Errors at non-positive integers; overflows to +∞ past ~171.62.
pub fn gamma(x: f64) -> Result<f64, SpecFunError> {
    let g = unperturbed_gamma(x)?;
    let p = fault::gamma_perturbation();
    Ok(if p == 0.0 { g } else { g * (1.0 + p) })
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64), SpecFunError> {
    if x.is_nan() {
        return Ok((f64::NAN, 1.0));
    }
    if is_pole(x) {
        return Err(SpecFunError::GammaPole { x });
    }
    let (lg, sign) = if x < 0.5 {
        let s = sin_pi(x);
        let (lg1, sign1) = ln_gamma_signed(1.0 - x)?;
        (PI.ln() - s.abs().ln() - lg1, s.signum() * sign1)
    } else {
        let s = lanczos_sum(x);
        let t = x - 0.5 + LANCZOS_G;
        (s.ln() + LN_TWO_SQRT_E_OVER_PI + (x - 0.5) * (t.ln() - 1.0), 1.0)
    };
    let p = fault::gamma_perturbation();
    Ok(if p == 0.0 || x < 0.5 { (lg, sign) } else { (lg + (1.0 + p).ln(), sign) })
}

/// ln|Γ(x)|. Relative accuracy about 1e-15 away from the zeros of ln Γ at 1 and 2.
pub fn log_gamma(x: f64) -> Result<f64, SpecFunError> {
    ln_gamma_signed(x).map(|(v, _)| v)
}

/// 1/Γ(x), which is entire: returns 0 at the poles instead of an error.
pub fn recip_gamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x > GAMMA_MAX_ARG {
        return match ln_gamma_signed(x) {
            Ok((lg, _)) => (-lg).exp(),
            Err(_) => 0.0,
        };
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// sup_{y ≥ x0} 1/Γ(y) for x0 > 0. The maximum of 1/Γ on (0, ∞) is attained
/// at the minimum of Γ, y* ≈ 1.4616, where 1/Γ(y*) ≈ 1.12916.
pub(crate) fn recip_gamma_sup_from(x0: f64) -> f64 {
    const ARGMIN: f64 = 1.461_632_144_968_362_3;
    const SUP: f64 = 1.129_162_0;
    if x0 <= ARGMIN {
        SUP
    } else {
        recip_gamma(x0)
    }
}

/// ln of [`recip_gamma_sup_from`] for x0 > 0, finite far beyond the range
/// where 1/Γ underflows.
pub(crate) fn ln_recip_gamma_sup_from(x0: f64) -> f64 {
    const ARGMIN: f64 = 1.461_632_144_968_362_3;
    if x0 <= ARGMIN {
        recip_gamma_sup_from(x0).ln()
    } else {
        -ln_gamma_signed(x0).map(|v| v.0).unwrap_or(f64::INFINITY)
    }
}
