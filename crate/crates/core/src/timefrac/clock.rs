use std::fmt;
use std::sync::Arc;

use super::{TimeFracError, TimeGrid};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A strictly increasing C¹ clock φ on [t_start, t_end] together with φ′.
#[derive(Clone)]
pub struct ClockMap {
    name: String,
    phi: RealFn,
    phi_prime: RealFn,
    pub t_start: f64,
    pub t_end: f64,
}

impl fmt::Debug for ClockMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClockMap")
            .field("name", &self.name)
            .field("t_start", &self.t_start)
            .field("t_end", &self.t_end)
            .finish()
    }
}

impl ClockMap {
    pub fn custom<F, G>(name: impl Into<String>, phi: F, phi_prime: G, t_start: f64, t_end: f64) -> Result<Self, TimeFracError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
            return Err(TimeFracError::InvalidInterval { t_start, t_end });
        }
        Ok(Self { name: name.into(), phi: Arc::new(phi), phi_prime: Arc::new(phi_prime), t_start, t_end })
    }

    /// φ(t) = t.
    pub fn identity(t_start: f64, t_end: f64) -> Result<Self, TimeFracError> {
        Self::custom("identity", |t| t, |_| 1.0, t_start, t_end)
    }

    /// φ(t) = t^p. Only valid on intervals where p·t^{p−1} > 0 is finite, so
    /// t_start must be positive unless p = 1.
    pub fn power(p: f64, t_start: f64, t_end: f64) -> Result<Self, TimeFracError> {
        if !(p.is_finite() && p > 0.0) {
            return Err(TimeFracError::InvalidClock(format!("power exponent must be > 0, got {p}")));
        }
        if p != 1.0 && t_start <= 0.0 {
            return Err(TimeFracError::InvalidClock(format!(
                "power:{p} needs t_start > 0 (φ′ vanishes or blows up at 0)"
            )));
        }
        Self::custom(format!("power:{p}"), move |t| t.powf(p), move |t| p * t.powf(p - 1.0), t_start, t_end)
    }

    /// φ(t) = eᵗ.
    pub fn exp(t_start: f64, t_end: f64) -> Result<Self, TimeFracError> {
        Self::custom("exp", f64::exp, f64::exp, t_start, t_end)
    }

    /// Registry lookup: "identity", "power:p", "exp".
    pub fn from_name(name: &str, t_start: f64, t_end: f64) -> Result<Self, TimeFracError> {
        match name {
            "identity" => Self::identity(t_start, t_end),
            "exp" => Self::exp(t_start, t_end),
            _ => {
                if let Some(p) = name.strip_prefix("power:") {
                    let p: f64 = p
                        .trim()
                        .parse()
                        .map_err(|_| TimeFracError::InvalidClock(format!("cannot parse exponent in '{name}'")))?;
                    Self::power(p, t_start, t_end)
                } else {
                    Err(TimeFracError::InvalidClock(format!("unknown clock '{name}'")))
                }
            }
        }
    }

    /// A clock given by samples (tₖ, φ(tₖ), φ′(tₖ)). Between samples φ is the
    /// cubic Hermite interpolant and φ′ is its exact derivative, so the pair
    /// stays consistent.
    pub fn tabulated(t: Vec<f64>, phi: Vec<f64>, dphi: Vec<f64>) -> Result<Self, TimeFracError> {
        if t.len() < 2 || t.len() != phi.len() || t.len() != dphi.len() {
            return Err(TimeFracError::InvalidClock("tabulated clock needs ≥ 2 rows of (t, φ, φ′)".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(TimeFracError::InvalidClock("tabulated clock times must be strictly increasing".into()));
        }
        if let Some(k) = dphi.iter().position(|d| !(*d > 0.0)) {
            return Err(TimeFracError::NonMonotoneClock { t: t[k], phi_prime: dphi[k] });
        }
        let table = Arc::new(HermiteTable { t, phi, dphi });
        let (t0, t1) = (table.t[0], *table.t.last().unwrap());
        let a = table.clone();
        Self::custom("tabulated", move |x| a.eval(x).0, move |x| table.eval(x).1, t0, t1)
    }

    /// Parses CSV text with rows `t,phi,phi_prime`; a non-numeric first line is a header.
    pub fn tabulated_from_csv(text: &str) -> Result<Self, TimeFracError> {
        let (mut t, mut p, mut d) = (Vec::new(), Vec::new(), Vec::new());
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: Result<Vec<f64>, _> = cols.iter().map(|c| c.parse::<f64>()).collect();
            match parsed {
                Ok(v) if v.len() == 3 => {
                    t.push(v[0]);
                    p.push(v[1]);
                    d.push(v[2]);
                }
                Err(_) if lineno == 0 => continue,
                _ => {
                    return Err(TimeFracError::InvalidClock(format!(
                        "clock table line {} must hold three numbers t,phi,phi_prime",
                        lineno + 1
                    )))
                }
            }
        }
        Self::tabulated(t, p, d)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn phi(&self, t: f64) -> f64 {
        (self.phi)(t)
    }

    pub fn phi_prime(&self, t: f64) -> f64 {
        (self.phi_prime)(t)
    }

    /// Checks the clock against a grid: t₀ = t_start, nodes inside the domain,
    /// φ′ > 0 at every node, and φ′ consistent with a central difference of φ
    /// (relative error < 1e-6) at interior nodes.
    pub fn validate_on(&self, grid: &TimeGrid) -> Result<(), TimeFracError> {
        let nodes = grid.nodes();
        let scale = (self.t_end - self.t_start).abs().max(1.0);
        if (nodes[0] - self.t_start).abs() > 1e-12 * scale {
            return Err(TimeFracError::GridMismatch(format!(
                "grid starts at {} but clock starts at {}",
                nodes[0], self.t_start
            )));
        }
        if *nodes.last().unwrap() > self.t_end + 1e-12 * scale {
            return Err(TimeFracError::GridMismatch(format!(
                "grid ends at {} beyond clock domain end {}",
                nodes.last().unwrap(),
                self.t_end
            )));
        }
        for &t in nodes {
            let d = self.phi_prime(t);
            if !(d > 0.0) || !d.is_finite() {
                return Err(TimeFracError::NonMonotoneClock { t, phi_prime: d });
            }
        }
        let delta = 1e-5 * scale;
        for &t in &nodes[1..nodes.len() - 1] {
            if t - delta < self.t_start || t + delta > self.t_end {
                continue;
            }
            let fd = (self.phi(t + delta) - self.phi(t - delta)) / (2.0 * delta);
            let d = self.phi_prime(t);
            if ((fd - d) / d).abs() > 1e-6 {
                return Err(TimeFracError::InvalidClock(format!(
                    "phi_prime({t}) = {d} disagrees with a central difference of phi ({fd})"
                )));
            }
        }
        Ok(())
    }
}

struct HermiteTable {
    t: Vec<f64>,
    phi: Vec<f64>,
    dphi: Vec<f64>,
}

impl HermiteTable {
    fn eval(&self, x: f64) -> (f64, f64) {
        let n = self.t.len();
        let k = match self.t.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.t[k + 1] - self.t[k];
        let s = (x - self.t[k]) / h;
        let (p0, p1, m0, m1) = (self.phi[k], self.phi[k + 1], self.dphi[k] * h, self.dphi[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let val = (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * m1;
        let der = ((6.0 * s2 - 6.0 * s) * p0 + (3.0 * s2 - 4.0 * s + 1.0) * m0 + (-6.0 * s2 + 6.0 * s) * p1 + (3.0 * s2 - 2.0 * s) * m1) / h;
        (val, der)
    }
}
