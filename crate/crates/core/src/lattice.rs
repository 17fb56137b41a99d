//! Uniform periodic lattices and the n-dimensional discrete Fourier transform
//! used to diagonalize spatial operators.
//!
//! Storage is row-major with the last axis fastest. The forward transform is
//! unnormalized with kernel e^{−ikx}; the inverse carries the 1/N factor.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("lattice needs at least one axis")]
    NoAxes,
    #[error("axis {axis}: {nodes} nodes, need at least {needed}")]
    TooFewNodes { axis: usize, nodes: usize, needed: usize },
    #[error("axis {axis}: length must be finite and > 0, got {length}")]
    BadLength { axis: usize, length: f64 },
    #[error("field has {got} values, lattice has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicLattice {
    dims: Vec<usize>,
    lengths: Vec<f64>,
    origin: Vec<f64>,
}

impl PeriodicLattice {
    /// A lattice with `dims[a]` nodes over a period `lengths[a]` on each axis,
    /// starting at the origin.
    pub fn new(dims: Vec<usize>, lengths: Vec<f64>) -> Result<Self, LatticeError> {
        let origin = vec![0.0; dims.len()];
        Self::with_origin(dims, lengths, origin)
    }

    pub fn with_origin(dims: Vec<usize>, lengths: Vec<f64>, origin: Vec<f64>) -> Result<Self, LatticeError> {
        if dims.is_empty() {
            return Err(LatticeError::NoAxes);
        }
        if lengths.len() != dims.len() || origin.len() != dims.len() {
            return Err(LatticeError::DimensionMismatch(format!(
                "{} axes but {} lengths and {} origin entries",
                dims.len(),
                lengths.len(),
                origin.len()
            )));
        }
        for (axis, (&d, &l)) in dims.iter().zip(&lengths).enumerate() {
            if d < 2 {
                return Err(LatticeError::TooFewNodes { axis, nodes: d, needed: 2 });
            }
            if !(l.is_finite() && l > 0.0) {
                return Err(LatticeError::BadLength { axis, length: l });
            }
        }
        Ok(Self { dims, lengths, origin })
    }

    /// The cube [0, 2π)^n with `nodes` points per axis.
    pub fn cube(ndim: usize, nodes: usize) -> Result<Self, LatticeError> {
        Self::new(vec![nodes; ndim], vec![2.0 * PI; ndim])
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.lengths[axis] / self.dims[axis] as f64
    }

    fn stride(&self, axis: usize) -> usize {
        self.dims[axis + 1..].iter().product()
    }

    /// Per-axis integer indices of a flat index.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.ndim()];
        for a in (0..self.ndim()).rev() {
            out[a] = flat % self.dims[a];
            flat /= self.dims[a];
        }
        out
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.origin[a] + i as f64 * self.spacing(a))
            .collect()
    }

    /// Signed FFT-order frequency index m ∈ (−d/2, d/2] of slot i on `axis`.
    pub fn signed_index(&self, axis: usize, i: usize) -> i64 {
        let d = self.dims[axis];
        if i <= d / 2 {
            i as i64
        } else {
            i as i64 - d as i64
        }
    }

    /// Whether slot i on `axis` holds the unpaired Nyquist frequency.
    pub fn is_nyquist(&self, axis: usize, i: usize) -> bool {
        let d = self.dims[axis];
        d % 2 == 0 && i == d / 2
    }

    /// Wavenumber 2πm/L for slot i on `axis`.
    pub fn wavenumber(&self, axis: usize, i: usize) -> f64 {
        2.0 * PI * self.signed_index(axis, i) as f64 / self.lengths[axis]
    }

    /// The wave vector s of a flat spectral index.
    pub fn wavevector(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat).iter().enumerate().map(|(a, &i)| self.wavenumber(a, i)).collect()
    }

    pub fn xi_norm(&self, flat: usize) -> f64 {
        self.wavevector(flat).iter().map(|k| k * k).sum::<f64>().sqrt()
    }

    /// Whether any axis of the spectral index sits on a Nyquist slot.
    pub fn touches_nyquist(&self, flat: usize) -> bool {
        self.unravel(flat).iter().enumerate().any(|(a, &i)| self.is_nyquist(a, i))
    }

    pub fn sample(&self, f: impl Fn(&[f64]) -> Complex64) -> Vec<Complex64> {
        (0..self.len()).map(|k| f(&self.coords(k))).collect()
    }

    pub fn sample_real(&self, f: impl Fn(&[f64]) -> f64) -> Vec<Complex64> {
        self.sample(|x| Complex64::new(f(x), 0.0))
    }

    fn check(&self, data: &[Complex64]) -> Result<(), LatticeError> {
        if data.len() != self.len() {
            return Err(LatticeError::SizeMismatch { expected: self.len(), got: data.len() });
        }
        Ok(())
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        let mut line = Vec::new();
        for (axis, plan) in plans.iter().enumerate() {
            let d = self.dims[axis];
            let stride = self.stride(axis);
            let block = d * stride;
            line.resize(d, Complex64::new(0.0, 0.0));
            for outer in (0..data.len()).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (i, v) in line.iter_mut().enumerate() {
                        *v = data[base + i * stride];
                    }
                    plan.process(&mut line);
                    for (i, v) in line.iter().enumerate() {
                        data[base + i * stride] = *v;
                    }
                }
            }
        }
    }

    pub fn forward(&self, data: &[Complex64]) -> Result<Vec<Complex64>, LatticeError> {
        self.check(data)?;
        let mut planner = FftPlanner::new();
        let plans: Vec<_> = self.dims.iter().map(|&d| planner.plan_fft_forward(d)).collect();
        let mut out = data.to_vec();
        self.transform(&mut out, &plans);
        Ok(out)
    }

    pub fn inverse(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>, LatticeError> {
        self.check(spectrum)?;
        let mut planner = FftPlanner::new();
        let plans: Vec<_> = self.dims.iter().map(|&d| planner.plan_fft_inverse(d)).collect();
        let mut out = spectrum.to_vec();
        self.transform(&mut out, &plans);
        let scale = 1.0 / self.len() as f64;
        out.iter_mut().for_each(|v| *v *= scale);
        Ok(out)
    }

    /// Applies a Fourier multiplier m(s) (s = wave vector) to a field.
    pub fn apply_multiplier(
        &self,
        data: &[Complex64],
        multiplier: impl Fn(&[f64], usize) -> Complex64,
    ) -> Result<Vec<Complex64>, LatticeError> {
        let mut spec = self.forward(data)?;
        for (k, v) in spec.iter_mut().enumerate() {
            *v *= multiplier(&self.wavevector(k), k);
        }
        self.inverse(&spec)
    }

    /// Spectral ∂/∂x_axis. The Nyquist slot is dropped because its
    /// derivative is not representable as a real trigonometric polynomial.
    pub fn derivative(&self, data: &[Complex64], axis: usize) -> Result<Vec<Complex64>, LatticeError> {
        if axis >= self.ndim() {
            return Err(LatticeError::DimensionMismatch(format!("axis {axis} on a {}-d lattice", self.ndim())));
        }
        self.apply_multiplier(data, |s, k| {
            let i = self.unravel(k)[axis];
            if self.is_nyquist(axis, i) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, s[axis])
            }
        })
    }
}
