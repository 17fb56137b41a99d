use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Blade, CliffordError, Multivector};
use crate::lattice::PeriodicLattice;

/// A Clifford-valued field on a lattice, stored as one dense array per blade.
/// The algebra has as many Euclidean generators as the lattice has axes.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivectorField {
    lattice: PeriodicLattice,
    components: BTreeMap<Blade, Vec<Complex64>>,
}

impl MultivectorField {
    pub fn zeros(lattice: PeriodicLattice) -> Self {
        Self { lattice, components: BTreeMap::new() }
    }

    pub fn from_scalar(lattice: PeriodicLattice, values: Vec<Complex64>) -> Result<Self, CliffordError> {
        let mut f = Self::zeros(lattice);
        f.set(Blade::SCALAR, values)?;
        Ok(f)
    }

    /// Samples a multivector-valued function at every node.
    pub fn from_fn(lattice: PeriodicLattice, f: impl Fn(&[f64]) -> Multivector) -> Result<Self, CliffordError> {
        let n = lattice.ndim();
        let mut out = Self::zeros(lattice.clone());
        for k in 0..lattice.len() {
            let v = f(&lattice.coords(k));
            if v.dim() != n {
                return Err(CliffordError::DimensionMismatch { left: n, right: v.dim() });
            }
            for (b, c) in v.terms() {
                out.components.entry(*b).or_insert_with(|| vec![Complex64::new(0.0, 0.0); lattice.len()])[k] = *c;
            }
        }
        Ok(out)
    }

    pub fn lattice(&self) -> &PeriodicLattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.ndim()
    }

    pub fn set(&mut self, blade: Blade, values: Vec<Complex64>) -> Result<(), CliffordError> {
        if values.len() != self.lattice.len() {
            return Err(CliffordError::Field(format!(
                "component has {} values, lattice has {} nodes",
                values.len(),
                self.lattice.len()
            )));
        }
        if (blade.mask as u64) >= (1u64 << (self.dim() + 2)) {
            return Err(CliffordError::BadGenerator { index: blade.mask as usize, n: self.dim() });
        }
        self.components.insert(blade, values);
        Ok(())
    }

    pub fn component(&self, blade: Blade) -> Option<&[Complex64]> {
        self.components.get(&blade).map(|v| v.as_slice())
    }

    pub fn blades(&self) -> impl Iterator<Item = &Blade> {
        self.components.keys()
    }

    pub fn at(&self, node: usize) -> Multivector {
        let mut m = Multivector::zero(self.dim());
        for (b, v) in &self.components {
            m.add_term(*b, v[node]);
        }
        m
    }

    /// Accumulates sign·values into the component `blade`.
    fn accumulate(&mut self, blade: Blade, scale: Complex64, values: &[Complex64]) {
        let len = self.lattice.len();
        let dst = self.components.entry(blade).or_insert_with(|| vec![Complex64::new(0.0, 0.0); len]);
        for (d, v) in dst.iter_mut().zip(values) {
            *d += scale * v;
        }
    }

    /// Left multiplication by a constant multivector.
    pub fn left_mul(&self, a: &Multivector) -> Result<Self, CliffordError> {
        if a.dim() != self.dim() {
            return Err(CliffordError::DimensionMismatch { left: a.dim(), right: self.dim() });
        }
        let mut out = Self::zeros(self.lattice.clone());
        for (ba, ca) in a.terms() {
            for (bb, vals) in &self.components {
                let (sign, blade) = ba.product(*bb, self.dim());
                out.accumulate(blade, ca * sign as f64, vals);
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CliffordError> {
        if self.lattice != other.lattice {
            return Err(CliffordError::Field("fields live on different lattices".into()));
        }
        let mut out = self.clone();
        for (b, v) in &other.components {
            out.accumulate(*b, Complex64::new(1.0, 0.0), v);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CliffordError> {
        let mut neg = other.clone();
        neg.components.values_mut().for_each(|v| v.iter_mut().for_each(|c| *c = -*c));
        self.checked_add(&neg)
    }

    /// Per-node Euclidean coefficient norms.
    pub fn node_norms(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.lattice.len()];
        for v in self.components.values() {
            for (a, c) in acc.iter_mut().zip(v) {
                *a += c.norm_sqr();
            }
        }
        acc.into_iter().map(f64::sqrt).collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.node_norms().into_iter().fold(0.0, f64::max)
    }

    /// Max node norm over the nodes where `mask` is true.
    pub fn max_norm_on(&self, mask: &[bool]) -> f64 {
        self.node_norms().into_iter().zip(mask).filter(|(_, m)| **m).fold(0.0, |a, (v, _)| a.max(v))
    }
}

/// Adds Σ_k e_k ∂_k(component) for one component, given its partial derivatives.
fn assemble(out: &mut MultivectorField, blade: Blade, partials: &[Vec<Complex64>]) {
    let n = out.dim();
    for (k, d) in partials.iter().enumerate() {
        let (sign, target) = Blade::generator(k).product(blade, n);
        out.accumulate(target, Complex64::new(sign as f64, 0.0), d);
    }
}

/// Euclidean Dirac operator D_x = Σ e_k ∂_{x_k} (left multiplication) with
/// spectral differentiation on the periodic lattice.
pub fn dirac_apply(field: &MultivectorField) -> Result<MultivectorField, CliffordError> {
    let lat = field.lattice();
    if let Some((axis, &d)) = lat.dims().iter().enumerate().find(|(_, &d)| d < 8) {
        return Err(CliffordError::Field(format!("axis {axis} has {d} nodes, need at least 8")));
    }
    let parts: Vec<(Blade, Vec<Vec<Complex64>>)> = field
        .components
        .par_iter()
        .map(|(b, v)| {
            let partials = (0..lat.ndim())
                .map(|k| lat.derivative(v, k).map_err(|e| CliffordError::Field(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((*b, partials))
        })
        .collect::<Result<_, CliffordError>>()?;
    let mut out = MultivectorField::zeros(lat.clone());
    for (b, p) in &parts {
        assemble(&mut out, *b, p);
    }
    Ok(out)
}

/// D_x with fourth-order central differences, treating the lattice as a
/// plain box (no wrap-around). Nodes within two cells of any face cannot be
/// differenced; they are returned as zero and marked false in the mask.
pub fn dirac_apply_fd(field: &MultivectorField) -> Result<(MultivectorField, Vec<bool>), CliffordError> {
    let lat = field.lattice();
    if let Some((axis, &d)) = lat.dims().iter().enumerate().find(|(_, &d)| d < 5) {
        return Err(CliffordError::Field(format!("axis {axis} has {d} nodes, need at least 5")));
    }
    let mask: Vec<bool> = (0..lat.len())
        .map(|k| lat.unravel(k).iter().zip(lat.dims()).all(|(&i, &d)| i >= 2 && i + 2 < d))
        .collect();
    let mut out = MultivectorField::zeros(lat.clone());
    for (b, v) in &field.components {
        let partials: Vec<Vec<Complex64>> = (0..lat.ndim())
            .map(|axis| {
                let h = lat.spacing(axis);
                (0..lat.len())
                    .map(|k| {
                        if !mask[k] {
                            return Complex64::new(0.0, 0.0);
                        }
                        let mut idx_buf = lat.unravel(k);
                        let i = idx_buf[axis];
                        let mut at = |off: isize| {
                            idx_buf[axis] = (i as isize + off) as usize;
                            v[lat.ravel(&idx_buf)]
                        };
                        (at(-2) - at(-1) * 8.0 + at(1) * 8.0 - at(2)) / (12.0 * h)
                    })
                    .collect()
            })
            .collect();
        assemble(&mut out, *b, &partials);
    }
    Ok((out, mask))
}

/// max-norm of D_x f over the lattice; zero for a left-monogenic field.
pub fn monogenic_residual(field: &MultivectorField) -> Result<f64, CliffordError> {
    Ok(dirac_apply(field)?.max_norm())
}

/// As [`monogenic_residual`], restricted to nodes where `mask` is true.
pub fn monogenic_residual_masked(field: &MultivectorField, mask: &[bool]) -> Result<f64, CliffordError> {
    if mask.len() != field.lattice().len() {
        return Err(CliffordError::Field("mask length differs from the lattice".into()));
    }
    Ok(dirac_apply(field)?.max_norm_on(mask))
}
