//! Shared checks for the Clifford layer: exact Witt identities in rational
//! arithmetic and the finite-difference Bessel kernel identity.

use fracdirac_core::clifford::{dirac_apply_fd, witt_pair, Multivector, MultivectorField};
use fracdirac_core::lattice::PeriodicLattice;
use fracdirac_core::specfun::bessel_j;
use fracdirac_core::Complex64;
use num_rational::Ratio;

pub type Q = Ratio<i64>;

pub fn q(v: i64) -> Q {
    Ratio::from_integer(v)
}

/// 𝔣² = 0, (𝔣⁺)² = 0, 𝔣𝔣⁺ + 𝔣⁺𝔣 = 1 and 𝔣eᵢ + eᵢ𝔣 = 𝔣⁺eᵢ + eᵢ𝔣⁺ = 0, exactly.
pub fn witt_identities_hold(n: usize) -> bool {
    let (f, fp) = witt_pair::<Q>(n);
    let zero = Multivector::<Q>::zero(n);
    let one = Multivector::scalar(n, q(1));
    let mut ok = &f * &f == zero && &fp * &fp == zero && &(&f * &fp) + &(&fp * &f) == one;
    for i in 1..=n {
        let e = Multivector::<Q>::e(n, i).unwrap();
        ok &= &(&f * &e) + &(&e * &f) == zero;
        ok &= &(&fp * &e) + &(&e * &fp) == zero;
    }
    ok
}

/// Relative max error of D_x applied by finite differences to
/// x ↦ |x|^{1−n/2} J_{n/2−1}(r|x|) against −(r x/|x|^{n/2}) J_{n/2}(r|x|),
/// on the box [0.3, 2.3]^n (the origin is excluded).
pub fn bessel_dirac_error(n: usize, r: f64) -> f64 {
    let nodes = if n == 2 { 121 } else { 61 };
    let h = 2.0 / (nodes - 1) as f64;
    let lat = PeriodicLattice::with_origin(vec![nodes; n], vec![h * nodes as f64; n], vec![0.3; n]).unwrap();
    let nu = n as f64 / 2.0 - 1.0;
    let values = lat.sample_real(|x| {
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        rho.powf(-nu) * bessel_j(nu, r * rho)
    });
    let field = MultivectorField::from_scalar(lat.clone(), values).unwrap();
    let (d, mask) = dirac_apply_fd(&field).unwrap();
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for k in (0..lat.len()).filter(|&k| mask[k]) {
        let x = lat.coords(k);
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let radial = -r * rho.powf(-(n as f64) / 2.0) * bessel_j(n as f64 / 2.0, r * rho);
        let mut want = Multivector::zero(n);
        for (i, xi) in x.iter().enumerate() {
            want.add_term(fracdirac_core::clifford::Blade::generator(i), Complex64::new(radial * xi, 0.0));
        }
        err = err.max((&d.at(k) - &want).norm());
        scale = scale.max(want.norm());
    }
    err / scale
}
