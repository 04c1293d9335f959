//! Eigenvalues of tiny complex matrices through the characteristic polynomial.
//!
//! The matrix is first shifted by its mean eigenvalue and scaled so that
//! clustered eigenvalues (the degenerate case) become well separated roots;
//! Faddeev–LeVerrier gives the characteristic polynomial and Durand–Kerner its
//! roots.

use num_complex::Complex64;

use super::linalg::CMatrix;
use crate::error::{Error, Result};

pub const MAX_SMALL_DIM: usize = 16;
const MAX_DK_ITER: usize = 2000;

/// Eigenvalues (with algebraic multiplicity) sorted by `(Re, Im)`.
pub fn eigenvalues_small(m: &CMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::Input("eigenvalues_small needs a non-empty square matrix".into()));
    }
    let k = m.rows();
    if k > MAX_SMALL_DIM {
        return Err(Error::Input(format!("dimension {k} exceeds {MAX_SMALL_DIM}")));
    }
    if !m.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let shift = m.trace() / k as f64;
    let mut shifted = m.clone();
    for i in 0..k {
        shifted[(i, i)] -= shift;
    }
    let scale = shifted.max_abs();
    let mut out = if scale == 0.0 {
        vec![shift; k]
    } else {
        let a = shifted.scale(Complex64::new(1.0 / scale, 0.0));
        let poly = characteristic_polynomial(&a);
        durand_kerner(&poly)?
            .into_iter()
            .map(|r| r * scale + shift)
            .collect()
    };
    sort_lexicographic(&mut out);
    Ok(out)
}

pub fn sort_lexicographic(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Monic characteristic polynomial `det(zI − A)`, coefficients from the
/// constant term upward (`len = k + 1`, last entry 1).
pub fn characteristic_polynomial(a: &CMatrix) -> Vec<Complex64> {
    let k = a.rows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
    coeffs[k] = Complex64::new(1.0, 0.0);
    let mut mk = CMatrix::zeros(k, k);
    for step in 1..=k {
        // M_step = A M_{step−1} + c_{k−step+1} I
        let mut next = a.matmul(&mk);
        let c_prev = coeffs[k - step + 1];
        for i in 0..k {
            next[(i, i)] += c_prev;
        }
        let am = a.matmul(&next);
        coeffs[k - step] = -am.trace() / step as f64;
        mk = next;
    }
    coeffs
}

fn horner(poly: &[Complex64], z: Complex64) -> Complex64 {
    poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn durand_kerner(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = poly.len() - 1;
    if k == 1 {
        return Ok(vec![-poly[0]]);
    }
    // Cauchy bound on the root moduli.
    let radius = 1.0 + poly[..k].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let base = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..k).map(|i| base.powu(i as u32 + 1) * radius * 0.5).collect();
    for _ in 0..MAX_DK_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..k {
            let zi = roots[i];
            let mut den = Complex64::new(1.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    den *= zi - zj;
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-14, 0.0);
            }
            let step = horner(poly, zi) / den;
            roots[i] = zi - step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= 1e-15 * radius {
            return Ok(roots);
        }
    }
    let residual = roots.iter().map(|r| horner(poly, *r).norm()).fold(0.0, f64::max);
    Err(Error::NoConvergence {
        iterations: MAX_DK_ITER,
        last: roots[0],
        residual,
    })
}
