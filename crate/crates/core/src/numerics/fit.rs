//! Polynomial least-squares fits in ε for convergence studies.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// `coefficients[j]` multiplies `ε^j`.
    pub coefficients: Vec<Complex64>,
    pub residual_norm: f64,
    /// Estimated exponent `p` of the part of the data not captured by an
    /// affine model, `value − c₀ − c₁ε ≈ C ε^p`. `None` when the data are
    /// exactly affine or too few points are available.
    pub order_estimate: Option<f64>,
}

impl FitResult {
    pub fn eval(&self, eps: f64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * eps + c)
    }
}

/// Least-squares polynomial of the given degree through `(ε, value)` pairs.
///
/// The fit is done in the scaled variable `ε/ε_max` with a modified
/// Gram–Schmidt QR, which keeps the Vandermonde system well conditioned for
/// the small step ladders used in sweeps.
pub fn fit_expansion(points: &[(f64, Complex64)], degree: usize) -> Result<FitResult> {
    if degree == 0 {
        return Err(Error::Input("degree must be at least 1".into()));
    }
    for (e, v) in points {
        if !(e.is_finite() && *e > 0.0) {
            return Err(Error::Input(format!("ε must be positive and finite, got {e}")));
        }
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Input("non-finite value in fit data".into()));
        }
    }
    let mut eps: Vec<f64> = points.iter().map(|p| p.0).collect();
    eps.sort_by(f64::total_cmp);
    let scale = *eps.last().unwrap_or(&1.0);
    if eps.windows(2).any(|w| (w[1] - w[0]).abs() <= 1e-14 * scale) {
        return Err(Error::Input("repeated ε values in fit data".into()));
    }
    if points.len() < degree + 2 {
        return Err(Error::Input(format!(
            "need at least {} distinct points for degree {degree}, got {}",
            degree + 2,
            points.len()
        )));
    }

    let n = points.len();
    let m = degree + 1;
    // columns of the scaled Vandermonde matrix
    let mut q: Vec<Vec<f64>> = (0..m)
        .map(|j| points.iter().map(|(e, _)| (e / scale).powi(j as i32)).collect())
        .collect();
    let mut r = vec![vec![0.0; m]; m];
    for j in 0..m {
        for i in 0..j {
            let dot: f64 = (0..n).map(|k| q[i][k] * q[j][k]).sum();
            r[i][j] = dot;
            for k in 0..n {
                q[j][k] -= dot * q[i][k];
            }
        }
        let nrm = q[j].iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return Err(Error::Input("degenerate ε set".into()));
        }
        r[j][j] = nrm;
        for x in q[j].iter_mut() {
            *x /= nrm;
        }
    }
    let qtb: Vec<Complex64> = (0..m)
        .map(|j| (0..n).map(|k| points[k].1 * q[j][k]).sum())
        .collect();
    let mut c = vec![Complex64::new(0.0, 0.0); m];
    for j in (0..m).rev() {
        let mut acc = qtb[j];
        for i in j + 1..m {
            acc -= c[i] * r[j][i];
        }
        c[j] = acc / r[j][j];
    }
    let coefficients: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(j, cj)| cj / scale.powi(j as i32))
        .collect();
    let fit = FitResult {
        coefficients,
        residual_norm: 0.0,
        order_estimate: None,
    };
    let residual_norm = points
        .iter()
        .map(|(e, v)| (v - fit.eval(*e)).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(FitResult {
        residual_norm,
        order_estimate: remainder_order(points),
        ..fit
    })
}

/// Fit anchored at a known value `v₀` at `ε = 0`: the difference quotients
/// `(v(ε) − v₀)/ε` are fitted with a polynomial of the given degree, so the
/// returned coefficients describe `v₀ + c₁ε + … + c_{degree+1}ε^{degree+1}`.
pub fn fit_anchored(points: &[(f64, Complex64)], value_at_zero: Complex64, degree: usize) -> Result<FitResult> {
    let quotients: Vec<(f64, Complex64)> = points
        .iter()
        .map(|(e, v)| (*e, (v - value_at_zero) / *e))
        .collect();
    let inner = fit_expansion(&quotients, degree)?;
    let mut coefficients = vec![value_at_zero];
    coefficients.extend(inner.coefficients);
    let fit = FitResult {
        coefficients,
        residual_norm: 0.0,
        order_estimate: None,
    };
    let residual_norm = points
        .iter()
        .map(|(e, v)| (v - fit.eval(*e)).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(FitResult {
        residual_norm,
        order_estimate: remainder_order(points),
        ..fit
    })
}

/// Exponent of the non-affine remainder, read off from second divided
/// differences: if `v(ε) = a + bε + Cε^p + …` then `v[ε₀,ε₁,ε₂] ∝ ε^{p−2}`.
pub fn remainder_order(points: &[(f64, Complex64)]) -> Option<f64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < 4 {
        return None;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for w in pts.windows(3) {
        let (e0, v0) = w[0];
        let (e1, v1) = w[1];
        let (e2, v2) = w[2];
        let d01 = (v1 - v0) / (e1 - e0);
        let d12 = (v2 - v1) / (e2 - e1);
        let dd = ((d12 - d01) / (e2 - e0)).norm();
        if !(dd > 0.0) || !dd.is_finite() {
            return None;
        }
        xs.push(((e0 + e1 + e2) / 3.0).ln());
        ys.push(dd.ln());
    }
    let scale = ys.iter().map(|y| y.abs()).fold(1.0, f64::max);
    if ys.iter().all(|y| (y - ys[0]).abs() <= 1e-12 * scale) {
        return Some(2.0);
    }
    log_log_slope(&xs, &ys).map(|s| 2.0 + s)
}

/// Least-squares slope of `y` against `x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}
