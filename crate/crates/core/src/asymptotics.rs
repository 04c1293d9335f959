//! First-order eigenvalue corrections from boundary traces of the limit
//! eigenfunction.
//!
//! For a simple eigenvalue
//!
//! ```text
//! λ₀′ = [α₊∫∂ₙ⁺ψ₀² + α₋∫∂ₙ⁻ψ₀² − ∫(α₊² + α₋² + (α₊−α₋)(d−1)K₁)ψ₀²] / ∫ψ₀²
//! ```
//!
//! where the surface integrals run over Σ₀, `∂ₙ±ψ₀² = 2ψ₀∂ₙ±ψ₀`, `∂ₙ⁺` is
//! the outward derivative from outside and `∂ₙ⁻` the inward derivative from
//! inside, so that `∂ₙ⁺ψ₀ + ∂ₙ⁻ψ₀ = (α₊+α₋)ψ₀`. All pairings are bilinear.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::geometry::{curvature, ClosedCurve, CurveKind};
use crate::numerics::eigenvalues_small;
use crate::numerics::linalg::CMatrix;

const PAIRING_FLOOR: f64 = 1e-10;

/// Where the trace samples live.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Surface {
    /// The origin of the line; the single sample has weight 1.
    Point,
    Curve { curve: CurveKind, samples: usize },
    /// Sphere of radius `R` in `R^d`; samples on an angular grid.
    Sphere {
        #[serde(rename = "R")]
        r: f64,
        d: usize,
    },
}

/// Boundary data of one limit eigenfunction on Σ₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceBundle {
    pub surface: Surface,
    pub d: usize,
    /// Quadrature weights of `∫_{Σ₀} · dΣ₀`, node-aligned.
    pub weights: Vec<f64>,
    pub psi0: Vec<Complex64>,
    pub dn_plus: Vec<Complex64>,
    pub dn_minus: Vec<Complex64>,
    pub k1: Vec<f64>,
    /// `∫ψ₀²` over the whole space, bilinear.
    pub norm_sq: Complex64,
}

impl TraceBundle {
    /// Bundle on a closed curve in the plane; weights are the periodic
    /// trapezoid weights and `K₁` is the curve's signed curvature.
    pub fn on_curve(
        curve: &ClosedCurve,
        psi0: Vec<Complex64>,
        dn_plus: Vec<Complex64>,
        dn_minus: Vec<Complex64>,
        norm_sq: Complex64,
    ) -> Result<Self> {
        let h = 2.0 * std::f64::consts::PI / curve.len() as f64;
        let bundle = Self {
            surface: Surface::Curve {
                curve: curve.kind().clone(),
                samples: curve.len(),
            },
            d: 2,
            weights: curve.points().iter().map(|p| p.speed * h).collect(),
            psi0,
            dn_plus,
            dn_minus,
            k1: curvature(curve).k1,
            norm_sq,
        };
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.weights.len();
        if n == 0 {
            return Err(Error::Input("empty trace bundle".into()));
        }
        if [self.psi0.len(), self.dn_plus.len(), self.dn_minus.len(), self.k1.len()]
            .iter()
            .any(|&l| l != n)
        {
            return Err(Error::Input("trace arrays are not node-aligned".into()));
        }
        if !(1..=3).contains(&self.d) {
            return Err(Error::Input(format!("dimension {} not supported", self.d)));
        }
        if self.norm_sq.norm() == 0.0 || !self.norm_sq.re.is_finite() || !self.norm_sq.im.is_finite() {
            return Err(Error::Normalization("∫ψ₀² vanishes".into()));
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let s = |v: &[Complex64]| v.iter().map(|x| x * c).collect();
        Self {
            psi0: s(&self.psi0),
            dn_plus: s(&self.dn_plus),
            dn_minus: s(&self.dn_minus),
            norm_sq: self.norm_sq * c * c,
            ..self.clone()
        }
    }

    /// `∫_{Σ₀} ψ₀²`.
    pub fn surface_sq(&self) -> Complex64 {
        self.weights.iter().zip(&self.psi0).map(|(w, p)| p * p * *w).sum()
    }

    /// Largest violation of `∂ₙ⁺ψ₀ + ∂ₙ⁻ψ₀ = (α₊+α₋)ψ₀`, relative to `max|ψ₀|`.
    pub fn jump_residual(&self, c: &Coupling) -> f64 {
        let scale = self.psi0.iter().map(|p| p.norm()).fold(0.0, f64::max);
        self.psi0
            .iter()
            .zip(self.dn_plus.iter().zip(&self.dn_minus))
            .map(|(p, (a, b))| (a + b - c.sum() * p).norm())
            .fold(0.0, f64::max)
            / scale.max(f64::MIN_POSITIVE)
    }
}

fn check_aligned(a: &TraceBundle, b: &TraceBundle) -> Result<()> {
    if a.weights != b.weights || a.k1 != b.k1 || a.d != b.d {
        return Err(Error::Input("bundles live on different surfaces".into()));
    }
    Ok(())
}

/// Numerator of the slope formula as a bilinear form in two eigenfunctions.
fn correction_form(u: &TraceBundle, v: &TraceBundle, c: &Coupling) -> Complex64 {
    let (ap, am) = (c.alpha_plus, c.alpha_minus);
    let dm1 = (u.d - 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..u.weights.len() {
        let (pu, pv) = (u.psi0[j], v.psi0[j]);
        let dplus = pu * v.dn_plus[j] + pv * u.dn_plus[j];
        let dminus = pu * v.dn_minus[j] + pv * u.dn_minus[j];
        let potential = ap * ap + am * am + (ap - am) * dm1 * u.k1[j];
        acc += (ap * dplus + am * dminus - potential * pu * pv) * u.weights[j];
    }
    acc
}

pub fn slope_simple(t: &TraceBundle, c: &Coupling) -> Result<Complex64> {
    t.validate()?;
    c.check_finite()?;
    Ok(correction_form(t, t, c) / t.norm_sq)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeMatrix {
    pub s: CMatrix,
    pub slopes: Vec<Complex64>,
}

/// Matrix of the correction form in a bilinearly orthonormalized basis of the
/// eigenspace, and its eigenvalues.
///
/// `gram[i][j] = ∫ψⁱψʲ`; when omitted the bundles are taken as mutually
/// orthogonal with self-pairings `norm_sq`.
pub fn slope_matrix(bundles: &[TraceBundle], c: &Coupling, gram: Option<&CMatrix>) -> Result<SlopeMatrix> {
    let k = bundles.len();
    if k == 0 {
        return Err(Error::Input("no bundles".into()));
    }
    for b in bundles {
        b.validate()?;
        check_aligned(&bundles[0], b)?;
    }
    let g = match gram {
        Some(g) => {
            if g.rows() != k || g.cols() != k {
                return Err(Error::Input("gram matrix has the wrong size".into()));
            }
            g.clone()
        }
        None => CMatrix::from_fn(k, k, |i, j| if i == j { bundles[i].norm_sq } else { Complex64::new(0.0, 0.0) }),
    };
    let raw = CMatrix::from_fn(k, k, |i, j| correction_form(&bundles[i], &bundles[j], c));
    let t = bilinear_orthonormalizer(&g)?;
    // S = Tᵀ · raw · T
    let s = t.transpose().matmul(&raw).matmul(&t);
    let slopes = eigenvalues_small(&s)?;
    Ok(SlopeMatrix { s, slopes })
}

/// Upper-triangular `T` with `TᵀGT = I`, by Gram–Schmidt in the bilinear
/// pairing given by the symmetric matrix `G`.
pub fn bilinear_orthonormalizer(g: &CMatrix) -> Result<CMatrix> {
    let k = g.rows();
    let scale = g.max_abs();
    let mut t = CMatrix::zeros(k, k);
    for j in 0..k {
        // start from e_j, remove components along previous basis vectors
        let mut col = vec![Complex64::new(0.0, 0.0); k];
        col[j] = Complex64::new(1.0, 0.0);
        for i in 0..j {
            let prev: Vec<Complex64> = (0..k).map(|r| t[(r, i)]).collect();
            let p = pair(g, &prev, &col);
            for r in 0..k {
                col[r] -= p * prev[r];
            }
        }
        let self_pair = pair(g, &col, &col);
        if self_pair.norm() <= PAIRING_FLOOR * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Normalization(format!(
                "bilinear self-pairing {self_pair} of basis vector {j} is numerically zero"
            )));
        }
        let inv = self_pair.sqrt().inv();
        for r in 0..k {
            t[(r, j)] = col[r] * inv;
        }
    }
    Ok(t)
}

fn pair(g: &CMatrix, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let gv = g.mul_vec(v);
    u.iter().zip(&gv).map(|(a, b)| a * b).sum()
}
