//! Two point interactions at `x = ±ε` on the line, solved exactly.
//!
//! The outer interaction `α₊` sits at `x = +ε`, the inner one `α₋` at
//! `x = −ε`. A bound state `e^{−κ|x|}`-like with `Re κ > 0` exists near
//! `κ₀ = −(α₊+α₋)/2` whenever `Re(α₊+α₋) < 0`.
//!
//! All integrals are evaluated in closed form: every function involved is a
//! finite sum of exponentials on each of the intervals cut by `−ε, 0, ε`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{Surface, TraceBundle};
use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::numerics::find_root_complex;

const SECULAR_TOL: f64 = 1e-12;
const BASIN_FACTOR: f64 = 0.1;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `κ₀ = −(α₊+α₋)/2`, requiring `Re(α₊+α₋) < 0`.
pub fn limit_kappa(c: &Coupling) -> Result<Complex64> {
    c.check_finite()?;
    let s = c.sum();
    if !(s.re < 0.0) {
        return Err(Error::NoBoundState(format!(
            "Re(α₊+α₋) = {} is not negative",
            s.re
        )));
    }
    Ok(-s / 2.0)
}

pub fn limit_eigenvalue(c: &Coupling) -> Result<Complex64> {
    let k = limit_kappa(c)?;
    Ok(-k * k)
}

pub fn secular_residual(kappa: Complex64, epsilon: f64, c: &Coupling) -> Complex64 {
    let (ap, am) = (c.alpha_plus, c.alpha_minus);
    (ap + kappa * 2.0) * (am + kappa * 2.0) - ap * am * (-kappa * 4.0 * epsilon).exp()
}

/// Largest ε for which the Newton seed is trusted: `ε·|α₊α₋| < 0.1·|κ₀|`.
pub fn max_epsilon(c: &Coupling) -> Result<f64> {
    let k0 = limit_kappa(c)?;
    let prod = (c.alpha_plus * c.alpha_minus).norm();
    Ok(if prod == 0.0 { f64::INFINITY } else { BASIN_FACTOR * k0.norm() / prod })
}

/// Seed `κ₀ − α₊α₋ε`; the sign makes `λ = −κ²` move by `−(α₊+α₋)α₊α₋ε`.
pub fn kappa_seed(epsilon: f64, c: &Coupling) -> Result<Complex64> {
    Ok(limit_kappa(c)? - c.alpha_plus * c.alpha_minus * epsilon)
}

/// `κ_ε` with `Re κ_ε > 0` on the branch through `κ₀`.
///
/// Inside the trusted basin Newton starts from [`kappa_seed`]. Beyond it the
/// branch is followed by continuation in ε from inside the basin, each step
/// seeded with the previous root.
pub fn solve_kappa(epsilon: f64, c: &Coupling) -> Result<Complex64> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::Input(format!("ε must be a non-negative number, got {epsilon}")));
    }
    let k0 = limit_kappa(c)?;
    if epsilon == 0.0 {
        return Ok(k0);
    }
    c.check_two_shell()?;
    let emax = max_epsilon(c)?;
    if epsilon < emax {
        return refine_kappa(epsilon, c, kappa_seed(epsilon, c)?, k0);
    }
    let steps = (epsilon / (0.5 * emax)).ceil() as usize;
    let mut eps_prev = 0.5 * emax;
    let mut k = refine_kappa(eps_prev, c, kappa_seed(eps_prev, c)?, k0)?;
    let mut k_prev = k0;
    let mut e_prevprev = 0.0;
    for j in 1..=steps {
        let e = 0.5 * emax + (epsilon - 0.5 * emax) * j as f64 / steps as f64;
        // linear extrapolation along the branch
        let seed = k + (k - k_prev) * ((e - eps_prev) / (eps_prev - e_prevprev));
        let next = refine_kappa(e, c, seed, k0)?;
        k_prev = k;
        k = next;
        e_prevprev = eps_prev;
        eps_prev = e;
    }
    Ok(k)
}

fn refine_kappa(epsilon: f64, c: &Coupling, seed: Complex64, k0: Complex64) -> Result<Complex64> {
    let f = |k: Complex64| Ok(secular_residual(k, epsilon, c));
    let spurious = |k: Complex64| k.norm() < 1e-6 * k0.norm() || k.re <= 0.0;
    let mut root = find_root_complex(f, seed, SECULAR_TOL * 0.1)?;
    if spurious(root.z) {
        root = find_root_complex(f, seed * 1.5, SECULAR_TOL * 0.1)?;
    }
    if spurious(root.z) {
        return Err(Error::NoBoundState(format!(
            "root finder returned κ = {} with non-positive real part",
            root.z
        )));
    }
    let res = secular_residual(root.z, epsilon, c).norm();
    if res > SECULAR_TOL {
        return Err(Error::NoConvergence {
            iterations: root.iterations,
            last: root.z,
            residual: res,
        });
    }
    Ok(root.z)
}

pub fn eigenvalue(epsilon: f64, c: &Coupling) -> Result<Complex64> {
    if epsilon == 0.0 {
        return limit_eigenvalue(c);
    }
    let k = solve_kappa(epsilon, c)?;
    Ok(-k * k)
}

/// `λ₀′ = −(α₊+α₋)α₊α₋`, cross-checked against the trace form
/// `α₊{ψ₀²}′(0⁺) − α₋{ψ₀²}′(0⁻) − (α₊²+α₋²)ψ₀²(0)`.
pub fn first_order_coefficient(c: &Coupling) -> Result<Complex64> {
    let direct = -c.sum() * c.alpha_plus * c.alpha_minus;
    let trace = trace_form_slope(c)?;
    if (direct - trace).norm() > 1e-10 * direct.norm().max(1.0) {
        return Err(Error::Consistency(format!(
            "slope forms disagree: {direct} vs {trace}"
        )));
    }
    Ok(direct)
}

pub fn trace_form_slope(c: &Coupling) -> Result<Complex64> {
    let psi = eigenfunction(0.0, c)?;
    let v = psi.value(0.0);
    let right = 2.0 * v * psi.derivative_right(0.0);
    let left = 2.0 * v * psi.derivative_left(0.0);
    let (ap, am) = (c.alpha_plus, c.alpha_minus);
    Ok(ap * right - am * left - (ap * ap + am * am) * v * v)
}

/// Traces of the limit eigenfunction at the origin, for the general slope
/// formula. The outward normal points along `+x`.
pub fn trace_bundle(c: &Coupling) -> Result<TraceBundle> {
    let psi = eigenfunction(0.0, c)?;
    let bundle = TraceBundle {
        surface: Surface::Point,
        d: 1,
        weights: vec![1.0],
        psi0: vec![psi.value(0.0)],
        dn_plus: vec![psi.derivative_right(0.0)],
        dn_minus: vec![-psi.derivative_left(0.0)],
        k1: vec![0.0],
        norm_sq: psi.integral_sq(),
    };
    bundle.validate()?;
    Ok(bundle)
}

// ---- sums of exponentials -------------------------------------------------

/// `Σ a_j e^{β_j x}` on one interval.
#[derive(Debug, Clone, Default)]
struct ExpSum(Vec<(Complex64, Complex64)>);

impl ExpSum {
    fn term(a: Complex64, beta: Complex64) -> Self {
        ExpSum(vec![(a, beta)])
    }

    fn derivative(&self) -> Self {
        ExpSum(self.0.iter().map(|(a, b)| (a * b, *b)).collect())
    }

    fn scale(&self, s: Complex64) -> Self {
        ExpSum(self.0.iter().map(|(a, b)| (a * s, *b)).collect())
    }

    fn add(&self, other: &Self) -> Self {
        ExpSum(self.0.iter().chain(&other.0).copied().collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for (a, b) in &self.0 {
            for (p, q) in &other.0 {
                out.push((a * p, b + q));
            }
        }
        ExpSum(out)
    }

    fn conj(&self) -> Self {
        ExpSum(self.0.iter().map(|(a, b)| (a.conj(), b.conj())).collect())
    }

    /// Exact integral over `[lo, hi]`; either end may be infinite provided
    /// every term decays there.
    fn integrate(&self, lo: f64, hi: f64) -> Result<Complex64> {
        let mut total = c0();
        for (a, b) in &self.0 {
            let v = if lo.is_infinite() && hi.is_infinite() {
                return Err(Error::Consistency("integral over the whole line".into()));
            } else if hi.is_infinite() {
                if !(b.re < 0.0) {
                    return Err(Error::Consistency("non-decaying term at +∞".into()));
                }
                -(b * lo).exp() / b
            } else if lo.is_infinite() {
                if !(b.re > 0.0) {
                    return Err(Error::Consistency("non-decaying term at −∞".into()));
                }
                (b * hi).exp() / b
            } else {
                let w = hi - lo;
                (b * lo).exp() * w * exprel(b * w)
            };
            total += a * v;
        }
        Ok(total)
    }
}

/// `(e^z − 1)/z`, accurate near `z = 0`.
fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..10 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// A function given by sums of exponentials on `(−∞,−ε), (−ε,0), (0,ε), (ε,∞)`.
#[derive(Debug, Clone)]
struct Piecewise {
    eps: f64,
    parts: [ExpSum; 4],
}

impl Piecewise {
    fn bounds(&self) -> [(f64, f64); 4] {
        let e = self.eps;
        [(f64::NEG_INFINITY, -e), (-e, 0.0), (0.0, e), (e, f64::INFINITY)]
    }

    fn map(&self, f: impl Fn(&ExpSum) -> ExpSum) -> Self {
        Piecewise {
            eps: self.eps,
            parts: [f(&self.parts[0]), f(&self.parts[1]), f(&self.parts[2]), f(&self.parts[3])],
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&ExpSum, &ExpSum) -> ExpSum) -> Self {
        Piecewise {
            eps: self.eps,
            parts: [
                f(&self.parts[0], &other.parts[0]),
                f(&self.parts[1], &other.parts[1]),
                f(&self.parts[2], &other.parts[2]),
                f(&self.parts[3], &other.parts[3]),
            ],
        }
    }

    fn integral(&self) -> Result<Complex64> {
        let mut total = c0();
        for (part, (lo, hi)) in self.parts.iter().zip(self.bounds()) {
            if hi > lo {
                total += part.integrate(lo, hi)?;
            }
        }
        Ok(total)
    }
}

// ---- eigenfunctions --------------------------------------------------------

/// Normalized eigenfunction `ψ = C·f` with
/// `f = e^{κx}` (x < −ε), `c₁e^{−κx} + c₂e^{κx}` (|x| < ε), `c₃e^{−κx}` (x > ε)
/// and `∫ψ² = 1` (bilinear).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseEigenfunction {
    pub kappa: Complex64,
    pub epsilon: f64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    /// `∫f²` before rescaling.
    pub normalization: Complex64,
    /// The factor `C = (∫f²)^{−1/2}` (principal branch).
    pub scale: Complex64,
}

impl PiecewiseEigenfunction {
    fn unscaled_value(&self, x: f64) -> Complex64 {
        let k = self.kappa;
        if x < -self.epsilon {
            (k * x).exp()
        } else if x <= self.epsilon {
            self.c1 * (-k * x).exp() + self.c2 * (k * x).exp()
        } else {
            self.c3 * (-k * x).exp()
        }
    }

    /// `ψ(x)`; at `x = ±ε` the middle formula is used (ψ is continuous).
    pub fn value(&self, x: f64) -> Complex64 {
        self.scale * self.unscaled_value(x)
    }

    /// `ψ′(x⁻)`.
    pub fn derivative_left(&self, x: f64) -> Complex64 {
        let k = self.kappa;
        let d = if x <= -self.epsilon {
            k * (k * x).exp()
        } else if x <= self.epsilon {
            k * (self.c2 * (k * x).exp() - self.c1 * (-k * x).exp())
        } else {
            -k * self.c3 * (-k * x).exp()
        };
        self.scale * d
    }

    /// `ψ′(x⁺)`.
    pub fn derivative_right(&self, x: f64) -> Complex64 {
        let k = self.kappa;
        let d = if x < -self.epsilon {
            k * (k * x).exp()
        } else if x < self.epsilon {
            k * (self.c2 * (k * x).exp() - self.c1 * (-k * x).exp())
        } else {
            -k * self.c3 * (-k * x).exp()
        };
        self.scale * d
    }

    /// Value from each side of `x`, evaluated with the formula of the
    /// neighbouring interval.
    pub fn one_sided_values(&self, x: f64) -> (Complex64, Complex64) {
        let k = self.kappa;
        let s = self.scale;
        let mid = s * (self.c1 * (-k * x).exp() + self.c2 * (k * x).exp());
        if x == -self.epsilon {
            (s * (k * x).exp(), mid)
        } else if x == self.epsilon {
            (mid, s * self.c3 * (-k * x).exp())
        } else {
            (self.value(x), self.value(x))
        }
    }

    fn piecewise(&self) -> Piecewise {
        let k = self.kappa;
        let s = self.scale;
        let middle = ExpSum::term(s * self.c1, -k).add(&ExpSum::term(s * self.c2, k));
        Piecewise {
            eps: self.epsilon,
            parts: [
                ExpSum::term(s, k),
                middle.clone(),
                middle,
                ExpSum::term(s * self.c3, -k),
            ],
        }
    }

    /// `∫ψ²`, equal to 1 up to rounding.
    pub fn integral_sq(&self) -> Complex64 {
        let p = self.piecewise();
        p.zip(&p, ExpSum::mul).integral().unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// Eigenfunction for `ε ≥ 0` with the constants
/// `c₁ = −(α₋/2κ)e^{−2κε}`, `c₂ = (α₋+2κ)/(2κ)`,
/// `c₃ = e^{2κε} + (α₋/2κ)(e^{2κε} − e^{−2κε})`.
pub fn eigenfunction(epsilon: f64, c: &Coupling) -> Result<PiecewiseEigenfunction> {
    let k = solve_kappa(epsilon, c)?;
    let am = c.alpha_minus;
    let e2 = (k * 2.0 * epsilon).exp();
    let em2 = (-k * 2.0 * epsilon).exp();
    let c1 = -am / (k * 2.0) * em2;
    let c2 = (am + k * 2.0) / (k * 2.0);
    let c3 = e2 + am / (k * 2.0) * (e2 - em2);
    let sinh_term = if epsilon == 0.0 {
        c0()
    } else {
        ((k * 2.0 * epsilon).sinh() / k) * (c1 * c1 + c2 * c2)
    };
    let norm = em2 / (k * 2.0) + c3 * c3 * em2 / (k * 2.0) + sinh_term + c1 * c2 * 4.0 * epsilon;
    // compare against the sesquilinear size to detect self-orthogonality
    let size = (1.0 + c3.norm_sqr()) * (-2.0 * k.re * epsilon).exp() / (2.0 * k.re);
    if !(norm.norm() > 1e-12 * size) {
        return Err(Error::Normalization(format!(
            "∫f² = {norm} vanishes; eigenfunction is self-orthogonal"
        )));
    }
    Ok(PiecewiseEigenfunction {
        kappa: k,
        epsilon,
        c1,
        c2,
        c3,
        normalization: norm,
        scale: norm.sqrt().inv(),
    })
}

/// The pieces of the second-order remainder in `λ_ε` exposed by the
/// projector decomposition `ψ₀ = (ψ_ε, ψ₀)ψ_ε + ω_ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrectionDecomposition {
    pub epsilon: f64,
    /// `α₊ψ₀(ε)² + α₋ψ₀(−ε)² − (α₊+α₋)ψ₀(0)²`.
    pub form_difference: Complex64,
    /// `∫ω′² + α₊ω(ε)² + α₋ω(−ε)²`.
    pub omega_energy: Complex64,
    /// `‖ω‖` in `L²`.
    pub projector_norm: f64,
    /// `(ψ_ε, ψ₀)`, bilinear.
    pub overlap: Complex64,
    /// `∫ω²`, bilinear.
    pub omega_sq: Complex64,
    /// `ψ₀(0)²`.
    pub psi0_origin_sq: Complex64,
    pub lambda0: Complex64,
    pub lambda: Complex64,
}

impl CorrectionDecomposition {
    /// `(λ₀ + form_difference − omega_energy)/(1 − ∫ω²)`, which equals `λ_ε`
    /// exactly.
    pub fn reconstructed_eigenvalue(&self) -> Complex64 {
        (self.lambda0 + self.form_difference - self.omega_energy) / (1.0 - self.omega_sq)
    }
}

fn align(psi_eps: &PiecewiseEigenfunction, psi0: &PiecewiseEigenfunction) -> PiecewiseEigenfunction {
    // ±ψ_ε are both normalized; keep the one closer to ψ₀ near the origin
    let mut out = *psi_eps;
    if (psi_eps.value(0.0) - psi0.value(0.0)).norm() > (psi_eps.value(0.0) + psi0.value(0.0)).norm() {
        out.scale = -out.scale;
    }
    out
}

pub fn correction_decomposition(epsilon: f64, c: &Coupling) -> Result<CorrectionDecomposition> {
    if !(epsilon > 0.0) {
        return Err(Error::Input(format!("ε must be positive, got {epsilon}")));
    }
    let psi0 = eigenfunction(0.0, c)?;
    let psi_e = align(&eigenfunction(epsilon, c)?, &psi0);
    let (ap, am) = (c.alpha_plus, c.alpha_minus);

    let k0 = psi0.kappa;
    let s0 = psi0.scale;
    let p0 = Piecewise {
        eps: epsilon,
        parts: [
            ExpSum::term(s0, k0),
            ExpSum::term(s0, k0),
            ExpSum::term(s0, -k0),
            ExpSum::term(s0, -k0),
        ],
    };
    let pe = psi_e.piecewise();
    let overlap = pe.zip(&p0, ExpSum::mul).integral()?;
    let omega = p0.zip(&pe, |a, b| a.add(&b.scale(-overlap)));
    let domega = omega.map(ExpSum::derivative);
    let omega_at = |x: f64| psi0.value(x) - overlap * psi_e.value(x);

    let omega_sq = omega.zip(&omega, ExpSum::mul).integral()?;
    let omega_l2 = omega.zip(&omega, |a, b| a.mul(&b.conj())).integral()?;
    let kinetic = domega.zip(&domega, ExpSum::mul).integral()?;
    let omega_energy = kinetic + ap * omega_at(epsilon).powu(2) + am * omega_at(-epsilon).powu(2);
    let v0 = psi0.value(0.0);
    let form_difference =
        ap * psi0.value(epsilon).powu(2) + am * psi0.value(-epsilon).powu(2) - (ap + am) * v0 * v0;

    Ok(CorrectionDecomposition {
        epsilon,
        form_difference,
        omega_energy,
        projector_norm: omega_l2.re.max(0.0).sqrt(),
        overlap,
        omega_sq,
        psi0_origin_sq: v0 * v0,
        lambda0: limit_eigenvalue(c)?,
        lambda: eigenvalue(epsilon, c)?,
    })
}

/// `max |ψ_ε(±ε) − ψ₀(±ε)|` with the sign of `ψ_ε` matched to `ψ₀`.
pub fn uniform_difference(epsilon: f64, c: &Coupling) -> Result<f64> {
    let psi0 = eigenfunction(0.0, c)?;
    if epsilon == 0.0 {
        return Ok(0.0);
    }
    let psi_e = align(&eigenfunction(epsilon, c)?, &psi0);
    Ok([epsilon, -epsilon]
        .iter()
        .map(|&x| (psi_e.value(x) - psi0.value(x)).norm())
        .fold(0.0, f64::max))
}
