//! Radially symmetric shells: concentric circles (d = 2) and spheres (d = 3).
//!
//! In each angular sector the eigenfunction is `u(r)·Y(angle)` with
//! `u(r) = r^{−p} Z_ν(κr)`, `p = (d−2)/2`, `ν = m + p` and `Z` a combination
//! of `I_ν` (inside) and `K_ν` (outside). At a shell of radius ρ with
//! coupling α the profile is continuous and `κ(Z′(ρ⁺) − Z′(ρ⁻)) = αZ(ρ)`.
//!
//! The unknowns are scaled by the Bessel functions at their own shell,
//! `a = A·I(κr₁)`, `b = B·I(κr₂)`, `c = C·K(κr₁)`, `d = D·K(κr₂)`, so that
//! every matrix entry is a ratio of order one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{slope_matrix, slope_simple, Surface, TraceBundle};
use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::numerics::linalg::{largest_singular, CMatrix};
use crate::numerics::quad::{gauss_legendre, integrate};
use crate::numerics::{bessel_ik, find_root_complex, smallest_singular, BesselIK};

/// Largest admissible `ε/R`.
pub const MAX_RELATIVE_EPSILON: f64 = 0.9;
/// Null vectors are accepted when `σ_min/σ_max` is below this.
pub const NULL_RATIO_TOL: f64 = 1e-8;
const ROOT_TOL: f64 = 1e-14;
/// Length of the exterior integration range in units of `1/Re κ`.
const TAIL_DECAY_LENGTHS: f64 = 40.0;
const DEFAULT_TRACE_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub d: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub epsilon: f64,
    #[serde(flatten)]
    pub coupling: Coupling,
    /// Angular quantum number: `m` for circles, `ℓ` for spheres.
    #[serde(default)]
    pub m: u32,
}

impl RadialProblem {
    pub fn new(d: usize, r: f64, epsilon: f64, coupling: Coupling, m: u32) -> Result<Self> {
        let p = Self {
            d,
            r,
            epsilon,
            coupling,
            m,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d == 2 || self.d == 3) {
            return Err(Error::Input(format!("radial problems need d = 2 or 3, got {}", self.d)));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(Error::Input(format!("radius must be positive, got {}", self.r)));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::Input(format!("ε must be non-negative, got {}", self.epsilon)));
        }
        if self.epsilon >= MAX_RELATIVE_EPSILON * self.r {
            return Err(Error::Geometry(format!(
                "ε = {} exceeds {MAX_RELATIVE_EPSILON}·R = {}",
                self.epsilon,
                MAX_RELATIVE_EPSILON * self.r
            )));
        }
        self.coupling.check_finite()?;
        if self.epsilon > 0.0 {
            self.coupling.check_two_shell()?;
        }
        Ok(())
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.d, self.r, epsilon, self.coupling, self.m)
    }

    fn p(&self) -> f64 {
        (self.d as f64 - 2.0) / 2.0
    }

    fn order(&self) -> f64 {
        self.m as f64 + self.p()
    }

    /// Inner and outer shell radii.
    pub fn shells(&self) -> (f64, f64) {
        (self.r - self.epsilon, self.r + self.epsilon)
    }

    /// `−(α₊+α₋)/2`, the large-radius limit of the decay rate.
    pub fn default_seed(&self) -> Complex64 {
        -self.coupling.sum() / 2.0
    }

    pub fn angular_modes(&self) -> Vec<AngularMode> {
        match (self.d, self.m) {
            (3, l) => vec![AngularMode::Legendre(l)],
            (_, 0) => vec![AngularMode::Cos(0)],
            (_, m) => vec![AngularMode::Cos(m), AngularMode::Sin(m)],
        }
    }
}

/// Angular factor of a separated eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngularMode {
    Cos(u32),
    Sin(u32),
    /// Axisymmetric `P_ℓ(cos θ)` on the sphere.
    Legendre(u32),
}

impl AngularMode {
    /// `∫ Y² dΩ` over the unit circle or sphere.
    pub fn norm_sq(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            AngularMode::Cos(0) => 2.0 * PI,
            AngularMode::Cos(_) | AngularMode::Sin(_) => PI,
            AngularMode::Legendre(l) => 4.0 * PI / (2 * l + 1) as f64,
        }
    }

    /// `Y` at the angular coordinate: θ for circles, `cos θ` for spheres.
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            AngularMode::Cos(m) => (m as f64 * s).cos(),
            AngularMode::Sin(m) => (m as f64 * s).sin(),
            AngularMode::Legendre(l) => legendre(l, s),
        }
    }
}

fn legendre(l: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return 1.0;
    }
    for k in 2..=l {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn ik(p: &RadialProblem, z: Complex64) -> Result<BesselIK> {
    bessel_ik(p.order(), z)
}

fn check_kappa(kappa: Complex64) -> Result<()> {
    if !(kappa.re > 0.0) || !kappa.im.is_finite() {
        return Err(Error::Domain(format!("decay rate κ = {kappa} must have positive real part")));
    }
    Ok(())
}

/// Matching matrix in the scaled unknowns: 2×2 `(a, d)` at `ε = 0`, 4×4
/// `(a, b, c, d)` otherwise.
pub fn secular_matrix(kappa: Complex64, p: &RadialProblem) -> Result<CMatrix> {
    check_kappa(kappa)?;
    let (ap, am) = (p.coupling.alpha_plus, p.coupling.alpha_minus);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if p.epsilon == 0.0 {
        let b = ik(p, kappa * p.r)?;
        return Ok(CMatrix::from_rows(&[
            vec![one, -one],
            vec![-b.di / b.i - p.coupling.sum() / kappa, b.dk / b.k],
        ]));
    }
    let (r1, r2) = p.shells();
    let x = ik(p, kappa * r1)?;
    let y = ik(p, kappa * r2)?;
    Ok(CMatrix::from_rows(&[
        vec![one, -x.i / y.i, -one, zero],
        vec![-x.di / x.i - am / kappa, x.di / y.i, x.dk / x.k, zero],
        vec![zero, one, y.k / x.k, -one],
        vec![zero, -y.di / y.i, -y.dk / x.k, y.dk / y.k - ap / kappa],
    ]))
}

/// Determinant of [`secular_matrix`]. At `ε = 0` this is
/// `K′/K − I′/I − α/κ = −(1 + αR·I_ν(κR)K_ν(κR)) / (κR·I_ν K_ν)`.
pub fn secular_det(kappa: Complex64, p: &RadialProblem) -> Result<Complex64> {
    let m = secular_matrix(kappa, p)?;
    if m.rows() == 2 {
        return Ok(m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]);
    }
    Ok(crate::numerics::linalg::Lu::new(&m)?.determinant())
}

/// A bound state of one angular sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialEigenData {
    pub problem: RadialProblem,
    pub mode: AngularMode,
    pub kappa: Complex64,
    pub lambda: Complex64,
    /// `A, B, C, D` multiplying `r^{−p}I_ν(κr)` (inside), `r^{−p}I_ν, r^{−p}K_ν`
    /// (between the shells) and `r^{−p}K_ν` (outside). At `ε = 0` only `A`
    /// and `D` are nonzero.
    pub coefficients: [Complex64; 4],
    /// Profile value at `r = R`.
    pub trace_psi0: Complex64,
    /// Outward derivative from outside at `R` (from the annulus when `ε > 0`).
    pub trace_dn_plus: Complex64,
    /// Inward derivative from inside at `R` (from the annulus when `ε > 0`).
    pub trace_dn_minus: Complex64,
    /// `∫u²Y²` over the whole space.
    pub norm_sq: Complex64,
    /// `σ_min/σ_max` of the matching matrix at κ.
    pub null_ratio: f64,
    pub det_residual: f64,
}

enum Side {
    Left,
    Right,
}

impl RadialEigenData {
    fn piece(&self, r: f64, side: Side) -> (Complex64, Complex64) {
        let (r1, r2) = self.problem.shells();
        let [a, b, c, d] = self.coefficients;
        let zero = Complex64::new(0.0, 0.0);
        let inside = match side {
            Side::Left => r <= r1,
            Side::Right => r < r1,
        };
        let outside = match side {
            Side::Left => r > r2,
            Side::Right => r >= r2,
        };
        if inside {
            (a, zero)
        } else if outside {
            (zero, d)
        } else {
            (b, c)
        }
    }

    fn eval(&self, r: f64, side: Side) -> Result<(Complex64, Complex64)> {
        let p = &self.problem;
        let (ci, ck) = self.piece(r, side);
        let z = self.kappa * r;
        let bz = ik(p, z)?;
        let zv = ci * bz.i + ck * bz.k;
        let dz = ci * bz.di + ck * bz.dk;
        let pw = r.powf(-p.p());
        Ok((pw * zv, pw * (self.kappa * dz - zv * (p.p() / r))))
    }

    /// `u(r)`; continuous, so either side gives the same value at the shells.
    pub fn profile(&self, r: f64) -> Result<Complex64> {
        Ok(self.eval(r, Side::Left)?.0)
    }

    /// `u′(r⁻)`.
    pub fn derivative_left(&self, r: f64) -> Result<Complex64> {
        Ok(self.eval(r, Side::Left)?.1)
    }

    /// `u′(r⁺)`.
    pub fn derivative_right(&self, r: f64) -> Result<Complex64> {
        Ok(self.eval(r, Side::Right)?.1)
    }

    /// Largest violation of continuity and of the jump condition over the
    /// shells, relative to `max(|u|, |u′|)` there.
    pub fn interface_residual(&self) -> Result<f64> {
        let p = &self.problem;
        let (r1, r2) = p.shells();
        let shells: Vec<(f64, Complex64)> = if p.epsilon == 0.0 {
            vec![(p.r, p.coupling.sum())]
        } else {
            vec![(r1, p.coupling.alpha_minus), (r2, p.coupling.alpha_plus)]
        };
        let mut worst: f64 = 0.0;
        for (rho, alpha) in shells {
            let (ul, dl) = self.eval(rho, Side::Left)?;
            let (ur, dr) = self.eval(rho, Side::Right)?;
            let scale = ul.norm().max(dl.norm()).max(dr.norm());
            worst = worst.max((ul - ur).norm() / scale);
            worst = worst.max((dr - dl - alpha * ul).norm() / scale);
        }
        Ok(worst)
    }

    /// Traces of `u·Y` on the sphere of radius `R` sampled on `nodes` angular
    /// points: uniform in θ for circles, Gauss–Legendre in `cos θ` for spheres.
    pub fn trace_bundle(&self, nodes: usize) -> Result<TraceBundle> {
        use std::f64::consts::PI;
        let p = &self.problem;
        if nodes < 2 * p.m as usize + 2 {
            return Err(Error::Input(format!(
                "{nodes} angular nodes cannot resolve angular order {}",
                p.m
            )));
        }
        let (s, weights): (Vec<f64>, Vec<f64>) = if p.d == 2 {
            let h = 2.0 * PI / nodes as f64;
            ((0..nodes).map(|j| j as f64 * h).collect(), vec![p.r * h; nodes])
        } else {
            let (x, w) = gauss_legendre(nodes);
            (x, w.iter().map(|wi| 2.0 * PI * p.r * p.r * wi).collect())
        };
        let y: Vec<f64> = s.iter().map(|&t| self.mode.value(t)).collect();
        let scaled = |v: Complex64| y.iter().map(|&yj| v * yj).collect::<Vec<_>>();
        let bundle = TraceBundle {
            surface: Surface::Sphere { r: p.r, d: p.d },
            d: p.d,
            weights,
            psi0: scaled(self.trace_psi0),
            dn_plus: scaled(self.trace_dn_plus),
            dn_minus: scaled(self.trace_dn_minus),
            k1: vec![-1.0 / p.r; nodes],
            norm_sq: self.norm_sq,
        };
        bundle.validate()?;
        Ok(bundle)
    }

    fn with_mode(&self, mode: AngularMode) -> Self {
        let scale = mode.norm_sq() / self.mode.norm_sq();
        Self {
            mode,
            norm_sq: self.norm_sq * scale,
            ..self.clone()
        }
    }
}

/// Solve for the bound state of the problem's angular sector near `seed`
/// (defaulting to [`RadialProblem::default_seed`] at `ε = 0`, and to the
/// `ε = 0` decay rate otherwise).
pub fn solve_eigenvalue(p: &RadialProblem, seed: Option<Complex64>) -> Result<RadialEigenData> {
    p.validate()?;
    let seed = match seed {
        Some(s) => s,
        None if p.epsilon == 0.0 => p.default_seed(),
        None => solve_eigenvalue(&p.with_epsilon(0.0)?, None)?.kappa,
    };
    if !(seed.re > 0.0) {
        return Err(Error::NoBoundState(format!(
            "seed κ = {seed} has non-positive real part; α₊+α₋ = {} is not attractive",
            p.coupling.sum()
        )));
    }
    // the determinant is only defined for Re κ > 0; treat the half-plane edge as a wall
    let f = |k: Complex64| {
        if k.re <= 0.0 {
            Ok(Complex64::new(1e300, 0.0))
        } else {
            secular_det(k, p)
        }
    };
    let root = find_root_complex(f, seed, ROOT_TOL)?;
    let kappa = root.z;
    if !(kappa.re > 0.0) {
        return Err(Error::NoBoundState(format!("root κ = {kappa} is not a decay rate")));
    }
    let det_residual = secular_det(kappa, p)?.norm();
    assemble(p, kappa, det_residual)
}

fn assemble(p: &RadialProblem, kappa: Complex64, det_residual: f64) -> Result<RadialEigenData> {
    let m = secular_matrix(kappa, p)?;
    let null = smallest_singular(&m)?;
    let smax = largest_singular(&m);
    let null_ratio = null.sigma / smax;
    if null_ratio > NULL_RATIO_TOL {
        return Err(Error::Certification(format!(
            "matching matrix at κ = {kappa} is not singular: σ_min/σ_max = {null_ratio:e}"
        )));
    }
    let v = null.vector;
    // fix the scale by the outer coefficient
    let outer = *v.last().unwrap();
    let vmax = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let pivot = if outer.norm() > 1e-8 * vmax {
        outer
    } else {
        *v.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap()
    };
    let v: Vec<Complex64> = v.iter().map(|x| x / pivot).collect();
    let zero = Complex64::new(0.0, 0.0);
    let (r1, r2) = p.shells();
    let coefficients = if p.epsilon == 0.0 {
        let b = ik(p, kappa * p.r)?;
        [v[0] / b.i, zero, zero, v[1] / b.k]
    } else {
        let x = ik(p, kappa * r1)?;
        let y = ik(p, kappa * r2)?;
        [v[0] / x.i, v[1] / y.i, v[2] / x.k, v[3] / y.k]
    };
    let mode = p.angular_modes()[0];
    let mut data = RadialEigenData {
        problem: *p,
        mode,
        kappa,
        lambda: -kappa * kappa,
        coefficients,
        trace_psi0: zero,
        trace_dn_plus: zero,
        trace_dn_minus: zero,
        norm_sq: zero,
        null_ratio,
        det_residual,
    };
    let (u, _) = data.eval(p.r, Side::Left)?;
    data.trace_psi0 = u;
    data.trace_dn_plus = data.derivative_right(p.r)?;
    data.trace_dn_minus = -data.derivative_left(p.r)?;
    data.norm_sq = radial_norm_sq(&data)? * mode.norm_sq();
    Ok(data)
}

/// `∫₀^∞ u(r)² r^{d−1} dr`, bilinear.
fn radial_norm_sq(e: &RadialEigenData) -> Result<Complex64> {
    let p = &e.problem;
    let (r1, r2) = p.shells();
    let tail = r2 + TAIL_DECAY_LENGTHS / e.kappa.re;
    let dm1 = (p.d - 1) as i32;
    let integrand = |r: f64| -> Result<Complex64> {
        if r == 0.0 {
            // u is bounded at the origin and r^{d−1} vanishes
            return Ok(Complex64::new(0.0, 0.0));
        }
        let u = e.profile(r)?;
        Ok(u * u * r.powi(dm1))
    };
    let mut breaks = vec![0.0, r1];
    if r2 > r1 {
        breaks.push(r2);
    }
    breaks.push(tail);
    let mut total = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        total += integrate(integrand, w[0], w[1], 1e-16, 1e-13)?;
    }
    if !(total.norm() > 0.0) {
        return Err(Error::Normalization("∫u²r^{d−1} vanishes".into()));
    }
    Ok(total)
}

/// First-order coefficient `λ₀′` from the traces of the `ε = 0` eigenfunction.
pub fn predicted_slope(p: &RadialProblem, seed: Option<Complex64>) -> Result<Complex64> {
    let e = solve_eigenvalue(&p.with_epsilon(0.0)?, seed)?;
    slope_simple(&e.trace_bundle(DEFAULT_TRACE_NODES.max(2 * p.m as usize + 2))?, &p.coupling)
}

/// The `cos mθ`, `sin mθ` pair of a degenerate circular eigenvalue (`d = 2`,
/// `m ≥ 1`).
pub fn degenerate_pair(p: &RadialProblem, seed: Option<Complex64>) -> Result<(RadialEigenData, RadialEigenData)> {
    if p.d != 2 || p.m == 0 {
        return Err(Error::Input("degenerate pairs need d = 2 and m ≥ 1".into()));
    }
    let base = solve_eigenvalue(p, seed)?;
    Ok((base.with_mode(AngularMode::Cos(p.m)), base.with_mode(AngularMode::Sin(p.m))))
}

/// Slopes of the degenerate pair from the slope matrix; both equal the simple
/// slope by rotational symmetry.
pub fn degenerate_slopes(p: &RadialProblem, seed: Option<Complex64>) -> Result<Vec<Complex64>> {
    let (c, s) = degenerate_pair(&p.with_epsilon(0.0)?, seed)?;
    let nodes = DEFAULT_TRACE_NODES.max(2 * p.m as usize + 2);
    let m = slope_matrix(&[c.trace_bundle(nodes)?, s.trace_bundle(nodes)?], &p.coupling, None)?;
    Ok(m.slopes)
}

/// `sup_{Σ±ε} |ψ_ε − ψ₀|` for the bilinearly normalized eigenfunctions of
/// the problem's angular sector, with the sign of `ψ_ε` matched to `ψ₀`.
/// The angular factor has supremum 1, so only the profiles enter.
pub fn uniform_difference(p: &RadialProblem, seed: Option<Complex64>) -> Result<f64> {
    if p.epsilon == 0.0 {
        return Ok(0.0);
    }
    let e0 = solve_eigenvalue(&p.with_epsilon(0.0)?, seed)?;
    let ee = solve_eigenvalue(p, Some(e0.kappa))?;
    let (s0, se) = (e0.norm_sq.sqrt().inv(), ee.norm_sq.sqrt().inv());
    let sign = if (ee.trace_psi0 * se - e0.trace_psi0 * s0).norm() <= (ee.trace_psi0 * se + e0.trace_psi0 * s0).norm() {
        1.0
    } else {
        -1.0
    };
    let (r1, r2) = p.shells();
    let mut worst: f64 = 0.0;
    for r in [r1, r2] {
        worst = worst.max((ee.profile(r)? * se * sign - e0.profile(r)? * s0).norm());
    }
    Ok(worst)
}
