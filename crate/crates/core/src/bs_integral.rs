//! Boundary-integral (Birman–Schwinger) solver for two parallel closed curves
//! in the plane.
//!
//! `λ = −κ²` is an eigenvalue iff `I + S(κ)·α` has a kernel, where `S` is the
//! single layer with kernel `G = K₀(κ|x−y|)/2π` on the union of the shells and
//! `α` multiplies by the coupling of the source shell. A kernel vector is the
//! trace `u` of the eigenfunction, which is recovered as `ψ = SL[φ]` with the
//! density `φ = −αu`.
//!
//! Self-interactions use the Kress splitting of the logarithmic singularity.
//! Between the shells the kernel is analytic but nearly singular when `ε` is
//! small, so the `log r²` part is integrated exactly against the trigonometric
//! interpolant (product integration) with weights from a finely sampled FFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::asymptotics::TraceBundle;
use crate::coupling::Coupling;
use crate::error::{Error, Result};
use crate::geometry::{parallel_offset, ClosedCurve, CurveKind, CurvePoint, OffsetCurve, ParamCurve};
use crate::numerics::linalg::{largest_singular, smallest_singular_subspace, CMatrix, Lu};
use crate::numerics::{find_root_complex, ik01};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const MIN_NODES: usize = 32;
/// Kernel points are accepted when `σ_min/σ_max` is below this.
pub const NULL_RATIO_TOL: f64 = 1e-7;
/// Accepted violation of the jump condition relative to `max|ψ₀|`.
pub const JUMP_TOL: f64 = 1e-7;
const ROOT_TOL: f64 = 1e-13;
/// Fourier coefficients of `log r²` between the shells decay like `e^{−η|q|}`;
/// sampling resolves them down to `e^{−LOG_DECAY}`.
const LOG_DECAY: f64 = 37.0;

/// Samples of one shell on the uniform parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub t: f64,
    pub points: Vec<CurvePoint>,
}

/// Nyström discretization of `Σ₀` (ε = 0) or of `Σ₊ε, Σ₋ε` (in that order).
#[derive(Debug, Clone, PartialEq)]
pub struct NystromGrid {
    pub n: usize,
    pub shells: Vec<Shell>,
    /// `R_k` of the Kress log-quadrature for node distance `k`.
    kress: Vec<f64>,
    /// Product-integration weights for `log r²`: `[target→source]` for
    /// `(+, −)` and `(−, +)`.
    cross_log: Option<[Vec<f64>; 2]>,
}

fn kress_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            let s: f64 = (1..half).map(|m| (m as f64 * t).cos() / m as f64).sum();
            -2.0 * PI / half as f64 * s - PI / (half * half) as f64 * (half as f64 * t).cos()
        })
        .collect()
}

fn log_four_sin_sq(i: usize, j: usize, n: usize) -> f64 {
    let dt = PI * (i as f64 - j as f64) / n as f64;
    (4.0 * dt.sin().powi(2)).ln()
}

fn dist_sq(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// `W[i·n + j] = ∫₀^{2π} log|x_i − y(τ)|² L_j(τ) dτ` with `L_j` the
/// trigonometric Lagrange basis of the uniform grid.
fn product_log_weights(target: &Shell, source: &OffsetCurve, n: usize, gap: f64) -> Vec<f64> {
    let vmax = (0..4 * n)
        .map(|k| source.at(2.0 * PI * k as f64 / (4 * n) as f64).speed)
        .fold(0.0, f64::max);
    let eta = gap / vmax;
    let fine = ((n / 2) as f64 + LOG_DECAY / eta).ceil() as usize;
    let m = fine.next_power_of_two().max(4 * n);
    let ys: Vec<[f64; 2]> = (0..m)
        .map(|k| source.at(2.0 * PI * k as f64 / m as f64).x)
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let fft_m = planner.plan_fft_forward(m);
    let fft_n = planner.plan_fft_forward(n);
    let half = n / 2;
    let mut w = vec![0.0; n * n];
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for (i, p) in target.points.iter().enumerate() {
        for (b, y) in buf.iter_mut().zip(&ys) {
            *b = Complex64::new(dist_sq(p.x, *y).ln(), 0.0);
        }
        fft_m.process(&mut buf);
        // c_k = buf[k mod m]/m; slot q of D holds c_{−q} for the signed
        // frequency q ∈ (−n/2, n/2), the Nyquist term split evenly
        for (slot, dq) in d.iter_mut().enumerate() {
            *dq = if slot == half {
                0.5 * (buf[half] + buf[m - half]) / m as f64
            } else if slot < half {
                buf[(m - slot) % m] / m as f64
            } else {
                buf[n - slot] / m as f64
            };
        }
        fft_n.process(&mut d);
        for j in 0..n {
            w[i * n + j] = 2.0 * PI / n as f64 * d[j].re;
        }
    }
    w
}

impl NystromGrid {
    pub fn new(curve: &CurveKind, epsilon: f64, n: usize) -> Result<Self> {
        if n < MIN_NODES || n % 2 != 0 {
            return Err(Error::Input(format!("need an even number of nodes ≥ {MIN_NODES}, got {n}")));
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::Input(format!("ε must be non-negative, got {epsilon}")));
        }
        let base = ClosedCurve::new(curve.clone(), n)?;
        let kress = kress_weights(n);
        if epsilon == 0.0 {
            return Ok(Self {
                n,
                shells: vec![Shell {
                    t: 0.0,
                    points: base.points().to_vec(),
                }],
                kress,
                cross_log: None,
            });
        }
        let mut shells = Vec::with_capacity(2);
        let mut offsets = Vec::with_capacity(2);
        for t in [epsilon, -epsilon] {
            let off = parallel_offset(&base, t)?.curve;
            shells.push(Shell {
                t,
                points: base.nodes().iter().map(|&th| off.at(th)).collect(),
            });
            offsets.push(off);
        }
        let gap = 2.0 * epsilon;
        let cross_log = [
            product_log_weights(&shells[0], &offsets[1], n, gap),
            product_log_weights(&shells[1], &offsets[0], n, gap),
        ];
        Ok(Self {
            n,
            shells,
            kress,
            cross_log: Some(cross_log),
        })
    }

    fn size(&self) -> usize {
        self.n * self.shells.len()
    }

    /// Single layer from shell `s` to itself, scaled by `scale`. The kernel
    /// is symmetric in the nodes, so each Bessel pair serves two entries.
    fn self_single(&self, kappa: Complex64, s: usize, out: &mut CMatrix, scale: Complex64) -> Result<()> {
        let n = self.n;
        let off = s * n;
        let pts = &self.shells[s].points;
        let h = 2.0 * PI / n as f64;
        for i in 0..n {
            let sp = pts[i].speed;
            let m1 = Complex64::new(-sp / (4.0 * PI), 0.0);
            let m2 = sp / (2.0 * PI) * (-(kappa * sp / 2.0).ln() - EULER_GAMMA);
            out[(off + i, off + i)] += (m1 * self.kress[0] + m2 * h) * scale;
            for j in i + 1..n {
                let r = dist_sq(pts[i].x, pts[j].x).sqrt();
                let b = ik01(kappa * r)?;
                let lg = log_four_sin_sq(i, j, n);
                let rk = self.kress[j - i];
                for (row, col, sp) in [(i, j, pts[j].speed), (j, i, pts[i].speed)] {
                    let m1 = -b.i0 * sp / (4.0 * PI);
                    let m2 = b.k0 * sp / (2.0 * PI) - m1 * lg;
                    out[(off + row, off + col)] += (m1 * rk + m2 * h) * scale;
                }
            }
        }
        Ok(())
    }

    /// Both blocks between the shells; entry `(+i, −j)` and `(−j, +i)` share
    /// the distance `|x⁺_i − x⁻_j|`.
    fn cross_single(&self, kappa: Complex64, out: &mut CMatrix, c: &Coupling) -> Result<()> {
        let n = self.n;
        let [w_pm, w_mp] = self.cross_log.as_ref().expect("cross weights exist for ε > 0");
        let (plus, minus) = (&self.shells[0].points, &self.shells[1].points);
        for i in 0..n {
            for j in 0..n {
                let r2 = dist_sq(plus[i].x, minus[j].x);
                let b = ik01(kappa * r2.sqrt())?;
                let smooth = b.k0 + b.i0 * (0.5 * r2.ln());
                let log_part = -b.i0 / (4.0 * PI);
                let pm = log_part * w_pm[i * n + j] + smooth / n as f64;
                out[(i, n + j)] += pm * minus[j].speed * c.alpha_minus;
                let mp = log_part * w_mp[j * n + i] + smooth / n as f64;
                out[(n + j, i)] += mp * plus[i].speed * c.alpha_plus;
            }
        }
        Ok(())
    }

    /// `I + S(κ)·α`.
    pub fn block_operator(&self, kappa: Complex64, c: &Coupling) -> Result<CMatrix> {
        if !(kappa.re > 0.0) {
            return Err(Error::Domain(format!("κ = {kappa} must have positive real part")));
        }
        let mut a = CMatrix::identity(self.size());
        if self.shells.len() == 1 {
            self.self_single(kappa, 0, &mut a, c.sum())?;
        } else {
            self.self_single(kappa, 0, &mut a, c.alpha_plus)?;
            self.self_single(kappa, 1, &mut a, c.alpha_minus)?;
            self.cross_single(kappa, &mut a, c)?;
        }
        Ok(a)
    }

    /// Adjoint double layer `K′φ(x_i) = ∫∂_{ν_x}G(x_i, y)φ(y)ds_y` on `Σ₀`.
    fn adjoint_double_layer(&self, kappa: Complex64) -> Result<CMatrix> {
        let n = self.n;
        let pts = &self.shells[0].points;
        let h = 2.0 * PI / n as f64;
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (l1, l2) = if i == j {
                    (Complex64::new(0.0, 0.0), Complex64::new(pts[i].kappa * pts[i].speed / (4.0 * PI), 0.0))
                } else {
                    let dx = [pts[i].x[0] - pts[j].x[0], pts[i].x[1] - pts[j].x[1]];
                    let r2 = dx[0] * dx[0] + dx[1] * dx[1];
                    let g = (dx[0] * pts[i].normal[0] + dx[1] * pts[i].normal[1]) / r2;
                    let z = kappa * r2.sqrt();
                    let b = ik01(z)?;
                    let sp = pts[j].speed;
                    let l = -z * b.k1 * g * sp / (2.0 * PI);
                    let l1 = -z * b.i1 * g * sp / (4.0 * PI);
                    (l1, l - l1 * log_four_sin_sq(i, j, n))
                };
                out[(i, j)] = l1 * self.kress[(i + n - j) % n] + l2 * h;
            }
        }
        Ok(out)
    }

    /// Kernel `∫_{R²}G(z−x)G(z−y)dz = |x−y|K₁(κ|x−y|)/(4πκ)` on `Σ₀`, which
    /// turns `∫ψ²` into a double boundary integral of the densities.
    fn norm_kernel(&self, kappa: Complex64) -> Result<CMatrix> {
        let n = self.n;
        let pts = &self.shells[0].points;
        let h = 2.0 * PI / n as f64;
        let pre = (4.0 * PI * kappa * kappa).inv();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let (f1, f2) = if i == j {
                    (Complex64::new(0.0, 0.0), pre * pts[i].speed)
                } else {
                    let z = kappa * dist_sq(pts[i].x, pts[j].x).sqrt();
                    let b = ik01(z)?;
                    let sp = pts[j].speed;
                    let f1 = pre * 0.5 * z * b.i1 * sp;
                    (f1, pre * z * b.k1 * sp - f1 * log_four_sin_sq(i, j, n))
                };
                out[(i, j)] = f1 * self.kress[(i + n - j) % n] + f2 * h;
            }
        }
        Ok(out)
    }
}

/// A discretized two-shell problem with its quadrature weights cached.
#[derive(Debug, Clone)]
pub struct BsProblem {
    pub curve: CurveKind,
    pub epsilon: f64,
    pub coupling: Coupling,
    pub grid: NystromGrid,
}

/// A certified kernel point of the block operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsEigenvalue {
    pub kappa: Complex64,
    pub lambda: Complex64,
    /// `σ_k/σ_max` for the `k`-dimensional kernel.
    pub null_ratio: f64,
    pub det_residual: f64,
    pub multiplicity: usize,
}

/// Limit-eigenfunction traces on `Σ₀`, one bundle per kernel vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BsTraces {
    pub bundles: Vec<TraceBundle>,
    /// `gram[k][l] = ∫ψᵏψˡ` over the plane.
    pub gram: CMatrix,
    /// Largest `|∂ₙ⁺ψ + ∂ₙ⁻ψ − (α₊+α₋)ψ|/max|ψ|` with `ψ` from the
    /// single-layer trace.
    pub jump_residual: f64,
}

impl BsProblem {
    pub fn new(curve: CurveKind, epsilon: f64, coupling: Coupling, n: usize) -> Result<Self> {
        coupling.check_finite()?;
        if epsilon > 0.0 {
            coupling.check_two_shell()?;
        }
        let grid = NystromGrid::new(&curve, epsilon, n)?;
        Ok(Self {
            curve,
            epsilon,
            coupling,
            grid,
        })
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn build_block(&self, kappa: Complex64) -> Result<CMatrix> {
        self.grid.block_operator(kappa, &self.coupling)
    }

    pub fn determinant(&self, kappa: Complex64) -> Result<Complex64> {
        Ok(Lu::new(&self.build_block(kappa)?)?.determinant())
    }

    pub fn log_determinant(&self, kappa: Complex64) -> Result<Complex64> {
        Ok(Lu::new(&self.build_block(kappa)?)?.log_determinant())
    }

    /// `−(α₊+α₋)/2`.
    pub fn default_seed(&self) -> Complex64 {
        -self.coupling.sum() / 2.0
    }

    /// Root of the determinant near `seed`. For a kernel of dimension
    /// `multiplicity > 1` the root is found from `det/det′`, which has a simple
    /// zero there.
    pub fn find_eigenvalue(&self, seed: Complex64, multiplicity: usize) -> Result<BsEigenvalue> {
        if multiplicity == 0 {
            return Err(Error::Input("multiplicity must be at least 1".into()));
        }
        if !(seed.re > 0.0) {
            return Err(Error::NoBoundState(format!("seed κ = {seed} has non-positive real part")));
        }
        // The single layer is not trace class in the plane, so the discrete
        // determinant shrinks with N; it is rescaled to unit size at the seed.
        let log_scale = self.log_determinant(seed)?.re;
        let det = |k: Complex64| {
            if k.re <= 0.0 {
                Ok(Complex64::new(1e300, 0.0))
            } else {
                Ok((self.log_determinant(k)? - log_scale).exp())
            }
        };
        let root = if multiplicity == 1 {
            find_root_complex(det, seed, ROOT_TOL)?
        } else {
            let ratio = |k: Complex64| {
                let h = 1e-6 * k.norm().max(1.0);
                let f = det(k)?;
                let fp = (det(k + h)? - det(k - h)?) / (2.0 * h);
                Ok(f / fp)
            };
            find_root_complex(ratio, seed, ROOT_TOL)?
        };
        let kappa = root.z;
        if !(kappa.re > 0.0) {
            return Err(Error::NoBoundState(format!("root κ = {kappa} is not a decay rate")));
        }
        let a = self.build_block(kappa)?;
        let (_, sigmas) = smallest_singular_subspace(&a, multiplicity)?;
        let null_ratio = sigmas.iter().cloned().fold(0.0, f64::max) / largest_singular(&a);
        if !(null_ratio < NULL_RATIO_TOL) {
            return Err(Error::Certification(format!(
                "block operator at κ = {kappa} has no {multiplicity}-dimensional kernel: σ/σ_max = {null_ratio:e}"
            )));
        }
        Ok(BsEigenvalue {
            kappa,
            lambda: -kappa * kappa,
            null_ratio,
            det_residual: det(kappa)?.norm(),
            multiplicity,
        })
    }

    /// Traces of the eigenfunction on each shell (outer `Σ_ε` first), read off
    /// the kernel vector and scaled so the largest value is 1.
    pub fn shell_traces(&self, kappa: Complex64) -> Result<Vec<Vec<Complex64>>> {
        let a = self.build_block(kappa)?;
        let (vectors, sigmas) = smallest_singular_subspace(&a, 1)?;
        let ratio = sigmas[0] / largest_singular(&a);
        if !(ratio < NULL_RATIO_TOL) {
            return Err(Error::Certification(format!(
                "κ = {kappa} is not a kernel point: σ/σ_max = {ratio:e}"
            )));
        }
        let v = &vectors[0];
        let pivot = *v.iter().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
        Ok(v.chunks(self.n()).map(|s| s.iter().map(|x| x / pivot).collect()).collect())
    }

    /// Traces of the limit eigenfunctions at a certified kernel point of the
    /// single-curve (`ε = 0`) system.
    pub fn eigen_traces(&self, kappa: Complex64, multiplicity: usize) -> Result<BsTraces> {
        if self.epsilon != 0.0 {
            return Err(Error::Input("traces are reconstructed for the ε = 0 system only".into()));
        }
        let n = self.n();
        let alpha = self.coupling.sum();
        let a = self.build_block(kappa)?;
        let (vectors, sigmas) = smallest_singular_subspace(&a, multiplicity)?;
        let ratio = sigmas.iter().cloned().fold(0.0, f64::max) / largest_singular(&a);
        if !(ratio < NULL_RATIO_TOL) {
            return Err(Error::Certification(format!(
                "κ = {kappa} is not a kernel point of dimension {multiplicity}: σ/σ_max = {ratio:e}"
            )));
        }
        let curve = ClosedCurve::new(self.curve.clone(), n)?;
        let weights: Vec<f64> = curve.points().iter().map(|p| p.speed * 2.0 * PI / n as f64).collect();
        // the single layer alone is (A − I)/α
        let single = CMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            (a[(i, j)] - id) / alpha
        });
        let kprime = self.grid.adjoint_double_layer(kappa)?;
        let fmat = self.grid.norm_kernel(kappa)?;

        let mut densities = Vec::with_capacity(multiplicity);
        let mut raw = Vec::with_capacity(multiplicity);
        let mut jump_residual: f64 = 0.0;
        for v in vectors {
            // scale so the largest trace value is 1
            let pivot = *v.iter().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
            let u: Vec<Complex64> = v.iter().map(|x| x / pivot).collect();
            let phi: Vec<Complex64> = u.iter().map(|x| -alpha * x).collect();
            let psi0 = single.mul_vec(&phi);
            let kp = kprime.mul_vec(&phi);
            let dn_plus: Vec<Complex64> = kp.iter().zip(&phi).map(|(k, p)| k - p / 2.0).collect();
            let dn_minus: Vec<Complex64> = kp.iter().zip(&phi).map(|(k, p)| -k - p / 2.0).collect();
            let scale = psi0.iter().map(|x| x.norm()).fold(0.0, f64::max);
            for j in 0..n {
                jump_residual = jump_residual.max((dn_plus[j] + dn_minus[j] - alpha * psi0[j]).norm() / scale);
            }
            densities.push(phi);
            raw.push((psi0, dn_plus, dn_minus));
        }
        if !(jump_residual <= JUMP_TOL) {
            return Err(Error::Certification(format!(
                "reconstructed traces violate the jump condition by {jump_residual:e}"
            )));
        }
        let k = densities.len();
        let gram = CMatrix::from_fn(k, k, |p, q| {
            let fq = fmat.mul_vec(&densities[q]);
            (0..n).map(|i| densities[p][i] * fq[i] * weights[i]).sum()
        });
        let bundles = raw
            .into_iter()
            .enumerate()
            .map(|(l, (psi0, dn_plus, dn_minus))| TraceBundle::on_curve(&curve, psi0, dn_plus, dn_minus, gram[(l, l)]))
            .collect::<Result<Vec<_>>>()?;
        Ok(BsTraces {
            bundles,
            gram,
            jump_residual,
        })
    }
}

pub fn build_block(kappa: Complex64, sigma0: &CurveKind, epsilon: f64, c: &Coupling, n: usize) -> Result<CMatrix> {
    BsProblem::new(sigma0.clone(), epsilon, *c, n)?.build_block(kappa)
}

/// Eigenvalue `λ = −κ²` of the two-shell problem near `seed` (a decay rate).
pub fn find_eigenvalue(sigma0: &CurveKind, epsilon: f64, c: &Coupling, seed: Complex64, n: usize) -> Result<Complex64> {
    Ok(BsProblem::new(sigma0.clone(), epsilon, *c, n)?
        .find_eigenvalue(seed, 1)?
        .lambda)
}

pub fn eigen_traces(sigma0: &CurveKind, c: &Coupling, kappa: Complex64, n: usize) -> Result<BsTraces> {
    BsProblem::new(sigma0.clone(), 0.0, *c, n)?.eigen_traces(kappa, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{solve_eigenvalue, RadialProblem};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_coupling_gives_identity() {
        let a = build_block(c(1.0, 0.0), &CurveKind::Circle { r: 1.0 }, 0.0, &Coupling::real(0.0, 0.0), 32).unwrap();
        assert_eq!(a, CMatrix::identity(32));
    }

    #[test]
    fn kress_weights_integrate_log_exactly() {
        // ∫ log(4 sin²(τ/2)) cos(τ) dτ = −2π
        let n = 64;
        let w = kress_weights(n);
        let s: f64 = (0..n).map(|k| w[k] * (2.0 * PI * k as f64 / n as f64).cos()).sum();
        assert!((s + 2.0 * PI).abs() < 1e-12, "{s}");
        // and ∫ log(4 sin²(τ/2)) dτ = 0
        assert!(w.iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn product_weights_integrate_log_of_circle_distance() {
        // concentric circles of radii a < b: ∫ log|x − y(τ)|² dτ = 4π log b
        let (a, b) = (0.9, 1.1);
        let n = 32;
        let target = Shell {
            t: -0.1,
            points: (0..n).map(|i| OffsetCurve { base: CurveKind::Circle { r: 1.0 }, t: -0.1 }.at(2.0 * PI * i as f64 / n as f64)).collect(),
        };
        let src = OffsetCurve { base: CurveKind::Circle { r: 1.0 }, t: 0.1 };
        let w = product_log_weights(&target, &src, n, b - a);
        for i in 0..n {
            let row = &w[i * n..(i + 1) * n];
            let s: f64 = row.iter().sum();
            assert!((s - 4.0 * PI * b.ln()).abs() < 1e-12, "{s}");
            // log|x − y|² = 2 log b − Σ_{k≥1} (2/k)(a/b)^k cos k(t − τ), so
            // ∫ log|x − y|² cos τ dτ = −2π(a/b)cos t
            let ti = 2.0 * PI * i as f64 / n as f64;
            let c1: f64 = row.iter().enumerate().map(|(j, wj)| wj * (2.0 * PI * j as f64 / n as f64).cos()).sum();
            assert!((c1 + 2.0 * PI * a / b * ti.cos()).abs() < 1e-12, "{c1}");
        }
    }

    #[test]
    fn circle_kernel_point_matches_radial() {
        let cp = Coupling::real(-3.0, -2.0);
        let kappa = solve_eigenvalue(&RadialProblem::new(2, 1.0, 0.0, cp, 0).unwrap(), None).unwrap().kappa;
        let p = BsProblem::new(CurveKind::Circle { r: 1.0 }, 0.0, cp, 64).unwrap();
        let a = p.build_block(kappa).unwrap();
        let (_, s) = smallest_singular_subspace(&a, 1).unwrap();
        assert!(s[0] < 1e-8, "{}", s[0]);
    }

    #[test]
    fn relabeling_is_a_permutation_similarity() {
        // the ellipse (a, b) turned by a quarter is the ellipse (b, a) with
        // its parameter shifted by a quarter period
        let n = 32;
        let cp = Coupling::real(-3.0, -2.0);
        let k = c(2.1, 0.3);
        for eps in [0.0, 0.05] {
            let a1 = build_block(k, &CurveKind::Ellipse { a: 1.5, b: 1.0 }, eps, &cp, n).unwrap();
            let a2 = build_block(k, &CurveKind::Ellipse { a: 1.0, b: 1.5 }, eps, &cp, n).unwrap();
            let perm = |i: usize| (i / n) * n + (i % n + n / 4) % n;
            for i in 0..a1.rows() {
                for j in 0..a1.cols() {
                    let d = (a1[(i, j)] - a2[(perm(i), perm(j))]).norm();
                    assert!(d < 1e-12, "ε = {eps}, ({i}, {j}): {d}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let cp = Coupling::real(-3.0, -2.0);
        assert!(BsProblem::new(CurveKind::Circle { r: 1.0 }, 0.0, cp, 31).is_err());
        assert!(BsProblem::new(CurveKind::Circle { r: 1.0 }, 0.0, cp, 16).is_err());
        assert!(matches!(BsProblem::new(CurveKind::Circle { r: 1.0 }, 0.95, cp, 32), Err(Error::Geometry(_))));
    }
}
