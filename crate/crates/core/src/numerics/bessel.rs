//! Modified Bessel functions `I_ν(z)` and `K_ν(z)` for complex `z` in the open
//! right half-plane and integer or half-integer order `ν ≥ 0`.
//!
//! Integer orders:
//! * `|z| ≤ 2`: ascending series for `I_n`, `K_0`, `K_1`.
//! * `|z| > 2`: Steed's continued fraction (CF2) for `K_0`, `K_1`; the ratio
//!   `I_{n+1}/I_n` from the Gauss continued fraction (CF1) and `I_n` from the
//!   Wronskian `I_n K_{n+1} + I_{n+1} K_n = 1/z`.
//! * `K_n` for `n ≥ 2` by upward recurrence, which is stable for `K`.
//!
//! Half-integer orders use the terminating elementary expansions, switching to
//! the ascending series for `I` at small `|z|` where the two exponentials cancel.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `|z|` accepted; beyond it `I_ν` overflows or `K_ν` underflows.
pub const MAX_ABS_Z: f64 = 500.0;

/// Below this `|z|` the singular `K_ν(z)` is reported as a range error.
pub const K_MIN_ABS_Z: f64 = 1e-10;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_RADIUS: f64 = 2.0;
const MAX_CF_ITER: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Integer(u32),
    /// `n + 1/2`
    HalfInteger(u32),
}

impl Order {
    fn classify(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::Domain(format!("Bessel order must be finite and ≥ 0, got {nu}")));
        }
        let twice = 2.0 * nu;
        if (twice - twice.round()).abs() > 1e-12 || twice > 2.0 * u32::MAX as f64 {
            return Err(Error::Domain(format!(
                "Bessel order must be an integer or half-integer, got {nu}"
            )));
        }
        let twice = twice.round() as u64;
        Ok(if twice % 2 == 0 {
            Order::Integer((twice / 2) as u32)
        } else {
            Order::HalfInteger((twice / 2) as u32)
        })
    }

    fn value(self) -> f64 {
        match self {
            Order::Integer(n) => n as f64,
            Order::HalfInteger(n) => n as f64 + 0.5,
        }
    }
}

/// Values and first derivatives of `I_ν` and `K_ν` at one argument.
#[derive(Debug, Clone, Copy)]
pub struct BesselIK {
    pub i: Complex64,
    pub di: Complex64,
    pub k: Complex64,
    pub dk: Complex64,
}

/// `I_0, I_1, K_0, K_1` at one argument (the kernels of the 2D layer potentials).
#[derive(Debug, Clone, Copy)]
pub struct IK01 {
    pub i0: Complex64,
    pub i1: Complex64,
    pub k0: Complex64,
    pub k1: Complex64,
}

fn check_argument(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite Bessel argument {z}")));
    }
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("Bessel argument needs Re z > 0, got {z}")));
    }
    if z.norm() > MAX_ABS_Z {
        return Err(Error::Range(format!("|z| = {} exceeds {MAX_ABS_Z}", z.norm())));
    }
    Ok(())
}

fn check_k_argument(z: Complex64) -> Result<()> {
    check_argument(z)?;
    if z.norm() < K_MIN_ABS_Z {
        return Err(Error::Range(format!("K_ν is singular at |z| = {:e}", z.norm())));
    }
    Ok(())
}

fn finite(v: Complex64, what: &str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("{what} is not representable")))
    }
}

/// Modified Bessel function of the first kind.
pub fn bessel_i(order: f64, z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    let v = match Order::classify(order)? {
        Order::Integer(n) => {
            if z.norm() <= SERIES_RADIUS {
                i_series(n as f64, z)
            } else {
                integer_large(n, z)?.0
            }
        }
        Order::HalfInteger(n) => i_half(n, z),
    };
    finite(v, "I_ν(z)")
}

/// Modified Bessel function of the second kind (Macdonald function).
pub fn bessel_k(order: f64, z: Complex64) -> Result<Complex64> {
    check_k_argument(z)?;
    let v = match Order::classify(order)? {
        Order::Integer(n) => k_integer(n, z)?.0,
        Order::HalfInteger(n) => k_half(n, z),
    };
    finite(v, "K_ν(z)")
}

/// `I_ν, I_ν', K_ν, K_ν'` at `z`.
pub fn bessel_ik(order: f64, z: Complex64) -> Result<BesselIK> {
    check_k_argument(z)?;
    let ord = Order::classify(order)?;
    let nu = ord.value();
    let (i, i_next, k, k_next) = match ord {
        Order::Integer(n) => {
            if z.norm() <= SERIES_RADIUS {
                let (k, k_next) = k_integer(n, z)?;
                (i_series(nu, z), i_series(nu + 1.0, z), k, k_next)
            } else {
                integer_large(n, z)?
            }
        }
        Order::HalfInteger(n) => (i_half(n, z), i_half(n + 1, z), k_half(n, z), k_half(n + 1, z)),
    };
    let out = BesselIK {
        i,
        di: i_next + i * (nu / z),
        k,
        dk: -k_next + k * (nu / z),
    };
    finite(out.i, "I_ν(z)")?;
    finite(out.k, "K_ν(z)")?;
    finite(out.di, "I_ν'(z)")?;
    finite(out.dk, "K_ν'(z)")?;
    Ok(out)
}

/// `I_0, I_1, K_0, K_1` at `z` in one pass.
pub fn ik01(z: Complex64) -> Result<IK01> {
    check_k_argument(z)?;
    if z.norm() <= SERIES_RADIUS {
        let (i0, i1, k0, k1) = small_01(z);
        Ok(IK01 { i0, i1, k0, k1 })
    } else {
        let (i0, i1, k0, k1) = integer_large(0, z)?;
        Ok(IK01 { i0, i1, k0, k1 })
    }
}

fn gamma_plus_one(nu: f64) -> f64 {
    // Γ(ν + 1) for integer or half-integer ν ≥ 0.
    let (mut g, mut x) = if (nu - nu.floor()).abs() < 0.25 {
        (1.0, 1.0)
    } else {
        (PI.sqrt() / 2.0, 1.5)
    };
    while x < nu + 1.0 - 0.25 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Ascending series `Σ (z/2)^{2k+ν} / (k! Γ(k+ν+1))`.
fn i_series(nu: f64, z: Complex64) -> Complex64 {
    let half = z * 0.5;
    let y = half * half;
    let mut term = if nu == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        (half.ln() * nu).exp() / gamma_plus_one(nu)
    };
    let mut sum = term;
    for k in 1..500 {
        let kf = k as f64;
        term *= y / (kf * (kf + nu));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Series for `I_0, I_1, K_0, K_1` at small `|z|`.
fn small_01(z: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let y = z * z * 0.25;
    let log_half = (z * 0.5).ln();

    let mut t0 = Complex64::new(1.0, 0.0); // y^k / (k!)^2
    let mut t1 = Complex64::new(1.0, 0.0); // y^k / (k! (k+1)!)
    let mut i0 = t0;
    let mut s1 = t1;
    let mut harmonic = 0.0;
    let mut k0_tail = Complex64::new(0.0, 0.0);
    let mut k1_tail = t1 * (1.0 - 2.0 * EULER_GAMMA); // k = 0: ψ(1) + ψ(2) = 1 − 2γ
    for k in 1..200 {
        let kf = k as f64;
        t0 *= y / (kf * kf);
        t1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        i0 += t0;
        s1 += t1;
        k0_tail += t0 * harmonic;
        let psi_sum = 2.0 * (harmonic - EULER_GAMMA) + 1.0 / (kf + 1.0);
        k1_tail += t1 * psi_sum;
        if t0.norm() * (1.0 + harmonic) <= 1e-17 * i0.norm() {
            break;
        }
    }
    let i1 = z * 0.5 * s1;
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_tail;
    let k1 = z.inv() + log_half * i1 - z * 0.25 * k1_tail;
    (i0, i1, k0, k1)
}

/// Steed's continued fraction for `K_0(z), K_1(z)`, `|z| > 2`, `Re z > 0`.
fn k01_cf2(z: Complex64) -> Result<(Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let mut b = (one + z) * 2.0;
    let mut d = b.inv();
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25;
    let mut q = Complex64::new(a1, 0.0);
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    for i in 1..MAX_CF_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += qnew * c;
        b += 2.0;
        d = (b + d * a).inv();
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < f64::EPSILON * s.norm() && delh.norm() < f64::EPSILON * h.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: MAX_CF_ITER,
            last: z,
            residual: (delh / h).norm(),
        });
    }
    let h = h * a1;
    let k0 = (Complex64::new(PI, 0.0) / (z * 2.0)).sqrt() * (-z).exp() / s;
    let k1 = k0 * (z + 0.5 - h) / z;
    Ok((k0, k1))
}

/// Gauss continued fraction for `I_{n+1}(z)/I_n(z)` (modified Lentz).
///
/// The ratio is `1/g` with `g = b₁ + 1/(b₂ + 1/(b₃ + …))`, `b_k = 2(n+k)/z`.
fn i_ratio_cf1(n: u32, z: Complex64) -> Result<Complex64> {
    let tiny = 1e-150;
    let b = |k: usize| Complex64::new(2.0 * (n as f64 + k as f64), 0.0) / z;
    let mut g = b(1);
    let mut c = g;
    let mut d = Complex64::new(0.0, 0.0);
    let mut last_change = f64::INFINITY;
    for k in 2..MAX_CF_ITER {
        let bk = b(k);
        d = bk + d;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = bk + c.inv();
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        g *= delta;
        last_change = (delta - 1.0).norm();
        if last_change < 4.0 * f64::EPSILON {
            return Ok(g.inv());
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_CF_ITER,
        last: z,
        residual: last_change,
    })
}

fn k01(z: Complex64) -> Result<(Complex64, Complex64)> {
    if z.norm() <= SERIES_RADIUS {
        let (_, _, k0, k1) = small_01(z);
        Ok((k0, k1))
    } else {
        k01_cf2(z)
    }
}

/// `(K_n, K_{n+1})` by upward recurrence from `K_0, K_1`.
fn k_integer(n: u32, z: Complex64) -> Result<(Complex64, Complex64)> {
    let (mut km, mut k) = k01(z)?;
    for j in 1..=n {
        let kp = km + k * (2.0 * j as f64) / z;
        km = k;
        k = kp;
    }
    Ok((km, k))
}

/// `(I_n, I_{n+1}, K_n, K_{n+1})` for `|z| > 2`.
fn integer_large(n: u32, z: Complex64) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let (k, k_next) = k_integer(n, z)?;
    let ratio = i_ratio_cf1(n, z)?;
    let i = (z * (k_next + ratio * k)).inv();
    Ok((i, ratio * i, k, k_next))
}

/// Coefficients `(n+k)! / (k! (n−k)!)` of the terminating half-integer expansions.
fn half_coefficients(n: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut a = 1.0;
    out.push(a);
    for k in 0..n {
        let kf = k as f64;
        let nf = n as f64;
        a *= (nf + kf + 1.0) * (nf - kf) / (kf + 1.0);
        out.push(a);
    }
    out
}

fn k_half(n: u32, z: Complex64) -> Complex64 {
    let coeffs = half_coefficients(n);
    let inv = (z * 2.0).inv();
    let mut pow = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for a in coeffs {
        sum += pow * a;
        pow *= inv;
    }
    (Complex64::new(PI, 0.0) / (z * 2.0)).sqrt() * (-z).exp() * sum
}

fn i_half(n: u32, z: Complex64) -> Complex64 {
    if z.norm() <= SERIES_RADIUS + n as f64 {
        return i_series(n as f64 + 0.5, z);
    }
    let coeffs = half_coefficients(n);
    let inv = (z * 2.0).inv();
    let mut pow = Complex64::new(1.0, 0.0);
    let mut alternating = Complex64::new(0.0, 0.0);
    let mut plain = Complex64::new(0.0, 0.0);
    for (k, a) in coeffs.into_iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        alternating += pow * (sign * a);
        plain += pow * a;
        pow *= inv;
    }
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    (z.exp() * alternating - (-z).exp() * plain * parity) / (z * (2.0 * PI)).sqrt()
}
