//! Complex root finding: Newton's method with a central-difference derivative,
//! falling back to Muller's method when Newton stagnates.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl RootOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, max_iter: 200 }
    }
}

/// A converged root with its diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub z: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

fn derivative_step(z: Complex64) -> f64 {
    1e-7 * z.norm().max(1.0)
}

fn check(v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range("function value is not finite".into()))
    }
}

/// Find a root of `f` near `seed`.
///
/// Converged when `|f(z)| ≤ tol`, or when the Newton step has shrunk below
/// `tol · max(1, |z|)` (one more step is then taken and returned).
pub fn find_root_complex<F>(mut f: F, seed: Complex64, tol: f64) -> Result<Root>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    find_root_with(&mut f, seed, RootOptions::with_tol(tol))
}

pub fn find_root_with<F>(f: &mut F, seed: Complex64, opts: RootOptions) -> Result<Root>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if !(opts.tol > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let mut z = seed;
    let mut fz = check(f(z)?)?;
    let mut stalls = 0;
    let mut iter = 0;
    while iter < opts.max_iter {
        if fz.norm() <= opts.tol {
            return Ok(Root {
                z,
                residual: fz.norm(),
                iterations: iter,
            });
        }
        iter += 1;
        let h = derivative_step(z);
        let fp = check(f(z + h)?)?;
        let fm = check(f(z - h)?)?;
        let d = (fp - fm) / (2.0 * h);
        if d.norm() == 0.0 || !d.re.is_finite() || !d.im.is_finite() {
            return muller(f, [z - h, z + h, z], [fm, fp, fz], opts, iter);
        }
        let step = fz / d;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..6 {
            let cand = z - step * lambda;
            let fc = check(f(cand)?)?;
            if fc.norm() < fz.norm() {
                accepted = Some((cand, fc));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((cand, fc)) => {
                let moved = (cand - z).norm();
                z = cand;
                fz = fc;
                if moved <= opts.tol * z.norm().max(1.0) {
                    // Polish once more; the step size, not the residual scale, decided.
                    let h = derivative_step(z);
                    let d = (check(f(z + h)?)? - check(f(z - h)?)?) / (2.0 * h);
                    if d.norm() > 0.0 {
                        let cand = z - fz / d;
                        let fc = check(f(cand)?)?;
                        if fc.norm() <= fz.norm() {
                            z = cand;
                            fz = fc;
                        }
                    }
                    return Ok(Root {
                        z,
                        residual: fz.norm(),
                        iterations: iter,
                    });
                }
                stalls = 0;
            }
            None => {
                stalls += 1;
                if stalls >= 2 || (step.norm() <= opts.tol * z.norm().max(1.0)) {
                    return muller(f, [z - h, z + h, z], [fm, fp, fz], opts, iter);
                }
                // tiny fallback nudge; keeps deterministic behaviour
                z -= step * lambda;
                fz = check(f(z)?)?;
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: iter,
        last: z,
        residual: fz.norm(),
    })
}

fn muller<F>(
    f: &mut F,
    mut x: [Complex64; 3],
    mut fx: [Complex64; 3],
    opts: RootOptions,
    mut iter: usize,
) -> Result<Root>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    while iter < opts.max_iter {
        iter += 1;
        let [x0, x1, x2] = x;
        let [f0, f1, f2] = fx;
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        if h1.norm() == 0.0 || h2.norm() == 0.0 || (h1 + h2).norm() == 0.0 {
            break;
        }
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - a * f2 * 4.0).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
        let dx = if den.norm() == 0.0 {
            Complex64::new(opts.tol, 0.0) * x2.norm().max(1.0)
        } else {
            -f2 * 2.0 / den
        };
        let x3 = x2 + dx;
        let f3 = check(f(x3)?)?;
        x = [x1, x2, x3];
        fx = [f1, f2, f3];
        if f3.norm() <= opts.tol || dx.norm() <= opts.tol * x3.norm().max(1.0) {
            return Ok(Root {
                z: x3,
                residual: f3.norm(),
                iterations: iter,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: iter,
        last: x[2],
        residual: fx[2].norm(),
    })
}
