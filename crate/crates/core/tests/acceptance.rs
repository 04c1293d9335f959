//! Acceptance criteria, one test each. Every test writes a `PASS`/`FAIL` line
//! straight to stderr so it shows up without `--nocapture`.
//!
//! Criteria 3 and 5 are stated for quantities that do not have the claimed
//! limits (see the notes on those tests). They are evaluated literally and
//! report FAIL; the tests then assert the corrected statements so that a
//! regression in the solvers still breaks the build.

use std::io::Write;

use delta_shells::asymptotics::slope_simple;
use delta_shells::bs_integral::BsProblem;
use delta_shells::geometry::CurveKind;
use delta_shells::harness::{run_crosscheck, run_sweep, run_uniform_check, ProblemKind, ProblemSpec, Thresholds};
use delta_shells::numerics::{bessel_i, bessel_ik, bessel_k};
use delta_shells::one_dim::correction_decomposition;
use delta_shells::radial::{degenerate_slopes, solve_eigenvalue, RadialProblem};
use delta_shells::{Coupling, C64};

const LADDER: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn report(criterion: u32, pass: bool, detail: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{} criterion {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn spec(kind: ProblemKind, ap: C64, am: C64) -> ProblemSpec {
    ProblemSpec {
        kind,
        alpha_plus: ap,
        alpha_minus: am,
        d: None,
        r: None,
        m: None,
        geometry: None,
        samples: None,
        nodes: None,
        epsilon: None,
        seed: None,
    }
}

fn fitted_slope(r: &delta_shells::harness::SweepReport) -> C64 {
    r.fitted.as_ref().expect("anchored fit").coefficients[1]
}

#[test]
fn criterion_01_one_dim_exact_model() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (ap, am, l0, s0) in [(-1.0, -1.0, -1.0, 2.0), (-1.0, -3.0, -4.0, 12.0)] {
        let r = run_sweep(&spec(ProblemKind::Onedim, c(ap, 0.0), c(am, 0.0)), &LADDER, Thresholds::default()).unwrap();
        let lambda0 = r.lambda0.unwrap();
        let slope = fitted_slope(&r);
        let free = r.free_fit.as_ref().unwrap();
        let ok = (lambda0 - l0).norm() <= 1e-10 && (slope - s0).norm() <= 1e-3;
        pass &= ok;
        detail.push(format!(
            "({ap},{am}) λ₀ = {:.12} slope = {:.8} [free fit λ₀ = {:.8}, slope = {:.5}]",
            lambda0.re, slope.re, free.coefficients[0].re, free.coefficients[1].re
        ));
    }
    report(1, pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn criterion_02_one_dim_complex_couplings() {
    let (ap, am) = (c(-1.0, 0.5), c(-2.0, 0.0));
    let r = run_sweep(&spec(ProblemKind::Onedim, ap, am), &LADDER, Thresholds::default()).unwrap();
    let want = -(ap + am) * ap * am;
    let slope = fitted_slope(&r);
    let order = r.remainder_order.unwrap_or(f64::NAN);
    let pass = rel(slope, want) <= 1e-4 && (1.9..=2.1).contains(&order);
    report(
        2,
        pass,
        &format!("slope {slope:.8} vs {want} (rel {:.2e}), remainder order {order:.4}", rel(slope, want)),
    );
    assert!(pass);
}

/// The energy of the projector remainder tends to `(α₊²+α₋²)ψ₀(0)²`, and
/// `ψ₀(0)² = κ₀ = −(α₊+α₋)/2` under the bilinear normalization. The stated
/// limit `α₊²+α₋²` therefore holds only when `α₊+α₋ = −2`.
#[test]
fn criterion_03_remainder_decomposition() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (ap, am) in [(-1.0, -1.0), (-1.0, -3.0)] {
        let cp = Coupling::real(ap, am);
        let stated = c(ap * ap + am * am, 0.0);
        let mut worst: f64 = 0.0;
        let mut worst_corrected: f64 = 0.0;
        let mut ok = true;
        for eps in LADDER {
            let d = correction_decomposition(eps, &cp).unwrap();
            let ratio = d.omega_energy / eps;
            let e = rel(ratio, stated);
            worst = worst.max(e / eps);
            ok &= e <= 5.0 * eps;
            worst_corrected = worst_corrected.max(rel(ratio, stated * d.psi0_origin_sq) / eps);
        }
        pass &= ok;
        detail.push(format!("({ap},{am}) max rel error/ε = {worst:.3} (allowed 5)"));
        // corrected limit (α₊²+α₋²)ψ₀(0)² with an O(ε) remainder
        assert!(worst_corrected <= 5.0, "corrected identity: {worst_corrected}");
    }
    report(3, pass, &detail.join("; "));
}

#[test]
fn criterion_04_radial_circle_slope() {
    let mut s = spec(ProblemKind::Radial, c(-3.0, 0.0), c(-2.0, 0.0));
    s.d = Some(2);
    s.r = Some(1.0);
    let t = Thresholds {
        slope_rel: 5e-3,
        ..Thresholds::default()
    };
    let r = run_sweep(&s, &LADDER, t).unwrap();
    let slope = fitted_slope(&r);
    let order = r.remainder_order.unwrap_or(f64::NAN);
    let e = r.slope_rel_error.unwrap();
    let pass = e <= 5e-3 && (1.9..=2.1).contains(&order);
    report(
        4,
        pass,
        &format!("fitted {slope:.8} vs predicted {:.8} (rel {e:.2e}), remainder order {order:.4}", r.predicted_slope.unwrap()),
    );
    assert!(pass);
}

/// With equal couplings the slope is `2α²∫_Σψ₀²/∫ψ₀²`. The surface fraction
/// depends on the radius, so the R = 1 and R = 3 slopes differ by about 1.4%
/// and neither equals `2α² = 8`.
#[test]
fn criterion_05_equal_couplings_geometry() {
    let mut slopes = Vec::new();
    for radius in [1.0, 3.0] {
        let mut s = spec(ProblemKind::Radial, c(-2.0, 0.0), c(-2.0, 0.0));
        s.r = Some(radius);
        let r = run_sweep(&s, &LADDER, Thresholds::default()).unwrap();
        slopes.push((fitted_slope(&r), r.predicted_slope.unwrap()));
        // the fitted slopes do follow the surface-weighted formula
        let e = solve_eigenvalue(&RadialProblem::new(2, radius, 0.0, Coupling::real(-2.0, -2.0), 0).unwrap(), None).unwrap();
        let weighted = e.trace_psi0 * e.trace_psi0 * 2.0 * std::f64::consts::PI * radius / e.norm_sq * 8.0;
        assert!(rel(slopes.last().unwrap().0, weighted) < 1e-3);
    }
    let (s1, s3) = (slopes[0].0, slopes[1].0);
    let agree = rel(s1, s3);
    let pass = agree <= 1e-3 && (s1 - 8.0).norm() <= 1e-2 && (s3 - 8.0).norm() <= 1e-2;
    report(
        5,
        pass,
        &format!("R = 1 slope {:.6}, R = 3 slope {:.6}, relative gap {agree:.2e}; want both 8 ± 1e-2", s1.re, s3.re),
    );
}

#[test]
fn criterion_06_integral_vs_radial_on_circle() {
    let mut s = spec(ProblemKind::Radial, c(-3.0, 0.0), c(-2.0, 0.0));
    s.r = Some(1.0);
    let r = run_crosscheck(&s, &[0.0, 1e-2], 256).unwrap();
    let rows: Vec<String> = r
        .rows
        .iter()
        .map(|row| format!("ε = {}: eigenvalue rel {:.2e}, trace rel {:.2e}", row.epsilon, row.eigenvalue_rel, row.trace_rel))
        .collect();
    let pass = r.pass && r.rows.iter().all(|row| row.eigenvalue_rel <= 1e-6 && row.trace_rel <= 1e-6);
    report(6, pass, &format!("N = 256, {}", rows.join("; ")));
    assert!(pass);
}

#[test]
fn criterion_07_ellipse_slope() {
    let ellipse = CurveKind::Ellipse { a: 1.5, b: 1.0 };
    let cp = Coupling::real(-3.0, -2.0);
    let mut s = spec(ProblemKind::Curve, cp.alpha_plus, cp.alpha_minus);
    s.geometry = Some(ellipse.clone());
    s.nodes = Some(256);
    let r = run_sweep(&s, &LADDER, Thresholds::default()).unwrap();
    let slope = fitted_slope(&r);
    // slope_simple on the integral-equation traces, evaluated directly
    let p = BsProblem::new(ellipse, 0.0, cp, 256).unwrap();
    let e = p.find_eigenvalue(p.default_seed(), 1).unwrap();
    let predicted = slope_simple(&p.eigen_traces(e.kappa, 1).unwrap().bundles[0], &cp).unwrap();
    let err = rel(slope, predicted);
    let pass = err <= 1e-2 && r.failures.is_empty();
    report(
        7,
        pass,
        &format!("ellipse(1.5, 1) fitted {slope:.7} vs slope_simple {predicted:.7} (rel {err:.2e})"),
    );
    assert!(pass);
}

#[test]
fn criterion_08_degenerate_pair() {
    let cp = Coupling::real(-3.0, -2.0);
    let p = RadialProblem::new(2, 1.0, 0.0, cp, 1).unwrap();
    let pair = degenerate_slopes(&p, None).unwrap();
    let split = (pair[0] - pair[1]).norm() / pair[0].norm();
    let mut s = spec(ProblemKind::Radial, cp.alpha_plus, cp.alpha_minus);
    s.m = Some(1);
    let r = run_sweep(&s, &LADDER, Thresholds::default()).unwrap();
    let fitted = fitted_slope(&r);
    let worst = pair.iter().map(|&v| rel(v, fitted)).fold(0.0, f64::max);
    let pass = split <= 1e-8 && worst <= 1e-2;
    report(
        8,
        pass,
        &format!("m = 1 slopes {:.8}, {:.8} (split {split:.1e}); fitted {fitted:.8} (rel {worst:.2e})", pair[0], pair[1]),
    );
    assert!(pass);
}

#[test]
fn criterion_09_convergence_rates() {
    let mut radial = spec(ProblemKind::Radial, c(-3.0, 0.0), c(-2.0, 0.0));
    radial.r = Some(1.0);
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, s) in [
        ("1D (-1,-3)", spec(ProblemKind::Onedim, c(-1.0, 0.0), c(-3.0, 0.0))),
        ("1D (-1+0.5i,-2)", spec(ProblemKind::Onedim, c(-1.0, 0.5), c(-2.0, 0.0))),
        ("radial (-3,-2)", radial),
    ] {
        let r = run_uniform_check(&s, &LADDER, Thresholds::default()).unwrap();
        let (t, e) = (r.trace_order.unwrap_or(f64::NAN), r.eigenvalue_order.unwrap_or(f64::NAN));
        pass &= (0.9..=1.1).contains(&t) && (0.9..=1.1).contains(&e);
        detail.push(format!("{name}: trace order {t:.4}, eigenvalue order {e:.4}"));
    }
    report(9, pass, &detail.join("; "));
    assert!(pass);
}

// mpmath at 40 digits: (ν, z, I_ν(z), K_ν(z))
#[rustfmt::skip]
const BESSEL_REFERENCE: &[(f64, (f64, f64), (f64, f64), (f64, f64))] = &[
    (0.0, (1.0, 0.0), (1.2660658777520083, 0.0), (4.2102443824070833e-1, 0.0)),
    (0.0, (0.1, 0.0), (1.0025015629340956, 0.0), (2.4270690247020166, 0.0)),
    (1.0, (1.7, 0.0), (1.1963465656344822, 0.0), (2.0936248820408249e-1, 0.0)),
    (2.0, (3.5, -2.0), (-1.8611808060112023, -3.8162230311003792), (-2.10569923788525e-2, 1.7557473188295224e-2)),
    (3.0, (10.0, 4.0), (-1.2218741175095955e+3, -1.3380347052842341e+3), (-9.3541788433990253e-6, 2.310968582783944e-5)),
    (0.5, (0.3, 0.2), (4.5952746308579051e-1, 1.4919526611350429e-1), (1.3614034442892008, -7.3316864635207271e-1)),
    (1.5, (2.5, 1.0), (1.0499301120481307, 1.6609672594386116), (2.3287673470149146e-2, -8.1495515530108525e-2)),
    (2.5, (12.0, 0.0), (1.4448198920258087e+4, 0.0), (2.8250369353706523e-6, 0.0)),
    (0.0, (25.0, 5.0), (1.0679923690472674e+9, -5.6164063011668751e+9), (1.2897529592540894e-12, 3.1793386435309079e-12)),
    (1.0, (40.0, -3.0), (-1.4454724608774702e+16, -2.6050213068585977e+15), (-8.4394078105467308e-19, 8.7644370742370469e-20)),
    (3.0, (0.15, 0.05), (4.6870066501230205e-5, 6.7836976528603292e-5), (1.1460185933295582e+3, -1.6619939301695073e+3)),
    (4.0, (7.0, 0.0), (5.1003750396436258e+1, 0.0), (1.2154837268936797e-3, 0.0)),
    (7.0, (5.0, 5.0), (1.1390750482823366, 1.0632365860774844), (1.5785903003761263e-2, -3.4871396734498655e-2)),
    (1.5, (45.0, 0.0), (2.0314009784078406e+18, 0.0), (5.466977844701778e-21, 0.0)),
];

#[test]
fn criterion_10_special_functions() {
    let mut value_err: f64 = 0.0;
    for &(nu, z, i, k) in BESSEL_REFERENCE {
        let z = c(z.0, z.1);
        value_err = value_err
            .max(rel(bessel_i(nu, z).unwrap(), c(i.0, i.1)))
            .max(rel(bessel_k(nu, z).unwrap(), c(k.0, k.1)));
    }
    let mut wronskian_err: f64 = 0.0;
    for nu in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
        for a in 0..=24 {
            for b in 0..=10 {
                let z = c(0.1 + 29.9 * a as f64 / 24.0, -5.0 + b as f64);
                let v = bessel_ik(nu, z).unwrap();
                wronskian_err = wronskian_err.max(rel(v.i * v.dk - v.di * v.k, -z.inv()));
            }
        }
    }
    let pass = value_err <= 1e-12 && wronskian_err <= 1e-10;
    report(
        10,
        pass,
        &format!("max value rel error {value_err:.2e} (≤ 1e-12), max Wronskian rel error {wronskian_err:.2e} (≤ 1e-10)"),
    );
    assert!(pass);
}
