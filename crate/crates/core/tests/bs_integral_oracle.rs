use delta_shells::asymptotics::{slope_matrix, slope_simple};
use delta_shells::bs_integral::{BsProblem, JUMP_TOL};
use delta_shells::geometry::CurveKind;
use delta_shells::radial::{predicted_slope, solve_eigenvalue, RadialProblem};
use delta_shells::{Coupling, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const UNIT_CIRCLE: CurveKind = CurveKind::Circle { r: 1.0 };

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn circle_eigenvalues_match_radial() {
    for (cp, eps) in [
        (Coupling::real(-2.5, -2.5), 0.0),
        (Coupling::real(-3.0, -2.0), 1e-2),
        (Coupling::new(c(-1.0, 0.5), c(-2.0, 0.0)), 0.0),
    ] {
        let radial = solve_eigenvalue(&RadialProblem::new(2, 1.0, eps, cp, 0).unwrap(), None).unwrap();
        let p = BsProblem::new(UNIT_CIRCLE, eps, cp, 128).unwrap();
        let e = p.find_eigenvalue(p.default_seed(), 1).unwrap();
        assert!(rel(e.lambda, radial.lambda) < 1e-10, "ε = {eps}: {} vs {}", e.lambda, radial.lambda);
    }
}

#[test]
fn circle_traces_match_radial() {
    let cp = Coupling::new(c(-3.0, 0.2), c(-2.0, 0.0));
    let radial = solve_eigenvalue(&RadialProblem::new(2, 1.0, 0.0, cp, 0).unwrap(), None).unwrap();
    let p = BsProblem::new(UNIT_CIRCLE, 0.0, cp, 128).unwrap();
    let kappa = p.find_eigenvalue(radial.kappa, 1).unwrap().kappa;
    let t = p.eigen_traces(kappa, 1).unwrap();
    assert!(t.jump_residual < JUMP_TOL);
    let b = &t.bundles[0];
    let r = radial.trace_bundle(128).unwrap();
    // rotational symmetry
    for j in 0..128 {
        assert!(rel(b.psi0[j], b.psi0[0]) < 1e-8);
    }
    // scale-free comparisons: ψ²/∫ψ² and the normal derivatives per unit trace
    assert!(rel(b.psi0[0] * b.psi0[0] / b.norm_sq, r.psi0[0] * r.psi0[0] / r.norm_sq) < 1e-9);
    assert!(rel(b.dn_plus[7] / b.psi0[7], r.dn_plus[7] / r.psi0[7]) < 1e-9);
    assert!(rel(b.dn_minus[7] / b.psi0[7], r.dn_minus[7] / r.psi0[7]) < 1e-9);
    let s = slope_simple(b, &cp).unwrap();
    assert!(rel(s, predicted_slope(&RadialProblem::new(2, 1.0, 0.0, cp, 0).unwrap(), None).unwrap()) < 1e-9);
}

#[test]
fn ellipse_spectral_self_convergence() {
    let ellipse = CurveKind::Ellipse { a: 1.5, b: 1.0 };
    let cp = Coupling::real(-2.5, -2.5);
    let coarse = BsProblem::new(ellipse.clone(), 0.0, cp, 64).unwrap();
    let k64 = coarse.find_eigenvalue(coarse.default_seed(), 1).unwrap();
    let k128 = BsProblem::new(ellipse.clone(), 0.0, cp, 128).unwrap().find_eigenvalue(k64.kappa, 1).unwrap();
    let k256 = BsProblem::new(ellipse, 0.0, cp, 256).unwrap().find_eigenvalue(k128.kappa, 1).unwrap();
    assert!((k256.lambda - k128.lambda).norm() < 1e-10);
    assert!((k128.lambda - k64.lambda).norm() < 1e-8);
}

#[test]
fn degenerate_circle_pair() {
    let cp = Coupling::real(-3.0, -2.0);
    let radial = RadialProblem::new(2, 1.0, 0.0, cp, 1).unwrap();
    let want = solve_eigenvalue(&radial, None).unwrap();
    let p = BsProblem::new(UNIT_CIRCLE, 0.0, cp, 64).unwrap();
    let e = p.find_eigenvalue(want.kappa * 1.02, 2).unwrap();
    assert!(rel(e.lambda, want.lambda) < 1e-8, "{} vs {}", e.lambda, want.lambda);
    let t = p.eigen_traces(e.kappa, 2).unwrap();
    let m = slope_matrix(&t.bundles, &cp, Some(&t.gram)).unwrap();
    let simple = predicted_slope(&radial, None).unwrap();
    for s in &m.slopes {
        assert!(rel(*s, simple) < 1e-7, "{s} vs {simple}");
    }
}

#[test]
fn simple_root_is_not_certified_as_double() {
    let cp = Coupling::real(-3.0, -2.0);
    let p = BsProblem::new(UNIT_CIRCLE, 0.0, cp, 64).unwrap();
    let kappa = p.find_eigenvalue(p.default_seed(), 1).unwrap().kappa;
    assert!(p.eigen_traces(kappa, 2).is_err());
}
