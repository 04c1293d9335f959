use delta_shells::geometry::{
    curvature, jacobian_f, max_parallel_range, parallel_offset, surface_integral, ClosedCurve, CurveKind,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn convex_kind() -> impl Strategy<Value = CurveKind> {
    prop_oneof![
        (0.2f64..5.0).prop_map(|r| CurveKind::Circle { r }),
        (0.3f64..4.0, 0.3f64..4.0).prop_map(|(a, b)| CurveKind::Ellipse { a, b }),
    ]
}

fn smooth_kind() -> impl Strategy<Value = CurveKind> {
    prop_oneof![
        convex_kind(),
        (-0.15f64..0.15, -0.1f64..0.1, -0.05f64..0.05)
            .prop_map(|(c2, c3, s2)| CurveKind::Fourier { cos: vec![1.0, 0.0, c2, c3], sin: vec![0.0, s2] }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convex_curves_have_nonpositive_mean_curvature(kind in convex_kind()) {
        let c = ClosedCurve::new(kind, 96).unwrap();
        prop_assert!(curvature(&c).k1.iter().all(|k| *k <= 0.0));
    }

    #[test]
    fn offset_length_equals_jacobian_integral(kind in smooth_kind(), frac in -0.5f64..0.5) {
        let c = ClosedCurve::new(kind, 512).unwrap();
        let t = frac * max_parallel_range(&c);
        let field = curvature(&c);
        let f: Vec<Complex64> = (0..c.len()).map(|i| Complex64::new(jacobian_f(&field, i, t).unwrap(), 0.0)).collect();
        let want = surface_integral(&c, &f).unwrap().re;
        let got = parallel_offset(&c, t).unwrap().length();
        prop_assert!((got - want).abs() <= 1e-8 * want, "{got} vs {want}");
    }

    #[test]
    fn jacobian_tends_to_one(kind in smooth_kind()) {
        let c = ClosedCurve::new(kind, 64).unwrap();
        let field = curvature(&c);
        // the 1e-7 tolerance at t = 1e-8 presumes |κ| ≤ 10
        prop_assume!(field.max_abs() <= 10.0);
        for i in 0..c.len() {
            prop_assert!((jacobian_f(&field, i, 1e-8).unwrap() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn curvature_stable_under_refinement(kind in smooth_kind()) {
        let coarse = curvature(&ClosedCurve::new(kind.clone(), 64).unwrap());
        let fine = curvature(&ClosedCurve::new(kind, 128).unwrap());
        for (i, k) in coarse.k1.iter().enumerate() {
            prop_assert!((k - fine.k1[2 * i]).abs() < 1e-8);
        }
    }
}

#[test]
fn ellipse_offset_length_example() {
    let c = ClosedCurve::ellipse(2.0, 1.0, 512).unwrap();
    let off = parallel_offset(&c, 0.2).unwrap();
    // for a closed convex curve ∫κ ds = −2π, so the length grows by exactly 2π·t
    assert!((off.length() - (9.688_448_220_547_675 + 2.0 * std::f64::consts::PI * 0.2)).abs() < 1e-9);
}
