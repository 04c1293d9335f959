use delta_shells::numerics::linalg::{smallest_singular, CMatrix, Lu};
use delta_shells::numerics::{eigenvalues_small, find_root_complex, fit_expansion};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cplx(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn root_residual_below_tolerance(roots in prop::collection::vec(cplx(3.0), 1..5), seed in cplx(4.0)) {
        let p = |z: Complex64| roots.iter().fold(c(1.0, 0.0), |acc, r| acc * (z - r));
        if let Ok(r) = find_root_complex(|z| Ok(p(z)), seed, 1e-10) {
            prop_assert!(p(r.z).norm() <= 1e-10 || roots.iter().any(|q| (q - r.z).norm() < 1e-6));
        }
    }

    #[test]
    fn eigenvalues_invariant_under_similarity(
        entries in prop::collection::vec(cplx(2.0), 9),
        pert in prop::collection::vec(cplx(0.3), 9),
    ) {
        let m = CMatrix::from_fn(3, 3, |i, j| entries[3 * i + j]);
        let p = CMatrix::from_fn(3, 3, |i, j| pert[3 * i + j] + if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let lu = Lu::new(&p).unwrap();
        prop_assume!(!lu.is_singular() && lu.min_abs_pivot() > 0.2);
        // P⁻¹ M P column by column
        let mp = m.matmul(&p);
        let mut sim = CMatrix::zeros(3, 3);
        for j in 0..3 {
            let col: Vec<Complex64> = (0..3).map(|i| mp[(i, j)]).collect();
            let x = lu.solve(&col);
            for i in 0..3 {
                sim[(i, j)] = x[i];
            }
        }
        let a = eigenvalues_small(&m).unwrap();
        let b = eigenvalues_small(&sim).unwrap();
        // match as multisets
        let mut used = [false; 3];
        for x in &a {
            let (k, d) = b.iter().enumerate().filter(|(k, _)| !used[*k])
                .map(|(k, y)| (k, (x - y).norm()))
                .min_by(|u, v| u.1.total_cmp(&v.1)).unwrap();
            used[k] = true;
            prop_assert!(d < 1e-9 * (1.0 + x.norm()), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn fit_reproduces_exact_polynomials(coeffs in prop::collection::vec(cplx(10.0), 3)) {
        let eps = [2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3];
        let pts: Vec<_> = eps.iter().map(|&e| (e, coeffs[0] + coeffs[1] * e + coeffs[2] * e * e)).collect();
        let fit = fit_expansion(&pts, 2).unwrap();
        let scale = coeffs.iter().map(|x| x.norm()).fold(1e-3, f64::max);
        for (j, (g, w)) in fit.coefficients.iter().zip(&coeffs).enumerate() {
            // relative to the coefficient's natural size in ε units
            let unit = scale / 2e-2f64.powi(j as i32);
            prop_assert!((g - w).norm() <= 1e-10 * unit.max(w.norm()), "{j}: {g} vs {w}");
        }
    }

    #[test]
    fn smallest_singular_of_diagonal(d in prop::collection::vec(0.01f64..10.0, 2..8)) {
        let m = CMatrix::from_fn(d.len(), d.len(), |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) });
        let s = smallest_singular(&m).unwrap();
        let mut sorted = d.clone();
        sorted.sort_by(f64::total_cmp);
        // accuracy is only promised for a well separated minimum
        prop_assume!(sorted[1] >= 1.5 * sorted[0]);
        let want = sorted[0];
        prop_assert!((s.sigma - want).abs() <= 1e-8 * want);
    }
}
