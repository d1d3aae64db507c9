use jordanaff::calabi::direct_sum;
use jordanaff::catalog::{build, desk_instances, Family, FamilySpec};
use jordanaff::hypersurface::{build_model, level_ratio, reconstruct_algebra, scale_constant, tangent_check, ModelError};
use jordanaff::linalg::Mat;
use jordanaff::Rational;
use proptest::prelude::*;

fn r(n: i64) -> Rational {
    Rational::integer(n)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

#[test]
fn scale_constant_values() {
    // C = −sgn(L₁) √(n+1) ((n+1)|L₁|)^{−(n+2)/2}
    assert!(close(scale_constant(1, -1.0).unwrap(), 2f64.sqrt() * 2f64.powf(-1.5), 1e-12));
    assert!(close(scale_constant(1, -1.0).unwrap(), 0.5, 1e-12));
    assert!(close(scale_constant(0, 1.0).unwrap(), -1.0, 1e-12));
    assert!(close(scale_constant(2, 2.0).unwrap(), -(3f64.sqrt()) * 6f64.powf(-2.0), 1e-12));
    assert!(scale_constant(3, 0.0).is_err());
}

#[test]
fn complex_field_model() {
    let c = build(&FamilySpec::new(Family::ComplexField)).unwrap();
    let model = build_model(&c, r(-1)).unwrap();
    assert_eq!(model.n(), 1);
    // ⟨i, i⟩ = −2, so g_o(i, i) = −(−2)/(2·(−1)) = −1 up to the basis scaling of V₀.
    let x = model.v0_basis[0].clone();
    let xx = c.trace_form(&x, &x);
    assert_eq!(model.g_o[(0, 0)], -(xx / &r(2)) * &r(-1));
    assert!(model.a_o[0].is_zero());
    let xi = model.affine_normal().unwrap();
    let e = c.unity().unwrap();
    for (a, b) in xi.iter().zip(e) {
        assert!(close(*a, 0.5 * b.to_f64(), 1e-12));
    }
    for p in model.to_f64().sample_points(50, 5, 0.3, 1) {
        let radius = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(close(radius, 0.5, 1e-8), "{p:?}");
    }
}

#[test]
fn split_sum_gives_a_hyperbola_with_vanishing_cubic_form() {
    let re = build(&FamilySpec::new(Family::Reals)).unwrap();
    let rr = direct_sum(&[re.clone(), re]).unwrap();
    let model = build_model(&rr, r(-1)).unwrap();
    assert!(model.a_o.iter().all(|m| m.is_zero()));
    let fm = model.to_f64();
    for p in fm.sample_points(100, 5, 0.3, 2) {
        assert!(close(p[0] * p[1], fm.c * fm.c, 1e-9), "{p:?}");
        assert!(p[0] > 0.0 && p[1] > 0.0);
    }
}

#[test]
fn gauss_terms_cancel_without_vanishing() {
    let s3 = build(&FamilySpec::new(Family::SymmetricR).with_m(3)).unwrap();
    let model = build_model(&s3, r(-1)).unwrap();
    let n = model.n();
    let unit = |i: usize| (0..n).map(|k| r((k == i) as i64)).collect::<Vec<_>>();
    let mut nonzero = [false; 3];
    for (i, j, k) in [(0, 1, 1), (0, 2, 2), (1, 3, 0), (2, 4, 3)] {
        let t = model.gauss_terms(&unit(i), &unit(j), &unit(k)).unwrap();
        assert!(t.residual().iter().all(|x| *x == r(0)), "residual at ({i},{j},{k})");
        nonzero[0] |= t.curvature.iter().any(|x| *x != r(0));
        nonzero[1] |= t.metric.iter().any(|x| *x != r(0));
        nonzero[2] |= t.cubic.iter().any(|x| *x != r(0));
    }
    assert_eq!(nonzero, [true, true, true]);
}

#[test]
fn model_checks_are_exact_across_the_catalog() {
    for spec in desk_instances().into_iter().filter(|s| s.dim() <= 18) {
        let alg = build(&spec).unwrap();
        for l1 in [r(-1), r(1), r(2)] {
            let model = build_model(&alg, l1.clone()).unwrap();
            for c in model.checks() {
                assert!(c.pass && c.max_residual == 0.0, "{spec} L1={l1}: {c:?}");
            }
        }
    }
}

#[test]
fn roundtrip_recovers_the_algebra() {
    for spec in desk_instances().into_iter().filter(|s| s.dim() <= 18) {
        let alg = build(&spec).unwrap();
        let model = build_model(&alg, r(-1)).unwrap();
        let rec = model.reconstruct().unwrap();
        assert!(!rec.flagged, "{spec}");
        assert_eq!(rec.algebra, alg, "{spec}");
        assert_eq!(rec.algebra.tensor(), alg.tensor(), "{spec}");
    }
}

#[test]
fn roundtrip_of_a_mixed_direct_sum() {
    let parts = [
        build(&FamilySpec::new(Family::ComplexField)).unwrap(),
        build(&FamilySpec::new(Family::SymmetricR).with_m(2).desk()).unwrap(),
        build(&FamilySpec::new(Family::Reals)).unwrap(),
    ];
    let sum = direct_sum(&parts).unwrap();
    let model = build_model(&sum, Rational::new(2, 3)).unwrap();
    assert_eq!(model.reconstruct().unwrap().algebra, sum);
}

#[test]
fn reconstruct_from_one_dimensional_data() {
    let a = vec![vec![vec![r(0)]]];
    // g = (−1): X∘X = −e, the complex numbers.
    let c = reconstruct_algebra(&Mat::from_rows(vec![vec![r(-1)]]), &a, &r(-1)).unwrap();
    assert!(!c.flagged);
    assert_eq!(c.algebra.square(&[r(1), r(0)]), vec![r(0), r(-1)]);
    assert_eq!(c.algebra.center().len(), 2);
    assert!(c.algebra.invert(&[r(1), r(0)]).is_ok());
    // g = (1): X∘X = e, so (e ± X)/2 are idempotents and the algebra is ℝ ⊕ ℝ.
    let s = reconstruct_algebra(&Mat::from_rows(vec![vec![r(1)]]), &a, &r(-1)).unwrap();
    assert_eq!(s.algebra.square(&[r(1), r(0)]), vec![r(0), r(1)]);
    let idem = vec![Rational::new(1, 2), Rational::new(1, 2)];
    assert_eq!(s.algebra.square(&idem), idem);
    assert_eq!(s.algebra.decompose().unwrap().len(), 2);
}

#[test]
fn reconstruct_rejects_bad_input() {
    let g = Mat::from_rows(vec![vec![r(1), r(0)], vec![r(0), r(1)]]);
    // tr A_{X_0} = 1 + 0 ≠ 0
    let mut a = vec![vec![vec![r(0); 2]; 2]; 2];
    a[0][0][0] = r(1);
    assert!(matches!(reconstruct_algebra(&g, &a, &r(-1)), Err(ModelError::Apolarity(0, _)) | Err(ModelError::AsymmetricCubic(_))));
    let zero = vec![vec![vec![r(0); 2]; 2]; 2];
    assert!(matches!(reconstruct_algebra(&g, &zero, &r(0)), Err(ModelError::ZeroCurvature)));
    let degenerate = Mat::from_rows(vec![vec![r(1), r(1)], vec![r(1), r(1)]]);
    assert!(matches!(reconstruct_algebra(&degenerate, &zero, &r(-1)), Err(ModelError::DegenerateMetric)));
    let asym = Mat::from_rows(vec![vec![r(1), r(2)], vec![r(0), r(1)]]);
    assert!(matches!(reconstruct_algebra(&asym, &zero, &r(-1)), Err(ModelError::AsymmetricMetric(..))));
}

#[test]
fn zero_curvature_is_rejected() {
    let s3 = build(&FamilySpec::new(Family::SymmetricR).with_m(3)).unwrap();
    assert!(matches!(build_model(&s3, r(0)), Err(ModelError::ZeroCurvature)));
}

#[test]
fn level_set_and_tangent_order_on_a_twisted_algebra() {
    let alg = build(&FamilySpec::new(Family::HermitianC).with_m(3).with_gamma(vec![1, -1, 1])).unwrap();
    let model = build_model(&alg, r(2)).unwrap().to_f64();
    let check = model.level_check(200, 5, 0.3, 9);
    assert!(check.pass && check.max_residual <= 1e-8, "{check:?}");
    let x = model.from_v0_coords(&(0..model.n()).map(|k| (k as f64 * 0.37).sin()).collect::<Vec<_>>());
    let tc = tangent_check(&model.algebra, &x, &[1e-2, 1e-3, 1e-4]).unwrap();
    assert!(tc.min_order >= 0.99, "{tc:?}");
}

#[test]
fn level_ratio_is_scale_free() {
    // det P_{λe} = λ^{2(n+1)}, so the ratio at λ = C is one.
    for n in [1usize, 4, 9] {
        let c = scale_constant(n, -1.0).unwrap();
        let det = c.abs().powi(2 * (n as i32 + 1));
        assert!(close(level_ratio(det, c, n), 1.0, 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_equation_on_random_triples(
        x in prop::collection::vec(-5i64..5, 8),
        y in prop::collection::vec(-5i64..5, 8),
        z in prop::collection::vec(-5i64..5, 8),
        num in -3i64..3,
        den in 1i64..4,
    ) {
        prop_assume!(num != 0);
        let h = build(&FamilySpec::new(Family::HermitianC).with_m(3)).unwrap();
        let model = build_model(&h, Rational::new(num, den)).unwrap();
        let f = |v: Vec<i64>| v.into_iter().map(r).collect::<Vec<_>>();
        let res = model.gauss_residual(&f(x), &f(y), &f(z)).unwrap();
        prop_assert!(res.iter().all(|c| *c == r(0)));
    }

    #[test]
    fn cubic_form_is_symmetric_and_apolar(num in -4i64..4, den in 1i64..5) {
        prop_assume!(num != 0);
        let alg = build(&FamilySpec::new(Family::Quadratic).with_m(4).with_q(vec![1, 1, -1, 1])).unwrap();
        let model = build_model(&alg, Rational::new(num, den)).unwrap();
        prop_assert!(model.symmetry_check().pass);
        prop_assert!(model.apolarity_check().pass);
        prop_assert!(model.trace_form_check().pass);
    }

    #[test]
    fn samples_stay_on_the_level_set(seed in 0u64..10_000) {
        let alg = build(&FamilySpec::new(Family::SymmetricR).with_m(3).with_gamma(vec![1, 1, -1])).unwrap();
        let model = build_model(&alg, r(-1)).unwrap().to_f64();
        for p in model.sample_points(5, 4, 0.4, seed) {
            prop_assert!(model.level_residual(&p).abs() <= 1e-8);
        }
    }
}
