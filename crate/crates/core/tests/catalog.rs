use jordanaff::catalog::{build, desk_instances, det_p_closed_form, Family, FamilySpec};
use jordanaff::jordan::JordanAlgebra;
use jordanaff::Rational;
use proptest::prelude::*;

fn r(n: i64) -> Rational {
    Rational::integer(n)
}

/// Dimension of the algebra, written out per family.
fn expected_dim(f: Family, m: usize) -> usize {
    use Family::*;
    match f {
        Reals => 1,
        ComplexField => 2,
        Quadratic => m,
        ComplexQuadratic => 2 * m,
        FullMatrixR => m * m,
        FullMatrixC => 2 * m * m,
        FullMatrixH => 4 * m * m,
        SymmetricR => m * (m + 1) / 2,
        SymmetricC => m * (m + 1),
        HermitianC => m * m,
        HermitianH | SplitQuaternionHermitian => m * (2 * m - 1),
        SkewC => 2 * m * (2 * m - 1),
        SkewHermitianH => m * (2 * m + 1),
        OctonionHermitian3 | SplitOctonionHermitian3R => 27,
        SplitOctonionHermitian3C => 54,
    }
}

fn expected_center(f: Family, m: usize) -> usize {
    let base = if f == Family::Quadratic && m == 2 { 2 } else { 1 };
    match f {
        Family::ComplexQuadratic if m == 2 => 4,
        _ if f.is_complex() => 2,
        _ => base,
    }
}

#[test]
fn dimensions_centers_and_unity() {
    for spec in desk_instances() {
        if spec.dim() > 30 {
            continue;
        }
        let alg = build(&spec).unwrap();
        let m = spec.m.unwrap_or(3);
        assert_eq!(alg.dim(), expected_dim(spec.family, m), "{spec}");
        assert_eq!(alg.center().len(), expected_center(spec.family, m), "{spec}");
        let e = alg.unity().unwrap();
        assert_eq!(alg.t_operator(e), jordanaff::linalg::Mat::identity(alg.dim()), "{spec}");
        assert_eq!(alg.trace(e), r(alg.dim() as i64), "{spec}");
    }
}

#[test]
fn large_instances_have_the_right_dimension() {
    for spec in desk_instances().into_iter().filter(|s| s.dim() > 30) {
        let alg = build(&spec).unwrap();
        assert_eq!(alg.dim(), expected_dim(spec.family, spec.m.unwrap_or(3)), "{spec}");
    }
}

#[test]
fn every_family_is_listed_once() {
    let listed = jordanaff::catalog::list();
    assert_eq!(listed.len(), 17);
    for f in Family::ALL {
        assert_eq!(f.cli_name().parse::<Family>().unwrap(), f);
        assert!(desk_instances().iter().any(|s| s.family == f), "{f}");
    }
}

#[test]
fn strict_thresholds_reject_small_sizes() {
    assert!(build(&FamilySpec::new(Family::SymmetricR).with_m(2)).is_err());
    assert!(build(&FamilySpec::new(Family::SymmetricR).with_m(2).desk()).is_ok());
    assert!(build(&FamilySpec::new(Family::Reals).with_gamma(vec![1])).is_err());
    assert!(build(&FamilySpec::new(Family::SymmetricR).with_m(3).with_gamma(vec![1, 1])).is_err());
}

#[test]
fn twisted_hermitian_is_the_isotope() {
    let plain = build(&FamilySpec::new(Family::HermitianC).with_m(3)).unwrap();
    let twisted = build(&FamilySpec::new(Family::HermitianC).with_m(3).with_gamma(vec![1, -1, 1])).unwrap();
    let mut gamma = vec![r(0); plain.dim()];
    for (k, l) in plain.labels().iter().enumerate() {
        gamma[k] = match l.as_str() {
            "E11" | "E33" => r(1),
            "E22" => r(-1),
            _ => r(0),
        };
    }
    assert_eq!(plain.isotope(&gamma).unwrap(), twisted);
}

/// Bareiss determinant of a small rational matrix.
fn det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut sign = r(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != r(0)) else { return r(0) };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..n {
            let f = a[i][c].clone() / &a[c][c];
            for j in c..n {
                let x = f.clone() * &a[c][j];
                a[i][j] = a[i][j].clone() - &x;
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * &a[i][i])
}

fn symmetric_matrix(alg: &JordanAlgebra, u: &[Rational]) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![r(0); 3]; 3];
    for (k, l) in alg.labels().iter().enumerate() {
        let b = l.as_bytes();
        let (i, j) = ((b[1] - b'1') as usize, (b[2] - b'1') as usize);
        out[i][j] = u[k].clone();
        out[j][i] = u[k].clone();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_det_p_is_det_to_the_m_plus_one(u in prop::collection::vec(-5i64..5, 6)) {
        let spec = FamilySpec::new(Family::SymmetricR).with_m(3);
        let s3 = build(&spec).unwrap();
        let u: Vec<Rational> = u.into_iter().map(r).collect();
        let want = det(symmetric_matrix(&s3, &u)).pow(4);
        prop_assert_eq!(s3.p_operator(&u).det(), want.clone());
        prop_assert_eq!(det_p_closed_form(&spec, &u).unwrap(), want);
    }

    #[test]
    fn closed_forms_match_brute_force(idx in 0usize..64, seed in 0u64..1000) {
        let small: Vec<FamilySpec> = desk_instances().into_iter().filter(|s| s.dim() <= 18).collect();
        let spec = &small[idx % small.len()];
        let alg = build(spec).unwrap();
        for u in alg.random_elements(2, seed) {
            prop_assert_eq!(alg.p_operator(&u).det(), det_p_closed_form(spec, &u).unwrap(), "{}", spec);
        }
    }
}
