use jordanaff::composition::{CdScalar, CdSignature};
use jordanaff::Rational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(n: i64) -> Rational {
    Rational::integer(n)
}

fn cd(sig: &CdSignature, c: &[i64]) -> CdScalar {
    CdScalar::new(c.iter().map(|&x| r(x)).collect(), sig.clone()).unwrap()
}

fn signatures() -> Vec<(&'static str, CdSignature)> {
    vec![
        ("reals", CdSignature::reals()),
        ("complex", CdSignature::complex()),
        ("split_complex", CdSignature::split_complex()),
        ("quaternion", CdSignature::quaternion()),
        ("split_quaternion", CdSignature::split_quaternion()),
        ("octonion", CdSignature::octonion()),
        ("split_octonion", CdSignature::split_octonion()),
    ]
}

fn random(sig: &CdSignature, rng: &mut ChaCha8Rng) -> CdScalar {
    let c = (0..sig.dim())
        .map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
        .collect();
    CdScalar::new(c, sig.clone()).unwrap()
}

#[test]
fn norm_is_multiplicative_on_ten_thousand_pairs() {
    for (name, sig) in signatures() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let a = random(&sig, &mut rng);
            let b = random(&sig, &mut rng);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.norm(), a.norm() * &b.norm(), "{name}: {a:?} {b:?}");
        }
    }
}

#[test]
fn alternative_laws_and_conjugation() {
    for (name, sig) in signatures() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let a = random(&sig, &mut rng);
            let b = random(&sig, &mut rng);
            let aa = a.mul(&a).unwrap();
            assert_eq!(aa.mul(&b).unwrap(), a.mul(&a.mul(&b).unwrap()).unwrap(), "{name}: left alternative");
            let bb = b.mul(&b).unwrap();
            assert_eq!(a.mul(&bb).unwrap(), a.mul(&b).unwrap().mul(&b).unwrap(), "{name}: right alternative");
            assert_eq!(a.mul(&b).unwrap().conj(), b.conj().mul(&a.conj()).unwrap(), "{name}: conj");
            assert_eq!(a.conj().conj(), a);
            // a ā = N(a)
            assert_eq!(a.mul(&a.conj()).unwrap(), CdScalar::real(&sig, a.norm()), "{name}: a conj(a)");
        }
    }
}

#[test]
fn quaternion_units() {
    let h = CdSignature::quaternion();
    let (i, j, k) = (CdScalar::unit(&h, 1), CdScalar::unit(&h, 2), CdScalar::unit(&h, 3));
    assert_eq!(i.mul(&j).unwrap(), k);
    assert_eq!(j.mul(&i).unwrap(), k.scale(&r(-1)));
    let minus_one = CdScalar::real(&h, r(-1));
    for u in [&i, &j, &k] {
        assert_eq!(u.mul(u).unwrap(), minus_one);
        assert_eq!(u.conj(), u.scale(&r(-1)));
    }
    assert_eq!(cd(&h, &[1, 1, 1, 1]).norm(), r(4));
}

#[test]
fn split_complex_has_null_vectors() {
    let s = CdSignature::split_complex();
    let e: CdScalar = CdScalar::unit(&s, 1);
    assert_eq!(e.mul(&e).unwrap(), CdScalar::one(&s));
    assert_eq!(cd(&s, &[1, 1]).norm(), r(0));
    assert_eq!(cd(&s, &[3, 1]).norm(), r(8));
}

#[test]
fn octonions_are_not_associative() {
    let o = CdSignature::octonion();
    let (a, b, c) = (CdScalar::unit(&o, 1), CdScalar::unit(&o, 2), CdScalar::unit(&o, 4));
    let left = a.mul(&b).unwrap().mul(&c).unwrap();
    let right = a.mul(&b.mul(&c).unwrap()).unwrap();
    assert_eq!(left, right.scale(&r(-1)));
}

#[test]
fn mixed_signatures_are_rejected() {
    let a = CdScalar::<Rational>::one(&CdSignature::quaternion());
    let b = CdScalar::one(&CdSignature::split_quaternion());
    assert!(a.mul(&b).is_err());
    assert!(a.add(&b).is_err());
    assert!(CdScalar::new(vec![r(1), r(2)], CdSignature::quaternion()).is_err());
}

/// 2×2 real matrix as a row-major array.
type M2 = [Rational; 4];

fn m2_mul(a: &M2, b: &M2) -> M2 {
    [
        a[0].clone() * &b[0] + &(a[1].clone() * &b[2]),
        a[0].clone() * &b[1] + &(a[1].clone() * &b[3]),
        a[2].clone() * &b[0] + &(a[3].clone() * &b[2]),
        a[2].clone() * &b[1] + &(a[3].clone() * &b[3]),
    ]
}

/// Anticommuting real 2×2 matrix squaring to `γ`.
fn generator(gamma: i8, first: bool) -> M2 {
    match (gamma, first) {
        (-1, _) => [r(0), r(-1), r(1), r(0)],
        (_, true) => [r(1), r(0), r(0), r(-1)],
        (_, false) => [r(0), r(1), r(1), r(0)],
    }
}

/// Split quaternions realized as `M₂(ℝ)`: `e₁ ↦ A`, `e₂ ↦ B`, `e₃ = e₁e₂ ↦ AB`.
fn to_matrix(q: &CdScalar) -> M2 {
    let g = q.sig().gammas();
    let a = generator(g[0], true);
    // If the first generator already took diag(1,−1), the second must anticommute with it.
    let b = if g[0] == -1 && g[1] == 1 { generator(1, true) } else { generator(g[1], false) };
    let ab = m2_mul(&a, &b);
    let c = q.coeffs();
    let mut out = [r(0), r(0), r(0), r(0)];
    for k in 0..4 {
        let id = if k == 0 || k == 3 { r(1) } else { r(0) };
        out[k] = c[0].clone() * &id + &(c[1].clone() * &a[k]) + &(c[2].clone() * &b[k]) + &(c[3].clone() * &ab[k]);
    }
    out
}

#[test]
fn split_quaternions_are_two_by_two_matrices() {
    let s = CdSignature::split_quaternion();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let a = random(&s, &mut rng);
        let b = random(&s, &mut rng);
        let (ma, mb) = (to_matrix(&a), to_matrix(&b));
        assert_eq!(to_matrix(&a.mul(&b).unwrap()), m2_mul(&ma, &mb));
        // Norm is the determinant and conjugation is the adjugate.
        assert_eq!(a.norm(), ma[0].clone() * &ma[3] - &(ma[1].clone() * &ma[2]));
        let adj = [ma[3].clone(), -ma[1].clone(), -ma[2].clone(), ma[0].clone()];
        assert_eq!(to_matrix(&a.conj()), adj);
    }
}

proptest! {
    #[test]
    fn one_is_a_two_sided_unit(c in prop::collection::vec(-50i64..50, 8), idx in 0usize..7) {
        let (_, sig) = signatures().swap_remove(idx);
        let a = cd(&sig, &c[..sig.dim()]);
        let one = CdScalar::one(&sig);
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn float_norm_is_multiplicative(a in prop::collection::vec(-2.0f64..2.0, 8), b in prop::collection::vec(-2.0f64..2.0, 8)) {
        let sig = CdSignature::split_octonion();
        let x = CdScalar::new(a, sig.clone()).unwrap();
        let y = CdScalar::new(b, sig).unwrap();
        let lhs = x.mul(&y).unwrap().norm();
        let rhs = x.norm() * y.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }
}
