//! Cayley–Dickson composition algebras: ℝ, ℂ, ℍ, 𝕆 and their split forms.
//!
//! Doubling rule, for `γ = ±1`:
//!
//! ```text
//! (x, y)(u, v) = (xu + γ·v̄y, vx + yū),   conj(x, y) = (x̄, -y)
//! N(x, y) = N(x) - γ N(y)
//! ```
//!
//! `γ = -1` is the division doubling and `γ = +1` the split one. A scalar
//! with `k` doublings stores `2^k` coefficients; the first half is `x`, the
//! second half `y`. With all gammas equal to `-1` the induced quaternion basis
//! is `1, i, j, k` with `i = (i, 0)`, `j = (0, 1)`, `k = (0, i)` and `ij = k`;
//! the octonion units are `e_0..e_7` where `e_{4+a} = (0, e_a)`.

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CdError {
    #[error("signature mismatch: {left:?} vs {right:?}")]
    SignatureMismatch { left: Vec<i8>, right: Vec<i8> },
    #[error("invalid signature {0:?}: at most 3 entries, each +1 or -1")]
    InvalidSignature(Vec<i8>),
    #[error("expected {expected} coefficients for signature {sig:?}, got {got}")]
    WrongLength { sig: Vec<i8>, expected: usize, got: usize },
}

/// Doubling parameters, outermost last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CdSignature {
    gammas: Vec<i8>,
}

impl CdSignature {
    pub fn new(gammas: Vec<i8>) -> Result<Self, CdError> {
        if gammas.len() > 3 || gammas.iter().any(|g| *g != 1 && *g != -1) {
            return Err(CdError::InvalidSignature(gammas));
        }
        Ok(CdSignature { gammas })
    }

    pub fn reals() -> Self {
        CdSignature { gammas: vec![] }
    }
    pub fn complex() -> Self {
        CdSignature { gammas: vec![-1] }
    }
    pub fn split_complex() -> Self {
        CdSignature { gammas: vec![1] }
    }
    pub fn quaternion() -> Self {
        CdSignature { gammas: vec![-1, -1] }
    }
    pub fn split_quaternion() -> Self {
        CdSignature { gammas: vec![-1, 1] }
    }
    pub fn octonion() -> Self {
        CdSignature { gammas: vec![-1, -1, -1] }
    }
    pub fn split_octonion() -> Self {
        CdSignature { gammas: vec![-1, -1, 1] }
    }

    pub fn gammas(&self) -> &[i8] {
        &self.gammas
    }

    pub fn doublings(&self) -> usize {
        self.gammas.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.gammas.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdScalar<S = Rational> {
    coeffs: Vec<S>,
    sig: CdSignature,
}

impl<S: Scalar> CdScalar<S> {
    pub fn new(coeffs: Vec<S>, sig: CdSignature) -> Result<Self, CdError> {
        if coeffs.len() != sig.dim() {
            return Err(CdError::WrongLength { sig: sig.gammas.clone(), expected: sig.dim(), got: coeffs.len() });
        }
        Ok(CdScalar { coeffs, sig })
    }

    pub fn zero(sig: &CdSignature) -> Self {
        CdScalar { coeffs: vec![S::zero(); sig.dim()], sig: sig.clone() }
    }

    pub fn one(sig: &CdSignature) -> Self {
        Self::unit(sig, 0)
    }

    /// The `idx`-th basis unit.
    pub fn unit(sig: &CdSignature, idx: usize) -> Self {
        let mut z = Self::zero(sig);
        z.coeffs[idx] = S::one();
        z
    }

    pub fn real(sig: &CdSignature, r: S) -> Self {
        let mut z = Self::zero(sig);
        z.coeffs[0] = r;
        z
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn sig(&self) -> &CdSignature {
        &self.sig
    }

    pub fn re(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero_exact)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CdError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        CdScalar { coeffs: mul_rec(&self.coeffs, &other.coeffs, &self.sig.gammas), sig: self.sig.clone() }
    }

    pub fn conj(&self) -> Self {
        let mut c = self.coeffs.clone();
        for x in c.iter_mut().skip(1) {
            *x = -x.clone();
        }
        CdScalar { coeffs: c, sig: self.sig.clone() }
    }

    /// Norm form `Re(a·ā)`.
    pub fn norm(&self) -> S {
        norm_rec(&self.coeffs, &self.sig.gammas)
    }

    pub fn add(&self, other: &Self) -> Result<Self, CdError> {
        self.check(other)?;
        Ok(CdScalar {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b).collect(),
            sig: self.sig.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CdError> {
        self.check(other)?;
        Ok(CdScalar {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b).collect(),
            sig: self.sig.clone(),
        })
    }

    pub fn scale(&self, s: &S) -> Self {
        CdScalar { coeffs: self.coeffs.iter().map(|a| a.clone() * s).collect(), sig: self.sig.clone() }
    }

    fn check(&self, other: &Self) -> Result<(), CdError> {
        if self.sig != other.sig {
            return Err(CdError::SignatureMismatch { left: self.sig.gammas.clone(), right: other.sig.gammas.clone() });
        }
        Ok(())
    }
}

fn conj_slice<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().enumerate().map(|(i, x)| if i == 0 { x.clone() } else { -x.clone() }).collect()
}

fn add_slices<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

fn mul_rec<S: Scalar>(a: &[S], b: &[S], gammas: &[i8]) -> Vec<S> {
    let Some((&gamma, inner)) = gammas.split_last() else {
        return vec![a[0].clone() * &b[0]];
    };
    let h = a.len() / 2;
    let (x, y) = a.split_at(h);
    let (u, v) = b.split_at(h);
    let xu = mul_rec(x, u, inner);
    let mut vby = mul_rec(&conj_slice(v), y, inner);
    if gamma < 0 {
        for t in vby.iter_mut() {
            *t = -t.clone();
        }
    }
    let vx = mul_rec(v, x, inner);
    let yub = mul_rec(y, &conj_slice(u), inner);
    let mut out = add_slices(&xu, &vby);
    out.extend(add_slices(&vx, &yub));
    out
}

fn norm_rec<S: Scalar>(a: &[S], gammas: &[i8]) -> S {
    let Some((&gamma, inner)) = gammas.split_last() else {
        return a[0].clone() * &a[0];
    };
    let (x, y) = a.split_at(a.len() / 2);
    let nx = norm_rec(x, inner);
    let ny = norm_rec(y, inner);
    if gamma < 0 { nx + ny } else { nx - ny }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use proptest::prelude::*;

    fn q(v: &[i64], sig: &CdSignature) -> CdScalar<Rational> {
        CdScalar::new(v.iter().map(|&x| Rational::integer(x)).collect(), sig.clone()).unwrap()
    }

    fn all_sigs() -> Vec<CdSignature> {
        let mut out = vec![CdSignature::reals()];
        for k in 1..=3usize {
            for mask in 0..(1 << k) {
                let g = (0..k).map(|b| if mask >> b & 1 == 1 { 1 } else { -1 }).collect();
                out.push(CdSignature::new(g).unwrap());
            }
        }
        out
    }

    #[test]
    fn quaternion_table() {
        let h = CdSignature::quaternion();
        let (i, j, k) = (CdScalar::<Rational>::unit(&h, 1), CdScalar::unit(&h, 2), CdScalar::unit(&h, 3));
        assert_eq!(i.mul(&j).unwrap(), k);
        assert_eq!(j.mul(&k).unwrap(), i);
        assert_eq!(k.mul(&i).unwrap(), j);
        assert_eq!(j.mul(&i).unwrap(), k.scale(&Rational::integer(-1)));
        assert_eq!(i.mul(&i).unwrap(), CdScalar::real(&h, Rational::integer(-1)));
        assert_eq!(i.conj(), i.scale(&Rational::integer(-1)));
        assert_eq!(q(&[1, 1, 1, 1], &h).norm(), Rational::integer(4));
    }

    #[test]
    fn split_complex_null_element() {
        let s = CdSignature::split_complex();
        assert_eq!(q(&[1, 1], &s).norm(), Rational::integer(0));
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = CdScalar::<Rational>::one(&CdSignature::quaternion());
        let b = CdScalar::<Rational>::one(&CdSignature::split_quaternion());
        assert!(matches!(a.mul(&b), Err(CdError::SignatureMismatch { .. })));
        assert!(CdSignature::new(vec![1, 0]).is_err());
        assert!(CdScalar::new(vec![Rational::integer(1)], CdSignature::complex()).is_err());
    }

    /// Split quaternion `a + b i + c j + d k` as the real 2×2 matrix
    /// `[[a + c, d - b], [b + d, a - c]]`.
    fn split_quat_matrix(z: &CdScalar<Rational>) -> Mat<Rational> {
        let c = z.coeffs();
        Mat::from_rows(vec![
            vec![c[0].clone() + &c[2], c[3].clone() - &c[1]],
            vec![c[1].clone() + &c[3], c[0].clone() - &c[2]],
        ])
    }

    proptest! {
        #[test]
        fn split_quaternions_are_2x2_matrices(a in proptest::collection::vec(-9i64..=9, 4), b in proptest::collection::vec(-9i64..=9, 4)) {
            let s = CdSignature::split_quaternion();
            let (x, y) = (q(&a, &s), q(&b, &s));
            let (mx, my) = (split_quat_matrix(&x), split_quat_matrix(&y));
            prop_assert_eq!(split_quat_matrix(&x.mul(&y).unwrap()), mx.mul(&my));
            // conjugation is the adjugate (d, -b; -c, a)
            let adj = Mat::from_rows(vec![
                vec![mx[(1, 1)].clone(), -mx[(0, 1)].clone()],
                vec![-mx[(1, 0)].clone(), mx[(0, 0)].clone()],
            ]);
            prop_assert_eq!(split_quat_matrix(&x.conj()), adj);
            prop_assert_eq!(x.norm(), mx.det());
        }

        #[test]
        fn composition_alternativity_and_conjugation(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for sig in all_sigs() {
                let mut draw = || {
                    let v: Vec<i64> = (0..sig.dim()).map(|_| rng.gen_range(-5..=5)).collect();
                    q(&v, &sig)
                };
                let (a, b) = (draw(), draw());
                let ab = a.mul(&b).unwrap();
                prop_assert_eq!(ab.norm(), a.norm() * b.norm());
                prop_assert_eq!(a.mul(&ab).unwrap(), a.mul(&a).unwrap().mul(&b).unwrap());
                prop_assert_eq!(ab.mul(&b).unwrap(), a.mul(&b.mul(&b).unwrap()).unwrap());
                prop_assert_eq!(ab.conj(), b.conj().mul(&a.conj()).unwrap());
                prop_assert_eq!(a.conj().conj(), a.clone());
                prop_assert_eq!(a.mul(&a.conj()).unwrap(), CdScalar::real(&sig, a.norm()));
                prop_assert_eq!(a.mul(&CdScalar::one(&sig)).unwrap(), a.clone());
            }
        }
    }
}
