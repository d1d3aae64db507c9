//! Matrix realizations over composition algebras: a real basis of matrices,
//! a twisted symmetrized product, and coordinate extraction.

use num_traits::{One, Zero};

use crate::composition::{CdScalar, CdSignature};
use crate::jordan::{JordanAlgebra, JordanError};
use crate::linalg::Mat;
use crate::rational::Rational;

type Cd = CdScalar<Rational>;

const UNIT_NAMES: [&str; 8] = ["", "i", "j", "k", "l", "il", "jl", "kl"];

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct CdMat {
    m: usize,
    sig: CdSignature,
    e: Vec<Cd>,
}

impl CdMat {
    pub fn zero(m: usize, sig: &CdSignature) -> Self {
        CdMat { m, sig: sig.clone(), e: vec![Cd::zero(sig); m * m] }
    }

    pub fn identity(m: usize, sig: &CdSignature) -> Self {
        Self::real_diag(sig, &vec![1; m])
    }

    pub fn real_diag(sig: &CdSignature, diag: &[i64]) -> Self {
        let mut x = Self::zero(diag.len(), sig);
        for (i, d) in diag.iter().enumerate() {
            x.e[i * x.m + i] = Cd::real(sig, Rational::integer(*d));
        }
        x
    }

    pub fn get(&self, i: usize, j: usize) -> &Cd {
        &self.e[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cd) {
        self.e[i * self.m + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.m;
        let mut out = Self::zero(m, &self.sig);
        for i in 0..m {
            for k in 0..m {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..m {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.mul_unchecked(b);
                    out.e[i * m + j] = out.e[i * m + j].add(&p).expect("same signature");
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        CdMat { m: self.m, sig: self.sig.clone(), e: self.e.iter().zip(&o.e).map(|(a, b)| a.add(b).unwrap()).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        CdMat { m: self.m, sig: self.sig.clone(), e: self.e.iter().map(|a| a.scale(s)).collect() }
    }

    /// `½ (X T Y + Y T X)`, evaluated left to right.
    pub fn twisted_product(&self, t: &Self, o: &Self) -> Self {
        self.mul(t).mul(o).add(&o.mul(t).mul(self)).scale(&Rational::new(1, 2))
    }

    /// Real matrix of a matrix with real entries.
    pub fn to_real(&self) -> Mat<Rational> {
        assert_eq!(self.sig.doublings(), 0);
        Mat::from_fn(self.m, self.m, |i, j| self.get(i, j).re().clone())
    }

    /// Real `(m·d) × (m·d)` matrix of `v ↦ X v` on column vectors with
    /// entries in the composition algebra of dimension `d`.
    pub fn left_regular(&self) -> Mat<Rational> {
        let d = self.sig.dim();
        let m = self.m;
        let mut out = Mat::zeros(m * d, m * d);
        for i in 0..m {
            for j in 0..m {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for s in 0..d {
                    let img = a.mul_unchecked(&Cd::unit(&self.sig, s));
                    for (r, c) in img.coeffs().iter().enumerate() {
                        out[(i * d + r, j * d + s)] = c.clone();
                    }
                }
            }
        }
        out
    }
}

/// A real Jordan algebra realized on a space of matrices.
#[derive(Clone, Debug)]
pub(crate) struct Realization {
    pub m: usize,
    pub sig: CdSignature,
    pub basis: Vec<CdMat>,
    pub labels: Vec<String>,
    pub twist: CdMat,
    /// Position `(row, col, component)` that reads off each coordinate.
    probes: Vec<(usize, usize, usize)>,
}

impl Realization {
    fn new(m: usize, sig: CdSignature, basis: Vec<CdMat>, labels: Vec<String>, twist: CdMat) -> Self {
        let d = sig.dim();
        let probes = basis
            .iter()
            .map(|b| {
                let pos = (0..m * m * d)
                    .find(|&p| !b.e[p / d].coeffs()[p % d].is_zero())
                    .expect("zero basis matrix");
                (pos / d / m, pos / d % m, pos % d)
            })
            .collect();
        Realization { m, sig, basis, labels, twist, probes }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self, u: &[Rational]) -> CdMat {
        let mut x = CdMat::zero(self.m, &self.sig);
        for (c, b) in u.iter().zip(&self.basis) {
            if !c.is_zero() {
                x = x.add(&b.scale(c));
            }
        }
        x
    }

    /// Coordinates of a matrix in the span; errors if it lies outside.
    pub fn coords(&self, x: &CdMat) -> Result<Vec<Rational>, JordanError> {
        let u: Vec<Rational> = self.probes.iter().map(|&(i, j, c)| x.get(i, j).coeffs()[c].clone()).collect();
        if self.matrix(&u) != *x {
            return Err(JordanError::Invalid("matrix product left the realized subspace".into()));
        }
        Ok(u)
    }

    pub fn product(&self, x: &CdMat, y: &CdMat) -> CdMat {
        x.twisted_product(&self.twist, y)
    }

    pub fn algebra(&self, name: &str) -> Result<JordanAlgebra<Rational>, JordanError> {
        let n = self.dim();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(self.coords(&self.product(&self.basis[i], &self.basis[j]))?);
            }
        }
        JordanAlgebra::from_fn(name, self.labels.clone(), |i, j| table[i * n + j].clone())
    }
}

fn entry(m: usize, sig: &CdSignature, i: usize, j: usize, unit: usize, coef: i64) -> CdMat {
    let mut x = CdMat::zero(m, sig);
    x.set(i, j, Cd::unit(sig, unit).scale(&Rational::integer(coef)));
    x
}

fn unit_label(u: usize) -> &'static str {
    UNIT_NAMES[u]
}

fn label(i: usize, j: usize, u: usize) -> String {
    let name = unit_label(u);
    if name.is_empty() {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{}{}.{name}", i + 1, j + 1)
    }
}

/// All `m × m` matrices.
pub(crate) fn full(m: usize, sig: CdSignature) -> Realization {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for u in 0..sig.dim() {
                basis.push(entry(m, &sig, i, j, u, 1));
                labels.push(label(i, j, u));
            }
        }
    }
    let twist = CdMat::identity(m, &sig);
    Realization::new(m, sig, basis, labels, twist)
}

/// Hermitian matrices `X* = X` with product `½ (X Γ Y + Y Γ X)`.
pub(crate) fn hermitian(m: usize, sig: CdSignature, gamma: &[i64]) -> Realization {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for i in 0..m {
        basis.push(entry(m, &sig, i, i, 0, 1));
        labels.push(label(i, i, 0));
    }
    for i in 0..m {
        for j in i + 1..m {
            for u in 0..sig.dim() {
                let mut x = entry(m, &sig, i, j, u, 1);
                x.set(j, i, Cd::unit(&sig, u).conj());
                basis.push(x);
                labels.push(label(i, j, u));
            }
        }
    }
    let twist = CdMat::real_diag(&sig, gamma);
    Realization::new(m, sig, basis, labels, twist)
}

/// Skew-Hermitian matrices `X* = −X` with product `½ (X T Y + Y T X)`.
pub(crate) fn skew_hermitian(m: usize, sig: CdSignature, twist: CdMat) -> Realization {
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for i in 0..m {
        for u in 1..sig.dim() {
            basis.push(entry(m, &sig, i, i, u, 1));
            labels.push(label(i, i, u));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            for u in 0..sig.dim() {
                let mut x = entry(m, &sig, i, j, u, 1);
                x.set(j, i, Cd::unit(&sig, u).conj().scale(&Rational::integer(-1)));
                basis.push(x);
                labels.push(label(i, j, u));
            }
        }
    }
    Realization::new(m, sig, basis, labels, twist)
}

/// `J = [[0, I], [−I, 0]]` of size `2m`.
pub(crate) fn symplectic_j(m: usize) -> CdMat {
    let sig = CdSignature::reals();
    let mut j = CdMat::zero(2 * m, &sig);
    for i in 0..m {
        j.set(i, m + i, Cd::one(&sig));
        j.set(m + i, i, Cd::real(&sig, Rational::integer(-1)));
    }
    j
}

/// Skew-symmetric `2m × 2m` real matrices with `X∘Y = ½ (XJY + YJX)`.
pub(crate) fn skew_symmetric_j(m: usize) -> Realization {
    skew_hermitian(2 * m, CdSignature::reals(), symplectic_j(m))
}

/// Quaternionic skew-Hermitian matrices with `X∘Y = ½ (X q⁻¹ Y + Y q⁻¹ X)`,
/// `q = i·I`.
pub(crate) fn skew_hermitian_quaternion(m: usize) -> Realization {
    let sig = CdSignature::quaternion();
    let mut qinv = CdMat::zero(m, &sig);
    for i in 0..m {
        qinv.set(i, i, Cd::unit(&sig, 1).scale(&Rational::integer(-1)));
    }
    skew_hermitian(m, sig, qinv)
}

/// Determinant of a square matrix over ℝ or ℂ (signature length ≤ 1),
/// returned as a scalar of the same signature.
pub(crate) fn commutative_det(x: &CdMat) -> Cd {
    assert!(x.sig.doublings() <= 1 && x.sig.gammas().iter().all(|g| *g < 0));
    let m = x.m;
    let mut a = x.clone();
    let mut det = Cd::one(&x.sig);
    for c in 0..m {
        let Some(p) = (c..m).find(|&i| !a.get(i, c).is_zero()) else {
            return Cd::zero(&x.sig);
        };
        if p != c {
            for j in 0..m {
                a.e.swap(p * m + j, c * m + j);
            }
            det = det.scale(&Rational::integer(-1));
        }
        let piv = a.get(c, c).clone();
        det = det.mul_unchecked(&piv);
        let inv = piv.conj().scale(&(Rational::one() / piv.norm()));
        for i in c + 1..m {
            if a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).mul_unchecked(&inv);
            for j in c..m {
                let t = f.mul_unchecked(a.get(c, j));
                let v = a.get(i, j).sub(&t).unwrap();
                a.set(i, j, v);
            }
        }
    }
    det
}
