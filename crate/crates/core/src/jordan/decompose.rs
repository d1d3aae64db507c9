//! Splitting a semi-simple algebra into simple ideals through primitive
//! central idempotents.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::{Element, JordanAlgebra, JordanError, DEFAULT_SEED};
use crate::linalg::{Insert, SpanBasis};
use crate::scalar::{Mode, Scalar};

const MAX_DRAWS: u64 = 8;

/// A simple ideal together with its basis in the parent's coordinates.
#[derive(Debug, Clone)]
pub struct Ideal<S> {
    pub algebra: JordanAlgebra<S>,
    pub basis: Vec<Element<S>>,
    /// The ideal's unity, a primitive central idempotent of the parent.
    pub idempotent: Element<S>,
}

/// Dense polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
struct Poly<S>(Vec<S>);

impl<S: Scalar> Poly<S> {
    fn new(mut c: Vec<S>) -> Self {
        while c.last().is_some_and(|x| x.is_negligible(1.0)) {
            c.pop();
        }
        Poly(c)
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![S::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j].mul_add_assign(a, b);
            }
        }
        Poly::new(out)
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let get = |p: &Self, i: usize| p.0.get(i).cloned().unwrap_or_else(S::zero);
        Poly::new((0..n).map(|i| get(self, i) - get(o, i)).collect())
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly(vec![]), self.clone());
        }
        let mut q = vec![S::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / &lead;
            for (j, x) in d.0.iter().enumerate() {
                let t = c.clone() * x;
                r[k + j] -= &t;
            }
            r[k + dd] = S::zero();
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// `(g, s, t)` with `s a + t b = g = gcd(a, b)`.
    fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly(vec![S::one()]), Poly(vec![]));
        let (mut t0, mut t1) = (Poly(vec![]), Poly(vec![S::one()]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        (r0, s0, t0)
    }

    /// Roots as `(re, im)` pairs from the companion matrix.
    fn float_roots(&self) -> Vec<(f64, f64)> {
        let d = self.degree().unwrap_or(0);
        if d == 0 {
            return vec![];
        }
        let lead = self.0[d].to_f64();
        let mut comp = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            comp[(i, d - 1)] = -self.0[i].to_f64() / lead;
        }
        comp.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
    }
}

/// Splits a squarefree polynomial into linear factors (rational roots) and
/// quadratic factors (conjugate pairs), recovering each factor from float
/// roots and confirming it by exact division.
fn factor<S: Scalar>(m: &Poly<S>) -> Option<Vec<Poly<S>>> {
    let roots = m.float_roots();
    let scale = roots.iter().map(|r| r.0.hypot(r.1)).fold(1.0, f64::max);
    let mut factors = Vec::new();
    let mut rest = m.clone();
    for &(re, im) in &roots {
        let f = if im.abs() <= 1e-7 * scale {
            let r = S::approx_from_f64(re)?;
            Poly::new(vec![-r, S::one()])
        } else if im > 0.0 {
            let b = S::approx_from_f64(-2.0 * re)?;
            let c = S::approx_from_f64(re * re + im * im)?;
            Poly::new(vec![c, b, S::one()])
        } else {
            continue;
        };
        let (q, r) = rest.div_rem(&f);
        let exact = match S::MODE {
            Mode::Rational => r.is_zero(),
            Mode::Float => r.0.iter().all(|x| x.magnitude() <= 1e-8 * scale.powi(m.0.len() as i32)),
        };
        if !exact {
            return None;
        }
        rest = q;
        factors.push(f);
    }
    (rest.degree() == Some(0)).then_some(factors)
}

impl<S: Scalar> JordanAlgebra<S> {
    /// Simple ideals `V_1, …, V_r` with `V = ⊕ V_α` and `V_α ∘ V_β = 0`.
    pub fn decompose(&self) -> Result<Vec<Ideal<S>>, JordanError> {
        self.require_semisimple()?;
        let e = self.require_unity()?.clone();
        let n = self.dim();
        let center = self.center();
        let c = center.len();
        if c == 1 {
            return Ok(vec![Ideal {
                algebra: self.clone(),
                basis: (0..n).map(|i| self.basis_vector(i)).collect(),
                idempotent: e,
            }]);
        }
        let mut last_err = String::from("no generic central element found");
        for draw in 0..MAX_DRAWS {
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ (draw + 1).wrapping_mul(0x9e37_79b9));
            let mut z = vec![S::zero(); n];
            for b in &center {
                let r = S::from_i64(rng.gen_range(-7..=7));
                for (zi, bi) in z.iter_mut().zip(b) {
                    zi.mul_add_assign(&r, bi);
                }
            }
            match self.split_with(&z, &e, c) {
                Ok(ideals) => return Ok(ideals),
                Err(msg) => last_err = msg,
            }
        }
        Err(JordanError::Decomposition(format!("{last_err} after {MAX_DRAWS} draws")))
    }

    fn split_with(&self, z: &[S], e: &[S], center_dim: usize) -> Result<Vec<Ideal<S>>, String> {
        let n = self.dim();
        // Minimal polynomial of z from the first dependency among its powers.
        let mut powers = vec![e.to_vec()];
        let mut span = SpanBasis::with_tracking(n);
        let minpoly = loop {
            let p = powers.last().unwrap().clone();
            match span.insert(&p) {
                Insert::Added { .. } => powers.push(self.product(z, &p)),
                Insert::Dependent { coeffs } => {
                    let mut m: Vec<S> = coeffs.into_iter().map(|x| -x).collect();
                    m.push(S::one());
                    break Poly::new(m);
                }
            }
        };
        let d = minpoly.degree().unwrap_or(0);
        if d < center_dim {
            return Err(format!("central element not generic (minimal polynomial degree {d} < {center_dim})"));
        }
        let factors = factor(&minpoly).ok_or("minimal polynomial has no rational factorization")?;
        let eval = |q: &Poly<S>| {
            let mut out = vec![S::zero(); n];
            for (k, qk) in q.0.iter().enumerate() {
                for (o, x) in out.iter_mut().zip(&powers[k]) {
                    o.mul_add_assign(qk, x);
                }
            }
            out
        };
        let mut ideals = Vec::new();
        for (idx, f) in factors.iter().enumerate() {
            let (g, _) = minpoly.div_rem(f);
            let (gcd, s, _) = Poly::ext_gcd(&g, f);
            if gcd.degree() != Some(0) {
                return Err("repeated factor in minimal polynomial".into());
            }
            let inv = S::one() / &gcd.0[0];
            let q = s.mul(&g).div_rem(&minpoly).1.mul(&Poly(vec![inv]));
            let eps = eval(&q);
            let t = self.t_operator(&eps);
            let mut basis_span = SpanBasis::new(n);
            let mut basis = Vec::new();
            for j in 0..n {
                let col = t.col(j);
                if matches!(basis_span.insert(&col), Insert::Added { .. }) {
                    basis.push(col);
                }
            }
            let name = format!("{}[{idx}]", self.name());
            let alg = self.subalgebra(name, &basis).map_err(|err| err.to_string())?;
            ideals.push(Ideal { algebra: alg, basis, idempotent: eps });
        }
        let total: usize = ideals.iter().map(|i| i.basis.len()).sum();
        if total != n {
            return Err(format!("ideal dimensions sum to {total}, expected {n}"));
        }
        for a in 0..ideals.len() {
            for b in a + 1..ideals.len() {
                for u in &ideals[a].basis {
                    for v in &ideals[b].basis {
                        let p = self.product(u, v);
                        if !p.iter().all(|x| x.is_negligible(1.0)) {
                            return Err(format!("ideals {a} and {b} do not annihilate each other"));
                        }
                    }
                }
            }
        }
        for (ideal, f) in ideals.iter().zip(&factors) {
            let cdim = ideal.algebra.center().len();
            if Some(cdim) != f.degree() || cdim > 2 {
                return Err(format!("ideal {:?} has a {cdim}-dimensional center", ideal.algebra.name()));
            }
        }
        Ok(ideals)
    }
}
