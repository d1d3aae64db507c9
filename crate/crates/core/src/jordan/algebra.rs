use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::FamilySpec;
use crate::linalg::{kernel_of_images, Mat, SpanBasis};
use crate::rational::Rational;
use crate::scalar::{Mode, Scalar, TOL};

/// Coordinate vector in an algebra's basis.
pub type Element<S = Rational> = Vec<S>;

/// Square matrix acting on an algebra's coordinate space.
pub type LinOp<S = Rational> = Mat<S>;

/// Seed used by every deterministic random sample unless one is supplied.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JordanError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("algebra {0:?} has no unity")]
    NotUnital(String),
    #[error("element is not invertible: det P_v = {det} (v is invertible iff P_v is nondegenerate)")]
    NotInvertible { det: String },
    #[error("inverse failed verification: {0}")]
    InverseCheck(String),
    #[error("algebra {name:?} is not semi-simple: trace form has inertia {inertia:?}")]
    NotSemisimple { name: String, inertia: (usize, usize, usize) },
    #[error("structure tensor is not symmetric at (i, j, k) = ({i}, {j}, {k})")]
    AsymmetricTensor { i: usize, j: usize, k: usize },
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("{0}")]
    Invalid(String),
}

/// Finite-dimensional real commutative algebra given by structure constants
/// `b_i ∘ b_j = Σ_k c[i][j][k] b_k`.
#[derive(Debug, Clone)]
pub struct JordanAlgebra<S = Rational> {
    name: String,
    dim: usize,
    labels: Vec<String>,
    /// Sparse `b_i ∘ b_j`, indexed by `i * dim + j`.
    table: Vec<Vec<(usize, S)>>,
    unity: Option<Element<S>>,
    /// `tr T_{b_k}`.
    traces: Vec<S>,
    family: Option<FamilySpec>,
}

impl<S: Scalar> PartialEq for JordanAlgebra<S> {
    /// Equality of the structure tensors and unity; names and labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.table == other.table && self.unity == other.unity
    }
}

impl<S: Scalar> JordanAlgebra<S> {
    /// Builds an algebra from the product of every pair of basis vectors.
    /// Fails on the first asymmetric entry. The unity is searched for
    /// automatically.
    pub fn from_fn(
        name: impl Into<String>,
        labels: Vec<String>,
        mut product: impl FnMut(usize, usize) -> Vec<S>,
    ) -> Result<Self, JordanError> {
        let dim = labels.len();
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let p = product(i, j);
                if p.len() != dim {
                    return Err(JordanError::DimensionMismatch { expected: dim, got: p.len() });
                }
                table.push(sparse(p));
            }
        }
        Self::from_table(name.into(), labels, table, None)
    }

    /// Builds an algebra from a dense tensor `c[i][j][k]`.
    pub fn from_tensor(name: impl Into<String>, labels: Vec<String>, c: &[Vec<Vec<S>>]) -> Result<Self, JordanError> {
        let dim = labels.len();
        if c.len() != dim {
            return Err(JordanError::DimensionMismatch { expected: dim, got: c.len() });
        }
        for row in c {
            if row.len() != dim {
                return Err(JordanError::DimensionMismatch { expected: dim, got: row.len() });
            }
            if let Some(bad) = row.iter().find(|v| v.len() != dim) {
                return Err(JordanError::DimensionMismatch { expected: dim, got: bad.len() });
            }
        }
        Self::from_fn(name, labels, |i, j| c[i][j].clone())
    }

    fn from_table(
        name: String,
        labels: Vec<String>,
        table: Vec<Vec<(usize, S)>>,
        unity: Option<Element<S>>,
    ) -> Result<Self, JordanError> {
        let dim = labels.len();
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (&table[i * dim + j], &table[j * dim + i]);
                if a != b {
                    let k = first_difference(a, b, dim);
                    return Err(JordanError::AsymmetricTensor { i, j, k });
                }
            }
        }
        let mut traces = vec![S::zero(); dim];
        for (k, t) in traces.iter_mut().enumerate() {
            for j in 0..dim {
                if let Some((_, c)) = table[k * dim + j].iter().find(|(l, _)| *l == j) {
                    *t += c;
                }
            }
        }
        let mut alg = JordanAlgebra { name, dim, labels, table, unity: None, traces, family: None };
        alg.unity = match unity {
            Some(u) => Some(u),
            None => alg.find_unity(),
        };
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    pub fn unity(&self) -> Option<&Element<S>> {
        self.unity.as_ref()
    }

    pub fn require_unity(&self) -> Result<&Element<S>, JordanError> {
        self.unity.as_ref().ok_or_else(|| JordanError::NotUnital(self.name.clone()))
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        self.family.as_ref()
    }

    pub fn with_family(mut self, family: Option<FamilySpec>) -> Self {
        self.family = family;
        self
    }

    /// Sparse product `b_i ∘ b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.table[i * self.dim + j]
    }

    /// Dense `c[i][j][k]`.
    pub fn tensor(&self) -> Vec<Vec<Vec<S>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| dense(self.basis_product(i, j), self.dim)).collect())
            .collect()
    }

    pub fn basis_vector(&self, i: usize) -> Element<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    fn check_len(&self, u: &[S]) -> Result<(), JordanError> {
        if u.len() != self.dim {
            return Err(JordanError::DimensionMismatch { expected: self.dim, got: u.len() });
        }
        Ok(())
    }

    pub fn checked_product(&self, u: &[S], v: &[S]) -> Result<Element<S>, JordanError> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.product(u, v))
    }

    /// `u ∘ v`. Panics on a length mismatch; see [`Self::checked_product`].
    pub fn product(&self, u: &[S], v: &[S]) -> Element<S> {
        assert_eq!(u.len(), self.dim, "dimension mismatch");
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut out = vec![S::zero(); self.dim];
        let vnz: Vec<usize> = (0..self.dim).filter(|&j| !v[j].is_zero_exact()).collect();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero_exact() {
                continue;
            }
            for &j in &vnz {
                let entries = &self.table[i * self.dim + j];
                if entries.is_empty() {
                    continue;
                }
                let coef = ui.clone() * &v[j];
                for (k, c) in entries {
                    out[*k].mul_add_assign(&coef, c);
                }
            }
        }
        out
    }

    pub fn square(&self, u: &[S]) -> Element<S> {
        self.product(u, u)
    }

    /// `T_u`, the multiplication operator `v ↦ u ∘ v`.
    pub fn t_operator(&self, u: &[S]) -> LinOp<S> {
        assert_eq!(u.len(), self.dim, "dimension mismatch");
        let mut m = Mat::<S>::zeros(self.dim, self.dim);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero_exact() {
                continue;
            }
            for j in 0..self.dim {
                for (k, c) in &self.table[i * self.dim + j] {
                    m[(*k, j)].mul_add_assign(ui, c);
                }
            }
        }
        m
    }

    /// `P_u = 2 T_u² − T_{u²}`.
    pub fn p_operator(&self, u: &[S]) -> LinOp<S> {
        let t = self.t_operator(u);
        let t2 = self.t_operator(&self.square(u));
        t.mul(&t).scale(&S::from_i64(2)).sub(&t2)
    }

    /// `(det P_u, tr T_u)`.
    pub fn element_det_trace(&self, u: &[S]) -> (S, S) {
        (self.p_operator(u).det(), self.trace(u))
    }

    /// `tr T_u`.
    pub fn trace(&self, u: &[S]) -> S {
        let mut t = S::zero();
        for (x, tk) in u.iter().zip(&self.traces) {
            if !x.is_zero_exact() && !tk.is_zero_exact() {
                t.mul_add_assign(x, tk);
            }
        }
        t
    }

    /// `tr T_{b_k}` for every basis vector.
    pub fn trace_vector(&self) -> &[S] {
        &self.traces
    }

    /// Trace form `⟨u, v⟩ = tr T_{u∘v}`.
    pub fn trace_form(&self, u: &[S], v: &[S]) -> S {
        self.trace(&self.product(u, v))
    }

    /// Gram matrix of the trace form in the algebra's basis.
    pub fn gram(&self) -> Mat<S> {
        let mut g = Mat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..=i {
                let mut acc = S::zero();
                for (k, c) in self.basis_product(i, j) {
                    acc.mul_add_assign(c, &self.traces[*k]);
                }
                g[(i, j)] = acc.clone();
                g[(j, i)] = acc;
            }
        }
        g
    }

    /// Solves `T_e = I`.
    pub fn find_unity(&self) -> Option<Element<S>> {
        if self.dim == 0 {
            return None;
        }
        // Equations indexed by (j, k): Σ_i e_i c[i][j][k] = δ_jk.
        let n = self.dim;
        let mut a = Mat::zeros(n * n, n);
        let mut b = vec![S::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.basis_product(i, j) {
                    a[(j * n + k, i)] = c.clone();
                }
            }
        }
        for j in 0..n {
            b[j * n + j] = S::one();
        }
        let e = a.solve(&b)?;
        // Float solves may return a least-norm-ish candidate; verify.
        (self.t_operator(&e).sub(&Mat::identity(n)).max_abs() <= TOL.rel * 10.0 || S::MODE == Mode::Rational)
            .then_some(e)
    }

    /// `v⁻¹ = P_v⁻¹ v`, verified by `v ∘ v⁻¹ = e` and `[T_v, T_{v⁻¹}] = 0`.
    ///
    /// Exact mode first tries the minimal polynomial of `v`, which is much
    /// cheaper than eliminating `P_v`, and solves `P_v x = v` otherwise.
    pub fn invert(&self, v: &[S]) -> Result<Element<S>, JordanError> {
        self.check_len(v)?;
        let e = self.require_unity()?.clone();
        if S::MODE == Mode::Rational {
            if let Some(x) = self.inverse_by_powers(v, &e) {
                return self.verify_inverse(v, x, &e, 0.0);
            }
        }
        let p = self.p_operator(v);
        // Exact mode: P_v is singular iff elimination finds no full pivot set.
        if S::MODE == Mode::Float {
            let det = p.det();
            let scale = p.max_abs().max(1.0).powi(self.dim as i32);
            if det.magnitude() <= TOL.singular * scale {
                return Err(JordanError::NotInvertible { det: det.to_string() });
            }
        }
        let x = p.solve_unique(v).ok_or_else(|| JordanError::NotInvertible { det: p.det().to_string() })?;
        let tol = match S::MODE {
            Mode::Rational => 0.0,
            Mode::Float => TOL.rel * 1e3 * (1.0 + p.max_abs()),
        };
        self.verify_inverse(v, x, &e, tol)
    }

    /// `v⁻¹` as a polynomial in `v`: if `m(t) = t^d − Σ c_k t^k` is the
    /// minimal polynomial of `v` and `c_0 ≠ 0`, then
    /// `v⁻¹ = (v^{d−1} − Σ_{k≥1} c_k v^{k−1}) / c_0`. Only the power-associative
    /// case is meaningful; callers verify the result.
    fn inverse_by_powers(&self, v: &[S], e: &[S]) -> Option<Element<S>> {
        let mut span = SpanBasis::with_tracking(self.dim);
        let mut powers = vec![e.to_vec()];
        let coeffs = loop {
            let last = powers.last().unwrap().clone();
            match span.insert(&last) {
                crate::linalg::Insert::Added { .. } => powers.push(self.product(v, &last)),
                crate::linalg::Insert::Dependent { coeffs } => break coeffs,
            }
        };
        let d = coeffs.len();
        if coeffs[0].is_zero_exact() {
            return None;
        }
        let mut x = powers[d - 1].clone();
        for k in 1..d {
            for (o, p) in x.iter_mut().zip(&powers[k - 1]) {
                let t = coeffs[k].clone() * p;
                *o -= &t;
            }
        }
        let inv = S::one() / &coeffs[0];
        Some(x.into_iter().map(|a| a * &inv).collect())
    }

    fn verify_inverse(&self, v: &[S], x: Element<S>, e: &[S], tol: f64) -> Result<Element<S>, JordanError> {
        let prod = self.product(v, &x);
        let dev = prod.iter().zip(e).map(|(a, b)| (a.clone() - b).magnitude()).fold(0.0, f64::max);
        let comm = self.t_operator(v).commutator(&self.t_operator(&x)).max_abs();
        if dev > tol {
            return Err(JordanError::InverseCheck(format!("|v ∘ v⁻¹ - e| = {dev:e}")));
        }
        if comm > tol {
            return Err(JordanError::InverseCheck(format!("|[T_v, T_v⁻¹]| = {comm:e}")));
        }
        Ok(x)
    }

    /// Semi-simplicity (nondegenerate trace form) and the form's inertia
    /// `(positive, negative, zero)`.
    pub fn is_semisimple(&self) -> (bool, (usize, usize, usize)) {
        let inertia = self.gram().inertia();
        (inertia.2 == 0, inertia)
    }

    pub fn require_semisimple(&self) -> Result<(), JordanError> {
        let (ok, inertia) = self.is_semisimple();
        if ok {
            Ok(())
        } else {
            Err(JordanError::NotSemisimple { name: self.name.clone(), inertia })
        }
    }

    /// Whether `v ↦ T_v` is injective.
    pub fn is_nondegenerate(&self) -> bool {
        let images: Vec<Vec<S>> = (0..self.dim).map(|i| self.t_operator(&self.basis_vector(i)).data().to_vec()).collect();
        kernel_of_images(&images).is_empty()
    }

    /// Isotope `u ∘_Γ v = u∘(v∘Γ) + v∘(u∘Γ) − (u∘v)∘Γ`.
    pub fn isotope(&self, gamma: &[S]) -> Result<Self, JordanError> {
        self.check_len(gamma)?;
        self.require_unity()?;
        let n = self.dim;
        let bg: Vec<Element<S>> = (0..n).map(|i| self.product(&self.basis_vector(i), gamma)).collect();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let bi = self.basis_vector(i);
                let bj = self.basis_vector(j);
                let bij = dense(self.basis_product(i, j), n);
                let a = self.product(&bi, &bg[j]);
                let b = self.product(&bj, &bg[i]);
                let c = self.product(&bij, gamma);
                table.push(sparse(a.into_iter().zip(b).zip(c).map(|((x, y), z)| x + &y - &z).collect()));
            }
        }
        let alg = Self::from_table(format!("{}_iso", self.name), self.labels.clone(), table, None)?;
        Ok(alg)
    }

    /// Same algebra with basis `new_basis` (given in old coordinates).
    /// The vectors must be linearly independent and span a subalgebra;
    /// this is also how subalgebras and ideals are extracted.
    pub fn subalgebra(&self, name: impl Into<String>, new_basis: &[Element<S>]) -> Result<Self, JordanError> {
        let m = new_basis.len();
        let mut span = SpanBasis::with_tracking(self.dim);
        for (idx, b) in new_basis.iter().enumerate() {
            self.check_len(b)?;
            if !matches!(span.insert(b), crate::linalg::Insert::Added { .. }) {
                return Err(JordanError::Invalid(format!("basis vector {idx} is linearly dependent")));
            }
        }
        let mut table = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                let p = self.product(&new_basis[i], &new_basis[j]);
                let coords = span
                    .coordinates(&p)
                    .ok_or_else(|| JordanError::Invalid(format!("span is not closed: b_{i} ∘ b_{j} leaves it")))?;
                table.push(sparse(coords));
            }
        }
        let labels = (0..m).map(|i| format!("f{i}")).collect();
        Self::from_table(name.into(), labels, table, None)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn to_f64(&self) -> JordanAlgebra<f64> {
        JordanAlgebra {
            name: self.name.clone(),
            dim: self.dim,
            labels: self.labels.clone(),
            table: self
                .table
                .iter()
                .map(|e| e.iter().map(|(k, c)| (*k, c.to_f64())).collect())
                .collect(),
            unity: self.unity.as_ref().map(|u| u.iter().map(Scalar::to_f64).collect()),
            traces: self.traces.iter().map(Scalar::to_f64).collect(),
            family: self.family.clone(),
        }
    }

    /// Seeded random element with small integer coordinates.
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Element<S> {
        (0..self.dim).map(|_| S::from_i64(rng.gen_range(-3..=3))).collect()
    }

    pub fn random_elements(&self, count: usize, seed: u64) -> Vec<Element<S>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.random_element(&mut rng)).collect()
    }

    /// Basis of the center `{v : [T_v, T_u] = 0 for all u}`.
    pub fn center(&self) -> Vec<Element<S>> {
        let n = self.dim;
        // Candidates start as the full space and are cut down one u = b_j at a time.
        let mut cand: Vec<Element<S>> = (0..n).map(|i| self.basis_vector(i)).collect();
        let bprod: Vec<Vec<Element<S>>> =
            (0..n).map(|i| (0..n).map(|k| dense(self.basis_product(i, k), n)).collect()).collect();
        for j in 0..n {
            if cand.is_empty() {
                break;
            }
            // [T_{b_i}, T_{b_j}] b_k = b_i∘(b_j∘b_k) − b_j∘(b_i∘b_k)
            let images_basis: Vec<Vec<S>> = (0..n)
                .map(|i| {
                    let mut img = Vec::with_capacity(n * n);
                    let bi = self.basis_vector(i);
                    let bj = self.basis_vector(j);
                    for k in 0..n {
                        let a = self.product(&bi, &bprod[j][k]);
                        let b = self.product(&bj, &bprod[i][k]);
                        img.extend(a.into_iter().zip(b).map(|(x, y)| x - &y));
                    }
                    img
                })
                .collect();
            let images: Vec<Vec<S>> = cand
                .iter()
                .map(|c| {
                    let mut acc = vec![S::zero(); n * n];
                    for (ci, img) in c.iter().zip(&images_basis) {
                        if ci.is_zero_exact() {
                            continue;
                        }
                        for (a, x) in acc.iter_mut().zip(img) {
                            if !x.is_zero_exact() {
                                a.mul_add_assign(ci, x);
                            }
                        }
                    }
                    acc
                })
                .collect();
            let ker = kernel_of_images(&images);
            cand = ker
                .iter()
                .map(|k| {
                    let mut v = vec![S::zero(); n];
                    for (kc, c) in k.iter().zip(&cand) {
                        if kc.is_zero_exact() {
                            continue;
                        }
                        for (a, x) in v.iter_mut().zip(c) {
                            a.mul_add_assign(kc, x);
                        }
                    }
                    v
                })
                .collect();
        }
        cand
    }
}

pub(crate) fn sparse<S: Scalar>(v: Vec<S>) -> Vec<(usize, S)> {
    v.into_iter().enumerate().filter(|(_, x)| !x.is_zero_exact()).collect()
}

pub(crate) fn dense<S: Scalar>(v: &[(usize, S)], n: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n];
    for (k, c) in v {
        out[*k] = c.clone();
    }
    out
}

fn first_difference<S: Scalar>(a: &[(usize, S)], b: &[(usize, S)], n: usize) -> usize {
    let (da, db) = (dense(a, n), dense(b, n));
    (0..n).find(|&k| da[k] != db[k]).unwrap_or(0)
}

/// Residual of the Jordan axioms.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct JordanCheck {
    /// Largest `|c[i][j][k] − c[j][i][k]|`.
    pub ja1_max: f64,
    pub ja1_witness: Option<(usize, usize, usize)>,
    /// Largest entry of `[T_u, T_{u²}]` over the sample of `u`, which bounds
    /// `u∘(u²∘v) − u²∘(u∘v)` for every `v` in the sample (and beyond).
    pub ja2_max: f64,
    /// Sample index of `u` and basis index of `v` at the worst residual.
    pub ja2_witness: Option<(usize, usize)>,
    /// Number of `(u, v)` pairs covered.
    pub samples: usize,
    pub seed: u64,
    pub pass: bool,
}

impl<S: Scalar> JordanAlgebra<S> {
    /// Checks commutativity on all basis pairs and the Jordan identity for
    /// `u` in the basis plus five seeded random elements, against every `v`.
    pub fn check_jordan(&self) -> JordanCheck {
        self.check_jordan_seeded(DEFAULT_SEED)
    }

    pub fn check_jordan_seeded(&self, seed: u64) -> JordanCheck {
        let n = self.dim;
        let mut ja1_max = 0.0;
        let mut ja1_witness = None;
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (dense(self.basis_product(i, j), n), dense(self.basis_product(j, i), n));
                for k in 0..n {
                    let d = (a[k].clone() - &b[k]).magnitude();
                    if d > ja1_max || (ja1_witness.is_none() && !(a[k] == b[k])) {
                        ja1_max = d;
                        ja1_witness = Some((i, j, k));
                    }
                }
            }
        }
        let mut sample: Vec<Element<S>> = (0..n).map(|i| self.basis_vector(i)).collect();
        sample.extend(self.random_elements(5, seed));
        let mut ja2_max = 0.0;
        let mut ja2_witness = None;
        for (s, u) in sample.iter().enumerate() {
            let tu = self.t_operator(u);
            let tu2 = self.t_operator(&self.square(u));
            let c = tu.commutator(&tu2);
            let scale = tu.max_abs() * tu2.max_abs();
            for j in 0..n {
                for k in 0..n {
                    let x = &c[(k, j)];
                    let exact_nonzero = !x.is_zero_exact() && S::MODE == Mode::Rational;
                    let d = x.magnitude() / scale.max(1.0);
                    if d > ja2_max || (exact_nonzero && ja2_witness.is_none()) {
                        ja2_max = d.max(ja2_max);
                        ja2_witness = Some((s, j));
                    }
                }
            }
        }
        let pass = match S::MODE {
            Mode::Rational => ja1_witness.is_none() && ja2_witness.is_none(),
            Mode::Float => ja1_max <= TOL.rel && ja2_max <= TOL.rel,
        };
        if S::MODE == Mode::Float && pass {
            ja1_witness = None;
            ja2_witness = None;
        }
        JordanCheck { ja1_max, ja1_witness, ja2_max, ja2_witness, samples: sample.len() * n, seed, pass }
    }
}
