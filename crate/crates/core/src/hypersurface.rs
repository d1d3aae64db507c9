//! The equiaffine symmetric hypersurface attached to a semi-simple algebra and
//! an affine mean curvature `L₁ ≠ 0`: invariants at the origin, the Gauss
//! equation, orbit sampling on `det P_u = C^{2(n+1)}`, and the inverse
//! construction of the algebra from `(g, A, L₁)`.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::jordan::{Element, JordanAlgebra, JordanCheck, JordanError, LinOp};
use crate::linalg::{expm, Mat};
use crate::rational::Rational;
use crate::report::{Check, Tally};
use crate::scalar::{Mode, Scalar, TOL};
use crate::triple::{restricted_pair, SymmetricPair};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("affine mean curvature L1 must be nonzero")]
    ZeroCurvature,
    #[error(transparent)]
    Algebra(#[from] JordanError),
    #[error("vector is not in V0 (tr T_u = {0})")]
    NotInV0(String),
    #[error("affine metric g is not symmetric at ({0}, {1})")]
    AsymmetricMetric(usize, usize),
    #[error("affine metric g is degenerate")]
    DegenerateMetric,
    #[error("cubic form is not symmetric: {0}")]
    AsymmetricCubic(String),
    #[error("apolarity fails: tr A_X{0} = {1}")]
    Apolarity(usize, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("sum (n_a + 1) t_a = {0:e} violates the T0 constraint")]
    T0Constraint(f64),
}

/// `C = −sgn(L₁) √(n+1) ((n+1)|L₁|)^{−(n+2)/2}`.
pub fn scale_constant(n: usize, l1: f64) -> Result<f64, ModelError> {
    if l1 == 0.0 || l1.is_nan() {
        return Err(ModelError::ZeroCurvature);
    }
    let np1 = (n + 1) as f64;
    Ok(-l1.signum() * np1.sqrt() * (np1 * l1.abs()).powf(-0.5 * (n as f64 + 2.0)))
}

/// Hypersurface data at the origin `o`, where `x(o) = C e`.
#[derive(Debug, Clone)]
pub struct HypersurfaceModel<S = Rational> {
    pub algebra: JordanAlgebra<S>,
    pub l1: S,
    pub c: f64,
    pub e: Element<S>,
    /// `X_1, …, X_n` spanning `V₀ = e^⊥`, in algebra coordinates.
    pub v0_basis: Vec<Element<S>>,
    /// Index skipped by the `V₀` basis: `X_i` has a one in slot `i` and the
    /// compensating entry in slot `pivot`.
    pub pivot: usize,
    /// `g_o(X_i, X_j)`.
    pub g_o: Mat<S>,
    /// `a_o[i]` is `A_o(X_i)` as a matrix on `V₀` coordinates: column `j`
    /// holds the coordinates of `A_o(X_i, X_j)`.
    pub a_o: Vec<Mat<S>>,
    pair: OnceLock<SymmetricPair<S>>,
}

/// `{family, n, L1, C, k_dim, p_dim, apolarity_ok, gauss_ok}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub family: String,
    pub n: usize,
    #[serde(rename = "L1")]
    pub l1: String,
    #[serde(rename = "C")]
    pub c: f64,
    pub k_dim: usize,
    pub p_dim: usize,
    pub apolarity_ok: bool,
    pub gauss_ok: bool,
}

fn axpy_vec<S: Scalar>(out: &mut [S], s: &S, x: &[S]) {
    if s.is_zero_exact() {
        return;
    }
    for (o, v) in out.iter_mut().zip(x) {
        if !v.is_zero_exact() {
            o.mul_add_assign(s, v);
        }
    }
}

/// Builds the model: `V₀ = {tr T_u = 0}`, `g_o = −⟨X,Y⟩ / ((n+1)L₁)` and
/// `A_o(X,Y) = X∘Y − tr(T_{X∘Y}) e / (n+1)`. The type invariants (symmetric
/// nondegenerate `g_o`, totally symmetric and apolar `A_o`) are verified.
pub fn build_model<S: Scalar>(alg: &JordanAlgebra<S>, l1: S) -> Result<HypersurfaceModel<S>, ModelError> {
    if l1.is_zero_exact() || l1.magnitude() == 0.0 {
        return Err(ModelError::ZeroCurvature);
    }
    alg.require_semisimple()?;
    let e = alg.require_unity()?.clone();
    let dim = alg.dim();
    let n = dim - 1;
    let c = scale_constant(n, l1.to_f64())?;
    let v0 = alg.v0_basis()?;
    let pivot = alg.v0_pivot()?;
    let np1 = S::from_i64(dim as i64);
    let factor = -(S::one() / &(np1.clone() * &l1));
    let g_o = Mat::from_fn(n, n, |i, j| factor.clone() * &alg.trace_form(&v0[i], &v0[j]));
    let inv_np1 = S::one() / &np1;
    let mut a_o = Vec::with_capacity(n);
    for xi in &v0 {
        let mut m = Mat::zeros(n, n);
        for (j, xj) in v0.iter().enumerate() {
            let mut a = alg.product(xi, xj);
            let t = alg.trace(&a) * &inv_np1;
            axpy_vec(&mut a, &(-t), &e);
            let coords = skip(&a, pivot);
            m.set_col(j, &coords);
        }
        a_o.push(m);
    }
    let model = HypersurfaceModel { algebra: alg.clone(), l1, c, e, v0_basis: v0, pivot, g_o, a_o, pair: OnceLock::new() };
    model.validate()?;
    Ok(model)
}

fn skip<S: Scalar>(v: &[S], pivot: usize) -> Vec<S> {
    v.iter().enumerate().filter(|(k, _)| *k != pivot).map(|(_, x)| x.clone()).collect()
}

impl<S: Scalar> HypersurfaceModel<S> {
    /// `n = dim V₀`.
    pub fn n(&self) -> usize {
        self.v0_basis.len()
    }

    /// The symmetric pair, computed on first use.
    pub fn pair(&self) -> &SymmetricPair<S> {
        self.pair.get_or_init(|| restricted_pair(&self.algebra).expect("model algebras are semi-simple"))
    }

    /// Coordinates of `x ∈ V₀` over `X_1, …, X_n`.
    pub fn v0_coords(&self, x: &[S]) -> Result<Vec<S>, ModelError> {
        let t = self.algebra.trace(x);
        let scale = x.iter().map(Scalar::magnitude).fold(1.0, f64::max) * (self.n() + 1) as f64;
        if !t.is_negligible(scale) {
            return Err(ModelError::NotInV0(t.to_string()));
        }
        Ok(skip(x, self.pivot))
    }

    /// The `V₀` vector with the given coordinates.
    pub fn from_v0_coords(&self, coords: &[S]) -> Element<S> {
        let mut out = vec![S::zero(); self.n() + 1];
        for (c, x) in coords.iter().zip(&self.v0_basis) {
            axpy_vec(&mut out, c, x);
        }
        out
    }

    /// `g_o(X, Y)` for coordinate vectors on `V₀`.
    pub fn g(&self, x: &[S], y: &[S]) -> S {
        let gy = self.g_o.mul_vec(y);
        x.iter().zip(&gy).fold(S::zero(), |mut acc, (a, b)| {
            acc.mul_add_assign(a, b);
            acc
        })
    }

    /// `A_o(X, Y)` in `V₀` coordinates.
    pub fn a(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n()];
        for (xi, m) in x.iter().zip(&self.a_o) {
            if !xi.is_zero_exact() {
                axpy_vec(&mut out, xi, &m.mul_vec(y));
            }
        }
        out
    }

    /// `A_o(X, Y, Z) = g_o(A_o(X, Y), Z)` on basis indices.
    pub fn cubic(&self, i: usize, j: usize, k: usize) -> S {
        let col = self.a_o[i].col(j);
        let mut acc = S::zero();
        for (l, c) in col.iter().enumerate() {
            if !c.is_zero_exact() {
                acc.mul_add_assign(c, &self.g_o[(l, k)]);
            }
        }
        acc
    }

    /// `A_o` as the `(1,2)` tensor `a[i][j][k]`, `A_o(X_i, X_j) = Σ_k a[i][j][k] X_k`.
    pub fn a_tensor(&self) -> Vec<Vec<Vec<S>>> {
        self.a_o.iter().map(|m| (0..self.n()).map(|j| m.col(j)).collect()).collect()
    }

    fn validate(&self) -> Result<(), ModelError> {
        validate_metric_and_cubic(&self.g_o, &self.a_tensor())
    }

    /// Largest violation of total symmetry of `A_o(X_i, X_j, X_k)`.
    pub fn symmetry_check(&self) -> Check {
        let n = self.n();
        let mut t = Tally::new("cubic_form_symmetric", 0);
        let cubic: Vec<S> = (0..n * n * n).map(|idx| self.cubic(idx / (n * n), (idx / n) % n, idx % n)).collect();
        let at = |i: usize, j: usize, k: usize| &cubic[i * n * n + j * n + k];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let base = at(i, j, k);
                    let perms = [at(i, k, j), at(j, i, k), at(j, k, i), at(k, i, j), at(k, j, i)];
                    let res: Vec<S> = perms.iter().map(|p| base.clone() - *p).collect();
                    t.record(&res, base.magnitude().max(1.0));
                }
            }
        }
        t.finish()
    }

    /// `tr A_o(X_i) = 0` for every basis vector.
    pub fn apolarity_check(&self) -> Check {
        let mut t = Tally::new("apolarity", 0);
        for m in &self.a_o {
            t.record(&[m.trace()], m.max_abs().max(1.0));
        }
        t.finish()
    }

    /// `R(X, Y) = −[T_X, T_Y]` restricted to `V₀`, as a matrix on `V₀`
    /// coordinates.
    pub fn curvature(&self, x: &[S], y: &[S]) -> Result<Mat<S>, ModelError> {
        self.v0_coords(x)?;
        self.v0_coords(y)?;
        let alg = &self.algebra;
        let r = alg.t_operator(x).commutator(&alg.t_operator(y));
        let n = self.n();
        let mut out = Mat::zeros(n, n);
        for (j, xj) in self.v0_basis.iter().enumerate() {
            let img: Vec<S> = r.mul_vec(xj).into_iter().map(|v| -v).collect();
            out.set_col(j, &self.v0_coords(&img)?);
        }
        Ok(out)
    }

    /// `R(X,Y)Z − L₁(g(Y,Z)X − g(X,Z)Y) + [A_X, A_Y]Z` for `X, Y, Z` given in
    /// `V₀` coordinates. `R` comes from the Jordan product, the other terms
    /// from the stored `g_o` and `A_o`.
    pub fn gauss_residual(&self, x: &[S], y: &[S], z: &[S]) -> Result<Vec<S>, ModelError> {
        Ok(self.gauss_terms(x, y, z)?.residual())
    }

    /// The three terms of the Gauss equation separately.
    pub fn gauss_terms(&self, x: &[S], y: &[S], z: &[S]) -> Result<GaussTerms<S>, ModelError> {
        let n = self.n();
        for v in [x, y, z] {
            if v.len() != n {
                return Err(ModelError::Shape(format!("expected {n} V0 coordinates, got {}", v.len())));
            }
        }
        let (xv, yv, zv) = (self.from_v0_coords(x), self.from_v0_coords(y), self.from_v0_coords(z));
        let alg = &self.algebra;
        let rz: Vec<S> = alg
            .product(&xv, &alg.product(&yv, &zv))
            .into_iter()
            .zip(alg.product(&yv, &alg.product(&xv, &zv)))
            .map(|(a, b)| b - &a)
            .collect();
        let curvature = self.v0_coords(&rz)?;
        let gyz = self.g(y, z);
        let gxz = self.g(x, z);
        let metric: Vec<S> =
            x.iter().zip(y).map(|(a, b)| self.l1.clone() * &(gyz.clone() * a - &(gxz.clone() * b))).collect();
        let ayz = self.a(y, z);
        let axz = self.a(x, z);
        let a_x_a_y = self.a(x, &ayz);
        let a_y_a_x = self.a(y, &axz);
        let cubic: Vec<S> = a_x_a_y.into_iter().zip(a_y_a_x).map(|(p, q)| p - &q).collect();
        Ok(GaussTerms { curvature, metric, cubic })
    }

    /// Gauss residual over all basis triples.
    pub fn gauss_check(&self) -> Check {
        let n = self.n();
        let mut t = Tally::new("gauss_equation", 0);
        let unit = |i: usize| {
            let mut v = vec![S::zero(); n];
            v[i] = S::one();
            v
        };
        for i in 0..n {
            for j in 0..i {
                for k in 0..n {
                    match self.gauss_terms(&unit(i), &unit(j), &unit(k)) {
                        Ok(terms) => {
                            let scale = terms.scale();
                            t.record(&terms.residual(), scale);
                        }
                        Err(_) => t.fail(),
                    }
                }
            }
        }
        t.finish()
    }

    /// `ξ_o / C = (1/n) Σ g^{ij} [A_o(X_i, X_j) + ⟨X_i, X_j⟩ e / (n+1)]`
    /// in algebra coordinates, so that `ξ_o = C · (ξ_o / C)`.
    pub fn affine_normal_over_c(&self) -> Result<Element<S>, ModelError> {
        let n = self.n();
        if n == 0 {
            return Err(ModelError::Shape("affine normal needs n >= 1".into()));
        }
        let ginv = self.g_o.inverse().ok_or(ModelError::DegenerateMetric)?;
        let np1 = S::from_i64(n as i64 + 1);
        let mut acc = vec![S::zero(); n + 1];
        for i in 0..n {
            for j in 0..n {
                let w = ginv[(i, j)].clone();
                if w.is_zero_exact() {
                    continue;
                }
                let a = self.from_v0_coords(&self.a_o[i].col(j));
                axpy_vec(&mut acc, &w, &a);
                let ip = self.algebra.trace_form(&self.v0_basis[i], &self.v0_basis[j]) / &np1;
                axpy_vec(&mut acc, &(w * &ip), &self.e);
            }
        }
        let inv_n = S::one() / &S::from_i64(n as i64);
        Ok(acc.into_iter().map(|x| x * &inv_n).collect())
    }

    /// `ξ_o` as floats.
    pub fn affine_normal(&self) -> Result<Vec<f64>, ModelError> {
        Ok(self.affine_normal_over_c()?.iter().map(|x| x.to_f64() * self.c).collect())
    }

    /// `ξ_o + L₁ x(o) = 0`, checked as `ξ_o / C + L₁ e = 0`. A point
    /// (`n = 0`) has no affine normal and the check is vacuous.
    pub fn affine_normal_check(&self) -> Check {
        let mut t = Tally::new("affine_normal", 0);
        if self.n() == 0 {
            return t.finish();
        }
        match self.affine_normal_over_c() {
            Ok(xi) => {
                let res: Vec<S> = xi.iter().zip(&self.e).map(|(a, b)| a.clone() + &(self.l1.clone() * b)).collect();
                t.record(&res, self.l1.magnitude().max(1.0));
            }
            Err(_) => t.fail(),
        }
        t.finish()
    }

    /// `⟨e, e⟩ = n+1`, `⟨X, e⟩ = 0` and `⟨X, Y⟩ = −(n+1) L₁ g_o(X, Y)` on the
    /// `V₀` basis.
    pub fn trace_form_check(&self) -> Check {
        let alg = &self.algebra;
        let n = self.n();
        let np1 = S::from_i64(n as i64 + 1);
        let mut t = Tally::new("trace_form_identities", 0);
        t.record(&[alg.trace_form(&self.e, &self.e) - &np1], 1.0);
        for (i, xi) in self.v0_basis.iter().enumerate() {
            t.record(&[alg.trace_form(xi, &self.e)], 1.0);
            for (j, xj) in self.v0_basis.iter().enumerate() {
                let lhs = alg.trace_form(xi, xj);
                let rhs = -(np1.clone() * &self.l1 * &self.g_o[(i, j)]);
                t.record(&[lhs.clone() - &rhs], lhs.magnitude().max(1.0));
            }
        }
        t.finish()
    }

    pub fn summary(&self) -> ModelSummary {
        let family = self.algebra.family().map(|f| f.name()).unwrap_or_else(|| self.algebra.name().to_string());
        let pair = self.pair();
        ModelSummary {
            family,
            n: self.n(),
            l1: self.l1.to_string(),
            c: self.c,
            k_dim: pair.k_dim(),
            p_dim: pair.p_dim(),
            apolarity_ok: self.apolarity_check().pass,
            gauss_ok: self.gauss_check().pass,
        }
    }

    /// Float copy of the model, used for sampling.
    pub fn to_f64(&self) -> HypersurfaceModel<f64> {
        HypersurfaceModel {
            algebra: self.algebra.to_f64(),
            l1: self.l1.to_f64(),
            c: self.c,
            e: self.e.iter().map(Scalar::to_f64).collect(),
            v0_basis: self.v0_basis.iter().map(|x| x.iter().map(Scalar::to_f64).collect()).collect(),
            pivot: self.pivot,
            g_o: self.g_o.to_f64(),
            a_o: self.a_o.iter().map(Mat::to_f64).collect(),
            pair: OnceLock::new(),
        }
    }

    /// Equality of the algebraic data (algebra, `L₁`, `V₀` basis, `g_o`, `A_o`).
    pub fn same_data(&self, other: &Self) -> bool {
        self.algebra == other.algebra
            && self.l1 == other.l1
            && self.e == other.e
            && self.v0_basis == other.v0_basis
            && self.g_o == other.g_o
            && self.a_o == other.a_o
    }
}

/// `det P_p / C^{2(n+1)} − 1`, evaluated as `det P_{p/C} − 1`.
/// `det P_{λq} = λ^{2(n+1)} det P_q`, and at unit scale neither factor
/// underflows when `C` is tiny (`C ≈ 10⁻²⁰` for `n = 26`).
pub fn level_residual(alg: &JordanAlgebra<f64>, p: &[f64], c: f64) -> f64 {
    let q: Vec<f64> = p.iter().map(|x| x / c).collect();
    alg.p_operator(&q).det() - 1.0
}

/// `det / C^{2(n+1)}`, computed through logarithms so that large `n` does not
/// overflow.
pub fn level_ratio(det: f64, c: f64, n: usize) -> f64 {
    let e = 2.0 * (n as f64 + 1.0);
    if det == 0.0 {
        return 0.0;
    }
    det.signum() * (det.abs().ln() - e * c.abs().ln()).exp()
}

/// The three terms of the Gauss equation in `V₀` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussTerms<S> {
    /// `R(X, Y) Z`.
    pub curvature: Vec<S>,
    /// `L₁ (g(Y,Z) X − g(X,Z) Y)`.
    pub metric: Vec<S>,
    /// `[A_X, A_Y] Z`.
    pub cubic: Vec<S>,
}

impl<S: Scalar> GaussTerms<S> {
    pub fn residual(&self) -> Vec<S> {
        self.curvature.iter().zip(&self.metric).zip(&self.cubic).map(|((r, m), c)| r.clone() - m + c).collect()
    }

    fn scale(&self) -> f64 {
        self.curvature.iter().chain(&self.metric).chain(&self.cubic).map(Scalar::magnitude).fold(1.0, f64::max)
    }

    pub fn all_zero(&self) -> bool {
        self.curvature.iter().chain(&self.metric).chain(&self.cubic).all(Scalar::is_zero_exact)
    }
}

impl HypersurfaceModel<f64> {
    /// `det P_p / C^{2(n+1)} − 1`.
    pub fn level_residual(&self, p: &[f64]) -> f64 {
        level_residual(&self.algebra, p, self.c)
    }

    /// `count` points `C · exp(T_{X_1}) ⋯ exp(T_{X_steps}) e` with seeded
    /// random `X_i ∈ V₀` of Euclidean coordinate norm at most `step`.
    pub fn sample_points(&self, count: usize, steps: usize, step: f64, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.n();
        let gens: Vec<LinOp<f64>> = self.v0_basis.iter().map(|x| self.algebra.t_operator(x)).collect();
        (0..count)
            .map(|_| {
                let mut p = self.e.clone();
                for _ in 0..steps {
                    if n == 0 {
                        break;
                    }
                    let mut coords: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                    let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
                    let radius = step * rng.gen_range(0.0..=1.0);
                    if norm > 0.0 {
                        coords.iter_mut().for_each(|x| *x *= radius / norm);
                    }
                    let mut t = Mat::zeros(n + 1, n + 1);
                    for (c, g) in coords.iter().zip(&gens) {
                        t.axpy(c, g);
                    }
                    p = expm(&t).mul_vec(&p);
                }
                p.into_iter().map(|x| x * self.c).collect()
            })
            .collect()
    }

    /// Level residuals of the sampled points, as a check with the level
    /// tolerance.
    pub fn level_check(&self, count: usize, steps: usize, step: f64, seed: u64) -> Check {
        let mut t = Tally::new("level_set", seed);
        for p in self.sample_points(count, steps, step, seed) {
            t.record_f64(self.level_residual(&p).abs(), TOL.level);
        }
        t.finish()
    }
}

/// Default sampling parameters.
pub const DEFAULT_STEP: f64 = 0.3;
pub const DEFAULT_STEPS: usize = 5;

/// `det P_{exp(T_X) u} = det P_u` for seeded traceless `X` and random `u`.
pub fn exp_preserves_det(alg: &JordanAlgebra<f64>, samples: usize, seed: u64) -> Result<Check, ModelError> {
    let v0 = alg.v0_basis()?;
    let n = alg.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new("exp_preserves_det", seed);
    for _ in 0..samples {
        let mut x = vec![0.0; n];
        for b in &v0 {
            axpy_vec(&mut x, &rng.gen_range(-0.3..=0.3), b);
        }
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let g = expm(&alg.t_operator(&x));
        let before = alg.p_operator(&u).det();
        let after = alg.p_operator(&g.mul_vec(&u)).det();
        let rel = (after - before).abs() / before.abs().max(f64::MIN_POSITIVE);
        t.record_f64(rel, TOL.level);
    }
    Ok(t.finish())
}

/// Observed convergence of `(P_{e+hX} − I)/h → 2T_X`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentCheck {
    pub steps: Vec<f64>,
    /// `‖(P_{e+hX} − I)/h − 2T_X‖` (max-entry norm) per step.
    pub errors: Vec<f64>,
    /// `log(err_i / err_{i+1}) / log(h_i / h_{i+1})`.
    pub orders: Vec<f64>,
    pub min_order: f64,
}

/// Finite-difference check of the tangent identity `d/dt P_{e+tX}|₀ = 2T_X`
/// for traceless `X`, in float arithmetic.
pub fn tangent_check(alg: &JordanAlgebra<f64>, x: &[f64], steps: &[f64]) -> Result<TangentCheck, ModelError> {
    let e = alg.require_unity()?.clone();
    let n = alg.dim();
    let tr = alg.trace(x);
    if tr.abs() > TOL.rel * (n as f64) * x.iter().map(|v| v.abs()).fold(1.0, f64::max) {
        return Err(ModelError::NotInV0(tr.to_string()));
    }
    let two_t = alg.t_operator(x).scale(&2.0);
    let id = Mat::<f64>::identity(n);
    let errors: Vec<f64> = steps
        .iter()
        .map(|&h| {
            let u: Vec<f64> = e.iter().zip(x).map(|(a, b)| a + h * b).collect();
            alg.p_operator(&u).sub(&id).scale(&(1.0 / h)).sub(&two_t).max_abs()
        })
        .collect();
    let orders: Vec<f64> = (1..steps.len())
        .map(|i| (errors[i - 1] / errors[i]).ln() / (steps[i - 1] / steps[i]).ln())
        .collect();
    let min_order = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(TangentCheck { steps: steps.to_vec(), errors, orders, min_order })
}

/// Outcome of [`reconstruct_algebra`].
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// The algebra on the basis `X_1, …, X_n, e`.
    pub algebra: JordanAlgebra<Rational>,
    pub jordan: JordanCheck,
    pub semisimple: bool,
    /// Set when the result fails the Jordan identity or semi-simplicity; the
    /// algebra is then only a commutative algebra with unity.
    pub flagged: bool,
}

fn validate_metric_and_cubic<S: Scalar>(g: &Mat<S>, a: &[Vec<Vec<S>>]) -> Result<(), ModelError> {
    let n = g.rows();
    if g.cols() != n {
        return Err(ModelError::Shape(format!("g is {}x{}", g.rows(), g.cols())));
    }
    if a.len() != n || a.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
        return Err(ModelError::Shape(format!("A must be {n}x{n}x{n}")));
    }
    let gs = g.max_abs().max(1.0);
    for i in 0..n {
        for j in 0..i {
            if !(g[(i, j)].clone() - &g[(j, i)]).is_negligible(gs) {
                return Err(ModelError::AsymmetricMetric(i, j));
            }
        }
    }
    if n > 0 && g.inverse().is_none() {
        return Err(ModelError::DegenerateMetric);
    }
    let scale = a.iter().flatten().flatten().map(Scalar::magnitude).fold(1.0, f64::max) * gs;
    // A(X_i, X_j) = A(X_j, X_i)
    for i in 0..n {
        for j in 0..i {
            for k in 0..n {
                if !(a[i][j][k].clone() - &a[j][i][k]).is_negligible(scale) {
                    return Err(ModelError::AsymmetricCubic(format!("A(X{i}, X{j}) != A(X{j}, X{i}) in slot {k}")));
                }
            }
        }
    }
    // g(A(X_i, X_j), X_k) totally symmetric: symmetric in (j, k) suffices now.
    let lower = |i: usize, j: usize, k: usize| {
        let mut acc = S::zero();
        for l in 0..n {
            acc.mul_add_assign(&a[i][j][l], &g[(l, k)]);
        }
        acc
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..j {
                if !(lower(i, j, k) - &lower(i, k, j)).is_negligible(scale) {
                    return Err(ModelError::AsymmetricCubic(format!("A(X{i}, X{j}, X{k}) != A(X{i}, X{k}, X{j})")));
                }
            }
        }
    }
    for (i, ai) in a.iter().enumerate() {
        let tr = (0..n).fold(S::zero(), |acc, j| acc + &ai[j][j]);
        if !tr.is_negligible(scale) {
            return Err(ModelError::Apolarity(i, tr.to_string()));
        }
    }
    Ok(())
}

/// The algebra on `V₀ ⊕ ℝe` with `T_X(e) = X`, `T_X(Y) = A(X,Y) − L₁ g(X,Y) e`,
/// where `A[i][j][k]` are the coordinates of `A(X_i, X_j)`. The basis is
/// `X_1, …, X_n, e`. The Jordan identity and semi-simplicity are checked
/// afterwards; failures flag the result instead of rejecting it.
pub fn reconstruct_algebra(g: &Mat<Rational>, a: &[Vec<Vec<Rational>>], l1: &Rational) -> Result<Reconstruction, ModelError> {
    if l1.is_zero_exact() {
        return Err(ModelError::ZeroCurvature);
    }
    validate_metric_and_cubic(g, a)?;
    let n = g.rows();
    let labels: Vec<String> = (0..n).map(|i| format!("X{i}")).chain(std::iter::once("e".to_string())).collect();
    let algebra = JordanAlgebra::from_fn("reconstructed", labels, |i, j| {
        let mut out = vec![Rational::from(0); n + 1];
        match (i == n, j == n) {
            (true, true) => out[n] = Rational::from(1),
            (true, false) => out[j] = Rational::from(1),
            (false, true) => out[i] = Rational::from(1),
            (false, false) => {
                out[..n].clone_from_slice(&a[i][j]);
                out[n] = -(l1.clone() * &g[(i, j)]);
            }
        }
        out
    })?;
    let jordan = algebra.check_jordan();
    let semisimple = algebra.is_semisimple().0;
    let flagged = !(jordan.pass && semisimple);
    Ok(Reconstruction { algebra, jordan, semisimple, flagged })
}

impl HypersurfaceModel<Rational> {
    /// `reconstruct_algebra(g_o, A_o, L₁)` expressed back in the original
    /// algebra's basis.
    pub fn reconstruct(&self) -> Result<Reconstruction, ModelError> {
        let mut rec = reconstruct_algebra(&self.g_o, &self.a_tensor(), &self.l1)?;
        // Columns of the frame are X_1, …, X_n, e in original coordinates; the
        // original basis vectors are the columns of its inverse.
        let mut cols = self.v0_basis.clone();
        cols.push(self.e.clone());
        let frame = Mat::from_cols(&cols);
        let inv = frame.inverse().ok_or(ModelError::DegenerateMetric)?;
        let back: Vec<Element<Rational>> = (0..inv.cols()).map(|j| inv.col(j)).collect();
        rec.algebra = rec
            .algebra
            .subalgebra(self.algebra.name().to_string(), &back)?
            .with_labels(self.algebra.labels().to_vec())
            .with_family(self.algebra.family().cloned());
        Ok(rec)
    }

    /// All model-level checks: trace-form identities, symmetry and apolarity
    /// of `A_o`, the Gauss equation and the affine normal.
    pub fn checks(&self) -> Vec<Check> {
        vec![
            self.trace_form_check(),
            self.symmetry_check(),
            self.apolarity_check(),
            self.gauss_check(),
            self.affine_normal_check(),
        ]
    }
}

impl<S: Scalar> HypersurfaceModel<S> {
    pub fn mode(&self) -> Mode {
        S::MODE
    }
}
