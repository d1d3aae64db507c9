//! Jordan triple product, the structure Lie algebra and the symmetric pair
//! `(𝔤, 𝔨)` with `𝔤 = 𝔨 ⊕ 𝔭`, `𝔭 = {T_X : X ∈ V₀}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::jordan::{Element, JordanAlgebra, JordanError, LinOp};
use crate::linalg::{kernel_of_images, Insert, Mat, SpanBasis};
use crate::report::{Check, Tally};
use crate::scalar::{Mode, Scalar};

impl<S: Scalar> JordanAlgebra<S> {
    /// `{u, v, w} = u∘(v∘w) − v∘(u∘w) + (u∘v)∘w`.
    pub fn triple(&self, u: &[S], v: &[S], w: &[S]) -> Element<S> {
        let a = self.product(u, &self.product(v, w));
        let b = self.product(v, &self.product(u, w));
        let c = self.product(&self.product(u, v), w);
        a.into_iter().zip(b).zip(c).map(|((a, b), c)| a - &b + &c).collect()
    }

    /// `L(u, v) = [T_u, T_v] + T_{u∘v}`, so that `L(u, v) w = {u, v, w}`.
    pub fn l_operator(&self, u: &[S], v: &[S]) -> LinOp<S> {
        let tu = self.t_operator(u);
        let tv = self.t_operator(v);
        tu.commutator(&tv).add(&self.t_operator(&self.product(u, v)))
    }

    /// `(u, v) = tr L(u, v)`.
    pub fn triple_form(&self, u: &[S], v: &[S]) -> S {
        self.l_operator(u, v).trace()
    }

    /// Basis of `V₀ = {u : tr T_u = 0}` of the form `b_i − (t_i / t_p) b_p`,
    /// where `p` is the first index with `t_p = tr T_{b_p} ≠ 0`.
    /// First index with a nonzero trace `tr T_{b_p}`; the `V₀` basis skips it.
    pub fn v0_pivot(&self) -> Result<usize, JordanError> {
        let t = self.trace_vector();
        let scale = t.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        t.iter()
            .position(|x| !x.is_negligible(scale))
            .ok_or_else(|| JordanError::Invalid(format!("trace functional of {:?} vanishes", self.name())))
    }

    pub fn v0_basis(&self) -> Result<Vec<Element<S>>, JordanError> {
        let t = self.trace_vector();
        let p = self.v0_pivot()?;
        let tp = t[p].clone();
        Ok((0..self.dim())
            .filter(|&i| i != p)
            .map(|i| {
                let mut v = self.basis_vector(i);
                v[p] = -(t[i].clone() / &tp);
                v
            })
            .collect())
    }
}

/// Where a [`LieBasis`] element came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Origin {
    /// Generator number `i` of the input list.
    Generator(usize),
    /// Bracket `[ops[a], ops[b]]` of two earlier basis elements.
    Bracket(usize, usize),
}

/// Basis of a Lie subalgebra of `gl(V)`.
#[derive(Debug, Clone)]
pub struct LieBasis<S> {
    pub ops: Vec<LinOp<S>>,
    pub history: Vec<Origin>,
    /// `(dim V)²`.
    pub ambient_dim: usize,
    /// Every bracket of basis elements was found in the span.
    pub closed: bool,
    /// Number of bracket rounds performed.
    pub rounds: usize,
    span: SpanBasis<S>,
}

impl<S: Scalar> LieBasis<S> {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn contains(&self, op: &LinOp<S>) -> bool {
        self.span.contains(op.data())
    }

    /// Coordinates of `op` over [`LieBasis::ops`], if it lies in the span.
    pub fn coordinates(&self, op: &LinOp<S>) -> Option<Vec<S>> {
        self.span.coordinates(op.data())
    }

    /// Largest entry of the part of `op` outside the span.
    pub fn residual(&self, op: &LinOp<S>) -> f64 {
        self.span.residual(op.data())
    }

    pub fn combination(&self, coeffs: &[S]) -> LinOp<S> {
        let n = (self.ambient_dim as f64).sqrt() as usize;
        let mut out = Mat::zeros(n, n);
        for (c, op) in coeffs.iter().zip(&self.ops) {
            if !c.is_zero_exact() {
                out.axpy(c, op);
            }
        }
        out
    }

    /// Recomputes every bracket of basis pairs and returns the largest
    /// out-of-span residual.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.ops.len() {
            for b in 0..a {
                worst = worst.max(self.residual(&self.ops[a].commutator(&self.ops[b])));
            }
        }
        worst
    }
}

/// Lie algebra generated by `gens` inside `gl(n)`: brackets of basis pairs are
/// adjoined until no new direction appears.
pub fn bracket_closure<S: Scalar>(n: usize, gens: &[LinOp<S>]) -> LieBasis<S> {
    let ambient_dim = n * n;
    let mut span = SpanBasis::with_tracking(ambient_dim);
    let mut ops = Vec::new();
    let mut history = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        assert_eq!((g.rows(), g.cols()), (n, n), "generator {i} has the wrong shape");
        if matches!(span.insert(g.data()), Insert::Added { .. }) {
            ops.push(g.clone());
            history.push(Origin::Generator(i));
        }
    }
    let mut done = 0;
    let mut rounds = 0;
    let mut closed = true;
    while done < ops.len() {
        if rounds >= ambient_dim.max(1) {
            closed = false;
            break;
        }
        let end = ops.len();
        for a in done..end {
            for b in 0..a {
                let c = ops[a].commutator(&ops[b]);
                if matches!(span.insert(c.data()), Insert::Added { .. }) {
                    ops.push(c);
                    history.push(Origin::Bracket(a, b));
                }
            }
        }
        done = end;
        rounds += 1;
    }
    if S::MODE == Mode::Float && !ops.is_empty() {
        let stacked = Mat::from_rows(ops.iter().map(|o| o.data().to_vec()).collect());
        closed &= stacked.rank() == ops.len();
    }
    LieBasis { ops, history, ambient_dim, closed, rounds, span }
}

/// The restricted structure algebra `𝔤 = 𝔨 ⊕ 𝔭` with involution
/// `θ(Φ + T_X) = Φ − T_X`.
#[derive(Debug, Clone)]
pub struct SymmetricPair<S> {
    pub k: LieBasis<S>,
    pub p_basis: Vec<LinOp<S>>,
    pub v0_basis: Vec<Element<S>>,
    /// `+1` for each element of `k.ops`, then `−1` for each element of `p_basis`.
    pub theta_signs: Vec<i8>,
    /// `𝔨 ∩ 𝔭 = 0`, i.e. the sum is direct.
    pub direct: bool,
    g_span: SpanBasis<S>,
}

impl<S: Scalar> SymmetricPair<S> {
    pub fn k_dim(&self) -> usize {
        self.k.dim()
    }

    pub fn p_dim(&self) -> usize {
        self.p_basis.len()
    }

    /// Basis of `𝔤`, `𝔨` first.
    pub fn g_basis(&self) -> impl Iterator<Item = &LinOp<S>> {
        self.k.ops.iter().chain(&self.p_basis)
    }

    /// `θ(op)` for `op ∈ 𝔤`.
    pub fn theta(&self, op: &LinOp<S>) -> Option<LinOp<S>> {
        let coeffs = self.g_span.coordinates(op.data())?;
        let n = op.rows();
        let mut out = Mat::zeros(n, n);
        for ((c, sign), b) in coeffs.iter().zip(&self.theta_signs).zip(self.g_basis()) {
            let c = if *sign < 0 { -c.clone() } else { c.clone() };
            out.axpy(&c, b);
        }
        Some(out)
    }

    pub fn in_g(&self, op: &LinOp<S>) -> bool {
        self.g_span.contains(op.data())
    }
}

/// `𝔨 = gen{[T_X, T_Y] : X, Y ∈ V₀}` and `𝔭 = {T_X : X ∈ V₀}`.
pub fn restricted_pair<S: Scalar>(alg: &JordanAlgebra<S>) -> Result<SymmetricPair<S>, JordanError> {
    alg.require_semisimple()?;
    alg.require_unity()?;
    let n = alg.dim();
    let v0 = alg.v0_basis()?;
    let p_basis: Vec<LinOp<S>> = v0.iter().map(|x| alg.t_operator(x)).collect();
    let mut gens = Vec::new();
    for a in 0..p_basis.len() {
        for b in 0..a {
            gens.push(p_basis[a].commutator(&p_basis[b]));
        }
    }
    let k = bracket_closure(n, &gens);
    let mut g_span = SpanBasis::with_tracking(n * n);
    let mut direct = true;
    for op in k.ops.iter().chain(&p_basis) {
        direct &= matches!(g_span.insert(op.data()), Insert::Added { .. });
    }
    let theta_signs = std::iter::repeat(1).take(k.dim()).chain(std::iter::repeat(-1).take(p_basis.len())).collect();
    Ok(SymmetricPair { k, p_basis, v0_basis: v0, theta_signs, direct, g_span })
}

fn mat_scale<S: Scalar>(m: &Mat<S>) -> f64 {
    m.max_abs().max(1.0)
}

/// The six symmetric-pair properties plus closure and directness, with
/// basis elements as samples.
pub fn check_pair<S: Scalar>(pair: &SymmetricPair<S>, alg: &JordanAlgebra<S>) -> Vec<Check> {
    let seed = 0;
    let n = alg.dim();
    let basis: Vec<Element<S>> = (0..n).map(|i| alg.basis_vector(i)).collect();
    let t_basis: Vec<LinOp<S>> = basis.iter().map(|b| alg.t_operator(b)).collect();
    let p_space = {
        let mut s = SpanBasis::new(n * n);
        for p in &pair.p_basis {
            s.insert(p.data());
        }
        s
    };

    let mut closure = Tally::new("k_closed", seed);
    closure.record_f64(pair.k.closure_residual(), 0.0);
    if !pair.k.closed {
        closure.fail();
    }
    let mut direct = Tally::new("direct_sum", seed);
    direct.count();
    if !pair.direct {
        direct.fail();
    }

    let mut kp = Tally::new("k_p_bracket", seed);
    let mut deriv = Tally::new("derivation", seed);
    let mut image = Tally::new("image_in_v0", seed);
    let mut skew = Tally::new("skew_symmetric", seed);
    let gram = alg.gram();
    for phi in &pair.k.ops {
        let phi_cols: Vec<Element<S>> = (0..n).map(|j| phi.col(j)).collect();
        for (i, t) in t_basis.iter().enumerate() {
            // [Φ, T_u] = T_{Φu}
            let lhs = phi.commutator(t);
            let rhs = alg.t_operator(&phi_cols[i]);
            let scale = mat_scale(phi) * mat_scale(t);
            kp.record(lhs.sub(&rhs).data(), scale);
            kp.record_f64(p_space.residual(lhs.data()), if S::MODE == Mode::Rational { 0.0 } else { 1e-9 * scale });
            image.record_value(&alg.trace(&phi_cols[i]), scale * n as f64);
            image.count();
        }
        // Φ(b_i∘b_j) − Φb_i∘b_j − b_i∘Φb_j over all basis pairs.
        for i in 0..n {
            for j in 0..=i {
                let bij = alg.product(&basis[i], &basis[j]);
                let lhs = phi.mul_vec(&bij);
                let r1 = alg.product(&phi_cols[i], &basis[j]);
                let r2 = alg.product(&basis[i], &phi_cols[j]);
                let res: Vec<S> = lhs.into_iter().zip(r1).zip(r2).map(|((a, b), c)| a - &b - &c).collect();
                deriv.record(&res, mat_scale(phi));
            }
        }
        // ⟨Φu, v⟩ + ⟨u, Φv⟩ = (ΦᵀG + GΦ)_{ij}
        let s = phi.transpose().mul(&gram).add(&gram.mul(phi));
        skew.record(s.data(), mat_scale(phi) * mat_scale(&gram));
    }

    let mut pp = Tally::new("p_p_bracket", seed);
    for a in 0..pair.p_basis.len() {
        for b in 0..a {
            let c = pair.p_basis[a].commutator(&pair.p_basis[b]);
            let bound = if S::MODE == Mode::Rational { 0.0 } else { 1e-9 * mat_scale(&c) };
            pp.record_f64(pair.k.residual(&c), bound);
        }
    }

    let mut eff = Tally::new("effective", seed);
    eff.record_f64(k_center_intersection(pair).len() as f64, 0.0);

    let mut checks = vec![closure.finish(), direct.finish(), kp.finish(), pp.finish(), eff.finish(), deriv.finish()];
    checks.push(image.finish());
    checks.push(skew.finish());
    checks
}

/// Basis (in `𝔨` coordinates) of `𝔨 ∩ 𝔷(𝔤)`.
pub fn k_center_intersection<S: Scalar>(pair: &SymmetricPair<S>) -> Vec<Vec<S>> {
    if pair.k.dim() == 0 {
        return Vec::new();
    }
    // First cut by commuting with 𝔭, then with 𝔨 if anything survives.
    let images = |against: &[&LinOp<S>], cand: &[LinOp<S>]| -> Vec<Vec<S>> {
        cand.iter()
            .map(|phi| against.iter().flat_map(|x| phi.commutator(x).data().to_vec()).collect())
            .collect()
    };
    let p_refs: Vec<&LinOp<S>> = pair.p_basis.iter().collect();
    let mut ker = if p_refs.is_empty() {
        (0..pair.k.dim()).map(|i| unit::<S>(pair.k.dim(), i)).collect()
    } else {
        kernel_of_images(&images(&p_refs, &pair.k.ops))
    };
    if !ker.is_empty() {
        let cand: Vec<LinOp<S>> = ker.iter().map(|c| pair.k.combination(c)).collect();
        let k_refs: Vec<&LinOp<S>> = pair.k.ops.iter().collect();
        let sub = kernel_of_images(&images(&k_refs, &cand));
        ker = sub
            .iter()
            .map(|s| {
                let mut v = vec![S::zero(); pair.k.dim()];
                for (sc, c) in s.iter().zip(&ker) {
                    for (o, x) in v.iter_mut().zip(c) {
                        o.mul_add_assign(sc, x);
                    }
                }
                v
            })
            .collect();
    }
    ker
}

fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

/// Identities of the triple product and structure algebra on seeded samples:
/// JT1 as `L(u,v)w = L(w,v)u`, JT2 as
/// `[L(w,z), L(u,v)] = L(L(w,z)u, v) − L(u, L(z,w)v)`, both halves of `L(u,v) ± L(v,u)`, adjointness of `L` for the
/// triple form, agreement of the triple and trace forms, the reduction
/// `[T_{X+λe}, T_{Y+μe}] = [T_X, T_Y]`, and, for `Φ` drawn from `𝔨`,
/// `[Φ, T_u] = T_{Φu}` and the derivation rule.
pub fn triple_identities<S: Scalar>(
    alg: &JordanAlgebra<S>,
    pair: Option<&SymmetricPair<S>>,
    samples: usize,
    seed: u64,
) -> Result<Vec<Check>, JordanError> {
    let e = alg.require_unity()?.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jt1 = Tally::new("jt1", seed);
    let mut jt2 = Tally::new("jt2", seed);
    let mut sym = Tally::new("l_symmetric_part", seed);
    let mut anti = Tally::new("l_antisymmetric_part", seed);
    let mut adj = Tally::new("l_adjoint", seed);
    let mut forms = Tally::new("triple_form_equals_trace_form", seed);
    let mut shift = Tally::new("bracket_shift_by_unity", seed);
    let mut kt = Tally::new("k_acts_on_t", seed);
    let mut der = Tally::new("k_derivation", seed);
    let v0 = alg.v0_basis()?;
    let two = S::from_i64(2);
    for _ in 0..samples {
        let u = alg.random_element(&mut rng);
        let v = alg.random_element(&mut rng);
        let w = alg.random_element(&mut rng);
        let z = alg.random_element(&mut rng);

        let luv = alg.l_operator(&u, &v);
        let lvu = alg.l_operator(&v, &u);
        let lwv = alg.l_operator(&w, &v);
        let sc = mat_scale(&luv).max(mat_scale(&lwv));

        // The triple is symmetric in its outer arguments: L(u,v)w = L(w,v)u.
        let a = luv.mul_vec(&w);
        let b = lwv.mul_vec(&u);
        let t = alg.triple(&u, &v, &w);
        jt1.record(&sub(&a, &b), sc);
        jt1.record(&sub(&a, &t), sc);

        // [L(w,z), L(u,v)] = L(L(w,z)u, v) − L(u, L(z,w)v)
        let lwz = alg.l_operator(&w, &z);
        let lzw = alg.l_operator(&z, &w);
        let lhs = lwz.commutator(&luv);
        let rhs = alg.l_operator(&lwz.mul_vec(&u), &v).sub(&alg.l_operator(&u, &lzw.mul_vec(&v)));
        jt2.record(lhs.sub(&rhs).data(), mat_scale(&lhs).max(mat_scale(&rhs)));

        let tu = alg.t_operator(&u);
        let tv = alg.t_operator(&v);
        let tuv = alg.t_operator(&alg.product(&u, &v));
        sym.record(luv.add(&lvu).sub(&tuv.scale(&two)).data(), sc);
        anti.record(luv.sub(&lvu).sub(&tu.commutator(&tv).scale(&two)).data(), sc);

        // (L(u,v)w, z) = (w, L(v,u)z)
        let l = alg.triple_form(&a, &z);
        let r = alg.triple_form(&w, &lvu.mul_vec(&z));
        adj.record_value(&(l.clone() - &r), l.magnitude().max(r.magnitude()).max(1.0));
        adj.count();

        let tf = alg.triple_form(&u, &v);
        let gf = alg.trace_form(&u, &v);
        forms.record_value(&(tf.clone() - &gf), tf.magnitude().max(1.0));
        forms.count();

        if v0.len() >= 2 {
            let x = combo(&v0, &alg.random_element(&mut rng));
            let y = combo(&v0, &alg.random_element(&mut rng));
            let lam = S::from_i64(rand::Rng::gen_range(&mut rng, -5..=5));
            let mu = S::from_i64(rand::Rng::gen_range(&mut rng, -5..=5));
            let xs: Vec<S> = x.iter().zip(&e).map(|(a, b)| a.clone() + &(lam.clone() * b)).collect();
            let ys: Vec<S> = y.iter().zip(&e).map(|(a, b)| a.clone() + &(mu.clone() * b)).collect();
            let l = alg.t_operator(&xs).commutator(&alg.t_operator(&ys));
            let r = alg.t_operator(&x).commutator(&alg.t_operator(&y));
            shift.record(l.sub(&r).data(), mat_scale(&l));
        } else {
            shift.count();
        }

        if let Some(pair) = pair.filter(|p| p.k.dim() > 0) {
            let coeffs: Vec<S> =
                (0..pair.k.dim()).map(|_| S::from_i64(rand::Rng::gen_range(&mut rng, -2..=2))).collect();
            let phi = pair.k.combination(&coeffs);
            let ps = mat_scale(&phi);
            let l = phi.commutator(&tu);
            let r = alg.t_operator(&phi.mul_vec(&u));
            kt.record(l.sub(&r).data(), ps * mat_scale(&tu));
            let lhs = phi.mul_vec(&alg.product(&u, &v));
            let r1 = alg.product(&phi.mul_vec(&u), &v);
            let r2 = alg.product(&u, &phi.mul_vec(&v));
            let res: Vec<S> = lhs.iter().zip(&r1).zip(&r2).map(|((a, b), c)| a.clone() - b - c).collect();
            der.record(&res, ps * 100.0);
        } else {
            kt.count();
            der.count();
        }
    }
    Ok(vec![
        jt1.finish(),
        jt2.finish(),
        sym.finish(),
        anti.finish(),
        adj.finish(),
        forms.finish(),
        shift.finish(),
        kt.finish(),
        der.finish(),
    ])
}

/// Dimension of `span{L(u, v)}` over basis pairs.
pub fn structure_algebra_dim<S: Scalar>(alg: &JordanAlgebra<S>) -> usize {
    let n = alg.dim();
    let mut span = SpanBasis::new(n * n);
    for i in 0..n {
        for j in 0..n {
            span.insert(alg.l_operator(&alg.basis_vector(i), &alg.basis_vector(j)).data());
        }
    }
    span.dim()
}

fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

fn combo<S: Scalar>(basis: &[Element<S>], coeffs: &[S]) -> Element<S> {
    let mut out = vec![S::zero(); basis.first().map_or(0, Vec::len)];
    for (c, b) in coeffs.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            o.mul_add_assign(c, x);
        }
    }
    out
}

/// Default sample count used by the CLI and test suites.
pub const DEFAULT_SAMPLES: usize = 100;
