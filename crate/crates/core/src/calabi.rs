//! Calabi composition: direct sums of algebras and the warped product of
//! their hypersurfaces over the hyperplane `Σ (n_α + 1) t_α = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypersurface::{build_model, level_residual, scale_constant, HypersurfaceModel, ModelError};
use crate::jordan::{Element, JordanAlgebra, JordanError, LinOp};
use crate::linalg::{Insert, SpanBasis};
use crate::rational::Rational;
use crate::report::{Check, Tally};
use crate::scalar::{Scalar, TOL};

/// `J_1 ⊕ ⋯ ⊕ J_r` with the concatenated basis and blockwise product.
pub fn direct_sum<S: Scalar>(factors: &[JordanAlgebra<S>]) -> Result<JordanAlgebra<S>, JordanError> {
    for f in factors {
        f.require_unity()?;
    }
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.dim();
            Some(o)
        })
        .collect();
    let dim: usize = factors.iter().map(JordanAlgebra::dim).sum();
    let block = |i: usize| {
        let a = offsets.iter().rposition(|&o| o <= i).expect("index inside some block");
        (a, i - offsets[a])
    };
    let labels: Vec<String> = factors
        .iter()
        .enumerate()
        .flat_map(|(a, f)| f.labels().iter().map(move |l| format!("{a}:{l}")))
        .collect();
    let name = factors.iter().map(JordanAlgebra::name).collect::<Vec<_>>().join(" + ");
    JordanAlgebra::from_fn(if factors.is_empty() { "zero".to_string() } else { name }, labels, |i, j| {
        let mut out = vec![S::zero(); dim];
        let ((a, ii), (b, jj)) = (block(i), block(j));
        if a == b {
            for (k, c) in factors[a].basis_product(ii, jj) {
                out[offsets[a] + k] = c.clone();
            }
        }
        out
    })
}

/// One factor `(J_α, L₁^α)`.
#[derive(Debug, Clone)]
pub struct CalabiFactor {
    pub algebra: JordanAlgebra<Rational>,
    pub l1: Rational,
}

impl CalabiFactor {
    /// `n_α = dim J_α − 1`.
    pub fn n(&self) -> usize {
        self.algebra.dim() - 1
    }
}

#[derive(Debug, Clone)]
pub struct CalabiSpec {
    pub factors: Vec<CalabiFactor>,
    pub l1: Rational,
}

impl CalabiSpec {
    pub fn new(factors: Vec<CalabiFactor>, l1: Rational) -> Self {
        CalabiSpec { factors, l1 }
    }

    /// `n = Σ (n_α + 1) − 1`.
    pub fn n(&self) -> usize {
        self.factors.iter().map(|f| f.algebra.dim()).sum::<usize>() - 1
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.factors.is_empty() {
            return Err(ModelError::Shape("Calabi composition needs at least one factor".into()));
        }
        if self.l1.is_zero_exact() || self.factors.iter().any(|f| f.l1.is_zero_exact()) {
            return Err(ModelError::ZeroCurvature);
        }
        Ok(())
    }

    pub fn direct_sum(&self) -> Result<JordanAlgebra<Rational>, ModelError> {
        let algs: Vec<_> = self.factors.iter().map(|f| f.algebra.clone()).collect();
        Ok(direct_sum(&algs)?)
    }

    /// The factor units `e_α` embedded in the direct sum.
    pub fn units(&self) -> Result<Vec<Element<Rational>>, ModelError> {
        let dim = self.n() + 1;
        let mut out = Vec::with_capacity(self.factors.len());
        let mut offset = 0;
        for f in &self.factors {
            let mut u = vec![Rational::from(0); dim];
            for (k, c) in f.algebra.require_unity()?.iter().enumerate() {
                u[offset + k] = c.clone();
            }
            offset += f.algebra.dim();
            out.push(u);
        }
        Ok(out)
    }

    /// `C` of the composed model and `C_α` of each factor.
    pub fn constants(&self) -> Result<(f64, Vec<f64>), ModelError> {
        self.validate()?;
        let c = scale_constant(self.n(), self.l1.to_f64())?;
        let ca = self.factors.iter().map(|f| scale_constant(f.n(), f.l1.to_f64())).collect::<Result<_, _>>()?;
        Ok((c, ca))
    }

    /// `c_α = C / C_α`.
    pub fn warp_constants(&self) -> Result<Vec<f64>, ModelError> {
        let (c, ca) = self.constants()?;
        Ok(ca.into_iter().map(|x| c / x).collect())
    }
}

/// The composed model together with its factor data.
#[derive(Debug, Clone)]
pub struct Composition {
    pub model: HypersurfaceModel<Rational>,
    pub factors: Vec<HypersurfaceModel<Rational>>,
    /// `c_α = C / C_α`.
    pub warp: Vec<f64>,
    /// `T_z` for a basis of the traceless central elements `z = Σ s_α e_α`.
    pub p0: Vec<LinOp<Rational>>,
}

/// Model on `J_1 ⊕ ⋯ ⊕ J_r` with target curvature `L₁`, with the factor
/// models, the warp constants and the `𝔭₀` block.
pub fn compose(spec: &CalabiSpec) -> Result<Composition, ModelError> {
    spec.validate()?;
    let factors = spec
        .factors
        .iter()
        .map(|f| {
            // n_α = 0 factors have no V₀ and no affine invariants to build.
            if f.n() == 0 {
                f.algebra.require_unity()?;
                f.algebra.require_semisimple()?;
                return Ok(None);
            }
            build_model(&f.algebra, f.l1.clone()).map(Some)
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    let sum = spec.direct_sum()?;
    let model = build_model(&sum, spec.l1.clone())?;
    let warp = spec.warp_constants()?;

    let r = spec.factors.len();
    let units = spec.units()?;
    // z = Σ s_α e_α is traceless iff Σ s_α (n_α + 1) = 0.
    let p0 = (1..r)
        .map(|a| {
            let w = Rational::integer(spec.factors[0].algebra.dim() as i64)
                / &Rational::integer(spec.factors[a].algebra.dim() as i64);
            let z: Vec<Rational> = units[0].iter().zip(&units[a]).map(|(x, y)| x.clone() - &(w.clone() * y)).collect();
            sum.t_operator(&z)
        })
        .collect();
    Ok(Composition {
        model,
        factors: factors.into_iter().flatten().collect(),
        warp,
        p0,
    })
}

impl Composition {
    /// `dim 𝔭₀ = r − 1`, `𝔭₀ ⊆ 𝔭`, and `[𝔭₀, 𝔤] = 0`.
    pub fn p0_check(&self, r: usize) -> Check {
        let mut t = Tally::new("p0_central", 0);
        let n = self.model.algebra.dim();
        let mut span = SpanBasis::new(n * n);
        let mut independent = 0;
        for op in &self.p0 {
            if matches!(span.insert(op.data()), Insert::Added { .. }) {
                independent += 1;
            }
        }
        if independent + 1 != r {
            t.fail();
        }
        let pair = self.model.pair();
        for z in &self.p0 {
            t.record_value(&Rational::from(if pair.in_g(z) { 0 } else { 1 }), 1.0);
            for g in pair.g_basis() {
                t.record(z.commutator(g).data(), 1.0);
            }
        }
        t.finish()
    }

    /// On each factor's `V₀`, `g_o = ((n_α+1) L₁^α / ((n+1) L₁)) g_α`, and
    /// `A_o(X, Y) − A_α(X, Y)` is a combination of the units `e_β`.
    pub fn factor_blocks_check(&self, spec: &CalabiSpec) -> Check {
        let mut t = Tally::new("factor_blocks", 0);
        let sum = &self.model.algebra;
        let np1 = Rational::integer(sum.dim() as i64);
        let units = spec.units().expect("validated by compose");
        let mut factor_models = self.factors.iter();
        let mut offset = 0;
        for f in &spec.factors {
            let d = f.algebra.dim();
            if f.n() == 0 {
                offset += d;
                continue;
            }
            let fm = factor_models.next().expect("one model per factor of positive dimension");
            let ratio = Rational::integer(d as i64) * &f.l1 / &(np1.clone() * &spec.l1);
            let embed = |x: &[Rational]| {
                let mut v = vec![Rational::from(0); sum.dim()];
                v[offset..offset + d].clone_from_slice(x);
                v
            };
            let xs: Vec<Element<Rational>> = fm.v0_basis.iter().map(|x| embed(x)).collect();
            let coords: Vec<Vec<Rational>> = match xs.iter().map(|x| self.model.v0_coords(x)).collect() {
                Ok(c) => c,
                Err(_) => {
                    t.fail();
                    return t.finish();
                }
            };
            for i in 0..xs.len() {
                for j in 0..xs.len() {
                    let lhs = self.model.g(&coords[i], &coords[j]);
                    t.record(&[lhs - &(ratio.clone() * &fm.g_o[(i, j)])], 1.0);
                    let a = self.model.from_v0_coords(&self.model.a(&coords[i], &coords[j]));
                    let aa = embed(&fm.from_v0_coords(&fm.a(&unit(xs.len(), i), &unit(xs.len(), j))));
                    let diff: Vec<Rational> = a.iter().zip(&aa).map(|(p, q)| p.clone() - q).collect();
                    let mut span = SpanBasis::new(sum.dim());
                    for u in &units {
                        span.insert(u);
                    }
                    t.record_f64(span.residual(&diff), 0.0);
                }
            }
            offset += d;
        }
        t.finish()
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|k| Rational::from(if k == i { 1 } else { 0 })).collect()
}

/// `x(t, p) = (c_1 e^{t_1} x_1, …, c_r e^{t_r} x_r)`. Requires
/// `|Σ (n_α+1) t_α| ≤ 10⁻¹²` and every `x_α` on its factor's level set.
pub fn compose_point(spec: &CalabiSpec, t: &[f64], factor_points: &[Vec<f64>]) -> Result<Vec<f64>, ModelError> {
    let r = spec.factors.len();
    if t.len() != r || factor_points.len() != r {
        return Err(ModelError::Shape(format!(
            "expected {r} parameters and factor points, got {} and {}",
            t.len(),
            factor_points.len()
        )));
    }
    let constraint: f64 = spec.factors.iter().zip(t).map(|(f, &s)| f.algebra.dim() as f64 * s).sum();
    if constraint.abs() > TOL.t0 || constraint.is_nan() {
        return Err(ModelError::T0Constraint(constraint));
    }
    let (_, ca) = spec.constants()?;
    let warp = spec.warp_constants()?;
    let mut out = Vec::new();
    for (a, f) in spec.factors.iter().enumerate() {
        let x = &factor_points[a];
        if x.len() != f.algebra.dim() {
            return Err(ModelError::Shape(format!("factor {a} point has {} coordinates, expected {}", x.len(), f.algebra.dim())));
        }
        let alg = f.algebra.to_f64();
        let res = level_residual(&alg, x, ca[a]);
        if !(res.abs() <= TOL.level) {
            return Err(ModelError::Shape(format!("factor {a} point is off its level set (residual {res:e})")));
        }
        let s = warp[a] * t[a].exp();
        out.extend(x.iter().map(|v| s * v));
    }
    Ok(out)
}

/// Seeded composed points: factor orbit samples combined with random `t` on
/// the constraint hyperplane, `|t_α| ≤ t_max`.
pub fn sample_composed(
    spec: &CalabiSpec,
    count: usize,
    steps: usize,
    step: f64,
    t_max: f64,
    seed: u64,
) -> Result<Vec<Vec<f64>>, ModelError> {
    let (_, ca) = spec.constants()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factor_models: Vec<Option<HypersurfaceModel<f64>>> = spec
        .factors
        .iter()
        .map(|f| if f.n() == 0 { Ok(None) } else { build_model(&f.algebra, f.l1.clone()).map(|m| Some(m.to_f64())) })
        .collect::<Result<_, _>>()?;
    let weights: Vec<f64> = spec.factors.iter().map(|f| f.algebra.dim() as f64).collect();
    let total: f64 = weights.iter().sum();
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..spec.factors.len()).map(|_| rng.gen_range(-t_max..=t_max)).collect();
            let mean = raw.iter().zip(&weights).map(|(s, w)| s * w).sum::<f64>() / total;
            let mut t: Vec<f64> = raw.iter().map(|s| s - mean).collect();
            // Absorb the rounding error in the largest block.
            let last = weights.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
            let drift: f64 = t.iter().zip(&weights).map(|(s, w)| s * w).sum();
            t[last] -= drift / weights[last];
            let points: Vec<Vec<f64>> = spec
                .factors
                .iter()
                .zip(&factor_models)
                .enumerate()
                .map(|(a, (f, m))| match m {
                    Some(m) => m.sample_points(1, steps, step, rng.gen()).remove(0),
                    None => f.algebra.require_unity().expect("validated").iter().map(|x| x.to_f64() * ca[a]).collect(),
                })
                .collect();
            compose_point(spec, &t, &points)
        })
        .collect()
}

/// Level residuals of composed samples against the composed model.
pub fn composed_level_check(spec: &CalabiSpec, count: usize, seed: u64) -> Result<Check, ModelError> {
    let sum = spec.direct_sum()?.to_f64();
    let (c, _) = spec.constants()?;
    let mut t = Tally::new("composed_level_set", seed);
    for p in sample_composed(spec, count, 3, 0.3, 1.0, seed)? {
        t.record_f64(level_residual(&sum, &p, c).abs(), TOL.level);
    }
    Ok(t.finish())
}

/// `compose(spec).model` equals `build_model(direct_sum(...), L₁)` in every
/// stored tensor.
pub fn equivalence_check(spec: &CalabiSpec) -> Result<Check, ModelError> {
    let composed = compose(spec)?;
    let direct = build_model(&spec.direct_sum()?, spec.l1.clone())?;
    let mut t = Tally::new("compose_equals_direct_sum", 0);
    if !composed.model.same_data(&direct) || composed.model.c != direct.c {
        t.fail();
    }
    t.count();
    Ok(t.finish())
}

/// `det P` on a direct sum is the product of the blockwise determinants.
pub fn block_det_check(spec: &CalabiSpec, samples: usize, seed: u64) -> Result<Check, ModelError> {
    let sum = spec.direct_sum()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new("block_det", seed);
    for _ in 0..samples {
        let mut whole = Vec::new();
        let mut product = Rational::from(1);
        for f in &spec.factors {
            let u = f.algebra.random_element(&mut rng);
            product = product * &f.algebra.p_operator(&u).det();
            whole.extend(u);
        }
        let det = sum.p_operator(&whole).det();
        t.record(&[det - &product], 1.0);
    }
    Ok(t.finish())
}

/// All composition checks.
pub fn calabi_checks(spec: &CalabiSpec, count: usize, seed: u64) -> Result<Vec<Check>, ModelError> {
    let comp = compose(spec)?;
    Ok(vec![
        equivalence_check(spec)?,
        comp.p0_check(spec.factors.len()),
        comp.factor_blocks_check(spec),
        block_det_check(spec, 3, seed)?,
        composed_level_check(spec, count, seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, Family, FamilySpec};

    fn reals() -> JordanAlgebra<Rational> {
        build(&FamilySpec::new(Family::Reals)).unwrap()
    }

    fn q(x: i64) -> Rational {
        Rational::integer(x)
    }

    fn hyperbola_spec() -> CalabiSpec {
        CalabiSpec::new(
            vec![CalabiFactor { algebra: reals(), l1: q(-1) }, CalabiFactor { algebra: reals(), l1: q(2) }],
            q(-1),
        )
    }

    #[test]
    fn reals_plus_reals() {
        let s = direct_sum(&[reals(), reals()]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.is_semisimple().0);
        assert_eq!(s.decompose().unwrap().len(), 2);
        assert_eq!(s.unity().unwrap(), &vec![q(1), q(1)]);
    }

    #[test]
    fn hyperbola_points() {
        let spec = hyperbola_spec();
        let comp = compose(&spec).unwrap();
        assert_eq!(comp.model.n(), 1);
        let c = comp.model.c;
        for p in sample_composed(&spec, 20, 0, 0.0, 2.0, 3).unwrap() {
            assert!((p[0] * p[1] - c * c).abs() < 1e-12 * c * c, "{p:?}");
        }
        let at_origin = compose_point(&spec, &[0.0, 0.0], &[vec![1.0], vec![-0.5]]).unwrap();
        assert!((at_origin[0] - c).abs() < 1e-15 && (at_origin[1] - c).abs() < 1e-15);
    }

    #[test]
    fn t0_violation_is_rejected() {
        let spec = hyperbola_spec();
        let err = compose_point(&spec, &[1.0, 1.0], &[vec![1.0], vec![-0.5]]).unwrap_err();
        assert!(matches!(err, ModelError::T0Constraint(v) if v == 2.0));
    }

    #[test]
    fn single_factor_is_build_model() {
        let a = build(&FamilySpec::new(Family::SymmetricR).with_m(3)).unwrap();
        let spec = CalabiSpec::new(vec![CalabiFactor { algebra: a.clone(), l1: q(2) }], q(2));
        let comp = compose(&spec).unwrap();
        assert!(comp.model.same_data(&build_model(&a, q(2)).unwrap()));
        assert!(comp.p0.is_empty());
        assert!((comp.warp[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_sum_checks() {
        let spec = CalabiSpec::new(
            vec![
                CalabiFactor { algebra: build(&FamilySpec::new(Family::ComplexField)).unwrap(), l1: q(-1) },
                CalabiFactor { algebra: reals(), l1: q(1) },
                CalabiFactor { algebra: build(&FamilySpec::new(Family::SymmetricR).with_m(2).desk()).unwrap(), l1: q(3) },
            ],
            q(2),
        );
        for c in calabi_checks(&spec, 20, 9).unwrap() {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(compose(&spec).unwrap().p0.len(), 2);
    }

    #[test]
    fn zero_curvature_rejected() {
        let mut spec = hyperbola_spec();
        spec.factors[1].l1 = q(0);
        assert!(matches!(compose(&spec), Err(ModelError::ZeroCurvature)));
    }
}
