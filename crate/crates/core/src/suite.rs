//! Named verification suites over one algebra, shared by the CLI and the
//! acceptance run.

use std::time::Instant;

use serde::Serialize;

use crate::catalog::{exponent_audit, verify_det_formula, ExponentAudit, FamilySpec};
use crate::hypersurface::{build_model, tangent_check, DEFAULT_STEP, DEFAULT_STEPS};
use crate::jordan::{JordanAlgebra, JordanCheck, JordanError};
use crate::rational::Rational;
use crate::report::{Check, Tally, VerificationReport};
use crate::scalar::{Mode, Scalar, TOL};
use crate::triple::{check_pair, restricted_pair, triple_identities};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Jordan,
    Semisimple,
    Triple,
    Pair,
    Detformula,
    Gauss,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Jordan, Suite::Semisimple, Suite::Triple, Suite::Pair, Suite::Detformula, Suite::Gauss];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Jordan => "jordan",
            Suite::Semisimple => "semisimple",
            Suite::Triple => "triple",
            Suite::Pair => "pair",
            Suite::Detformula => "detformula",
            Suite::Gauss => "gauss",
        }
    }
}

/// Sampling parameters of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
    pub l1: Rational,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { samples: crate::triple::DEFAULT_SAMPLES, seed: crate::jordan::DEFAULT_SEED, l1: Rational::integer(-1) }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Algebra(#[from] JordanError),
    #[error(transparent)]
    Model(#[from] crate::hypersurface::ModelError),
    #[error("detformula needs a catalog family; pass --family or use an algebra file with a \"family\" field")]
    NoFamily,
}

/// `JordanCheck` as two checks.
pub fn jordan_checks(c: &JordanCheck) -> Vec<Check> {
    let ja1_pass = match c.ja1_witness {
        None => c.ja1_max <= TOL.rel,
        Some(_) => false,
    };
    vec![
        Check { name: "ja1_commutative".into(), pass: ja1_pass, max_residual: c.ja1_max, samples: c.samples, seed: c.seed },
        Check { name: "ja2_jordan_identity".into(), pass: c.pass, max_residual: c.ja2_max, samples: c.samples, seed: c.seed },
    ]
}

/// Trace-form nondegeneracy, injectivity of `v ↦ T_v`, and the splitting
/// into simple ideals: cross products vanish and the inertia adds up.
pub fn semisimple_checks<S: Scalar>(alg: &JordanAlgebra<S>) -> Vec<Check> {
    let (ok, inertia) = alg.is_semisimple();
    let mut ss = Tally::new("trace_form_nondegenerate", 0);
    ss.record_f64(inertia.2 as f64, 0.0);
    if !ok {
        ss.fail();
    }
    let mut inj = Tally::new("t_injective", 0);
    inj.count();
    if !alg.is_nondegenerate() {
        inj.fail();
    }
    let mut dec = Tally::new("decomposition", 0);
    match alg.decompose() {
        Ok(ideals) => {
            for (a, ia) in ideals.iter().enumerate() {
                for ib in &ideals[..a] {
                    for x in &ia.basis {
                        for y in &ib.basis {
                            dec.record(&alg.product(x, y), 1.0);
                        }
                    }
                }
            }
            let (mut p, mut q, mut z) = (0, 0, 0);
            for i in &ideals {
                let (a, b, c) = i.algebra.gram().inertia();
                p += a;
                q += b;
                z += c;
            }
            if (p, q, z) != inertia || ideals.iter().map(|i| i.basis.len()).sum::<usize>() != alg.dim() {
                dec.fail();
            }
        }
        Err(_) => dec.fail(),
    }
    vec![ss.finish(), inj.finish(), dec.finish()]
}

/// Operator identities, triple identities and the `𝔨`-action checks.
pub fn triple_checks<S: Scalar>(alg: &JordanAlgebra<S>, samples: usize, seed: u64) -> Result<Vec<Check>, JordanError> {
    let pair = restricted_pair(alg)?;
    let mut out = alg.operator_identities(samples, seed)?;
    out.extend(triple_identities(alg, Some(&pair), samples, seed)?);
    Ok(out)
}

pub fn pair_checks<S: Scalar>(alg: &JordanAlgebra<S>) -> Result<Vec<Check>, JordanError> {
    let pair = restricted_pair(alg)?;
    Ok(check_pair(&pair, alg))
}

/// Closed-form comparison for a family, plus the exponent audit (which is
/// informational and never fails the run).
pub fn detformula_checks(spec: &FamilySpec, samples: usize, seed: u64, mode: Mode) -> Result<(Vec<Check>, ExponentAudit), JordanError> {
    let r = verify_det_formula(spec, samples, seed, mode)?;
    let check = Check { name: "det_p_closed_form".into(), pass: r.pass, max_residual: r.max_deviation, samples, seed };
    let audit = exponent_audit(spec, samples.clamp(2, 6), seed)?;
    Ok((vec![check], audit))
}

/// Model invariants at the origin with curvature `l1`, plus sampled level
/// set and tangent checks in float arithmetic.
pub fn gauss_checks<S: Scalar>(alg: &JordanAlgebra<S>, l1: &Rational, samples: usize, seed: u64) -> Result<Vec<Check>, SuiteError> {
    let model = build_model(alg, S::from_rational(l1))?;
    let mut out = vec![
        model.trace_form_check(),
        model.symmetry_check(),
        model.apolarity_check(),
        model.gauss_check(),
        model.affine_normal_check(),
    ];
    let fm = model.to_f64();
    out.push(fm.level_check(samples, DEFAULT_STEPS, DEFAULT_STEP, seed));
    out.push(tangent_suite(&fm.algebra, samples.min(10), seed)?);
    Ok(out)
}

/// Observed order of `(P_{e+hX} − I)/h − 2T_X` over `h ∈ {10⁻², 10⁻³, 10⁻⁴}`
/// for seeded random traceless `X`; passes when every order is ≥ 0.99.
pub fn tangent_suite(alg: &JordanAlgebra<f64>, samples: usize, seed: u64) -> Result<Check, SuiteError> {
    use rand::{Rng, SeedableRng};
    let v0 = alg.v0_basis()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut t = Tally::new("tangent_order", seed);
    for _ in 0..samples {
        let mut x = vec![0.0; alg.dim()];
        for b in &v0 {
            let c: f64 = rng.gen_range(-1.0..=1.0);
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += c * bi;
            }
        }
        let tc = tangent_check(alg, &x, &[1e-2, 1e-3, 1e-4])?;
        // An identically zero error (P_X = 0) is order ∞.
        let order = if tc.errors.iter().all(|e| *e == 0.0) { f64::INFINITY } else { tc.min_order };
        worst = worst.min(order);
        t.count();
        if !(order >= 0.99) {
            t.fail();
        }
    }
    let mut c = t.finish();
    c.max_residual = if worst.is_finite() { (1.0 - worst).max(0.0) } else { 0.0 };
    Ok(c)
}

/// Output of [`run_suite`].
#[derive(Debug, Clone, Serialize)]
pub struct SuiteRun {
    pub report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<ExponentAudit>,
}

/// Runs one suite on `alg` in the given mode.
pub fn run_suite(
    suite: Suite,
    alg: &JordanAlgebra<Rational>,
    family: Option<&FamilySpec>,
    mode: Mode,
    opts: &SuiteOptions,
) -> Result<SuiteRun, SuiteError> {
    let start = Instant::now();
    let target = format!("{} {}", suite.name(), alg.name());
    let mut report = VerificationReport::new(target, mode);
    let mut audit = None;
    match (suite, mode) {
        (Suite::Jordan, Mode::Rational) => report.extend(jordan_checks(&alg.check_jordan_seeded(opts.seed))),
        (Suite::Jordan, Mode::Float) => report.extend(jordan_checks(&alg.to_f64().check_jordan_seeded(opts.seed))),
        (Suite::Semisimple, Mode::Rational) => report.extend(semisimple_checks(alg)),
        (Suite::Semisimple, Mode::Float) => report.extend(semisimple_checks(&alg.to_f64())),
        (Suite::Triple, Mode::Rational) => report.extend(triple_checks(alg, opts.samples, opts.seed)?),
        (Suite::Triple, Mode::Float) => report.extend(triple_checks(&alg.to_f64(), opts.samples, opts.seed)?),
        (Suite::Pair, Mode::Rational) => report.extend(pair_checks(alg)?),
        (Suite::Pair, Mode::Float) => report.extend(pair_checks(&alg.to_f64())?),
        (Suite::Detformula, _) => {
            let spec = family.or(alg.family()).ok_or(SuiteError::NoFamily)?;
            let (checks, a) = detformula_checks(spec, opts.samples, opts.seed, mode)?;
            report.extend(checks);
            audit = Some(a);
        }
        (Suite::Gauss, Mode::Rational) => report.extend(gauss_checks(alg, &opts.l1, opts.samples, opts.seed)?),
        (Suite::Gauss, Mode::Float) => report.extend(gauss_checks(&alg.to_f64(), &opts.l1, opts.samples, opts.seed)?),
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(SuiteRun { report, audit })
}
