//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::Instant;

use jordanaff::calabi::{calabi_checks, compose_point, direct_sum, CalabiFactor, CalabiSpec};
use jordanaff::catalog::{build, desk_instances, exponent_audit, verify_det_formula, Family, FamilySpec};
use jordanaff::hypersurface::{build_model, scale_constant, HypersurfaceModel, ModelError, DEFAULT_STEP, DEFAULT_STEPS};
use jordanaff::jordan::JordanAlgebra;
use jordanaff::report::Check;
use jordanaff::suite::tangent_suite;
use jordanaff::triple::{check_pair, triple_identities};
use jordanaff::{Mode, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_917;
const L1S: [i64; 3] = [-1, 1, 2];

struct Instance {
    spec: FamilySpec,
    alg: JordanAlgebra<Rational>,
    models: Vec<HypersurfaceModel<Rational>>,
}

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), notes: Vec::new() }
    }
}

/// Folds checks from many targets into pass/fail, the worst residual and the
/// names of failing targets.
fn fold(results: Vec<(String, Vec<Check>)>) -> (bool, f64, usize, Vec<String>) {
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    let mut count = 0;
    for (target, checks) in results {
        for c in checks {
            count += 1;
            worst = worst.max(c.max_residual);
            if !c.pass {
                failing.push(format!("{target}: {} (residual {:e})", c.name, c.max_residual));
            }
        }
    }
    (failing.is_empty(), worst, count, failing)
}

fn exact(results: Vec<(String, Vec<Check>)>, what: &str) -> Outcome {
    let n = results.len();
    let (pass, worst, count, failing) = fold(results);
    let pass = pass && worst == 0.0;
    let mut o = Outcome::new(pass, format!("{what}: {count} checks on {n} targets, max residual {worst:e}"));
    o.notes = failing;
    o
}

fn c1_jordan(inst: &[Instance]) -> Outcome {
    let start = Instant::now();
    let results: Vec<_> = inst
        .par_iter()
        .map(|i| {
            let c = i.alg.check_jordan_seeded(SEED);
            let ok = c.pass && c.ja1_max == 0.0 && c.ja2_max == 0.0;
            let check = Check { name: "jordan".into(), pass: ok, max_residual: c.ja1_max.max(c.ja2_max), samples: c.samples, seed: SEED };
            (i.spec.to_string(), vec![check])
        })
        .collect();
    let families: std::collections::BTreeSet<_> = inst.iter().map(|i| i.spec.family.cli_name()).collect();
    let secs = start.elapsed().as_secs_f64();
    let mut o = exact(results, &format!("{} families", families.len()));
    o.pass &= families.len() == Family::ALL.len() && secs < 300.0;
    o.detail.push_str(&format!(", {secs:.1} s"));
    o
}

fn c2_detformula(inst: &[Instance]) -> Outcome {
    let results: Vec<_> = inst
        .par_iter()
        .map(|i| {
            let samples = if i.alg.dim() > 30 { 4 } else { 30 };
            let r = verify_det_formula(&i.spec, samples, SEED, Mode::Rational);
            let audit = exponent_audit(&i.spec, 3, SEED);
            (i.spec.to_string(), r, audit)
        })
        .collect();
    let mut notes = Vec::new();
    let mut checks = Vec::new();
    let mut pass = true;
    for (target, r, audit) in results {
        match r {
            Ok(r) => {
                pass &= r.pass && r.mismatches == 0;
                checks.push((target.clone(), vec![Check { name: "det_p_closed_form".into(), pass: r.pass, max_residual: r.max_deviation, samples: r.samples, seed: r.seed }]));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{target}: {e}"));
            }
        }
        match audit {
            Ok(a) if !(a.table_matches && a.list_matches) => notes.push(format!(
                "audit {target} item {}: observed 2p = {:?}, table 2p = {}, list 2p = {} (reported, not a failure)",
                a.item, a.observed_twice_exponent, a.table_twice_exponent, a.list_twice_exponent
            )),
            Ok(_) => {}
            Err(e) => {
                pass = false;
                notes.push(format!("audit {target}: {e}"));
            }
        }
    }
    let mut o = exact(checks, "exact closed forms");
    o.pass &= pass;
    o.notes.extend(notes);
    o
}

fn models_checks(inst: &[Instance], f: impl Fn(&HypersurfaceModel<Rational>) -> Vec<Check> + Sync) -> Vec<(String, Vec<Check>)> {
    inst.par_iter()
        .flat_map_iter(|i| i.models.iter().map(|m| (format!("{} L1={}", i.spec, m.l1), f(m))).collect::<Vec<_>>())
        .collect()
}

fn c3_trace_form(inst: &[Instance]) -> Outcome {
    exact(models_checks(inst, |m| vec![m.trace_form_check()]), "L1 in {-1, 1, 2}")
}

fn c4_structure(inst: &[Instance]) -> Outcome {
    let results: Vec<_> = inst
        .par_iter()
        .map(|i| {
            let mut checks = match i.alg.operator_identities(100, SEED) {
                Ok(c) => c,
                Err(e) => vec![failed(&format!("operator identities: {e}"))],
            };
            let pair = i.models[0].pair();
            match triple_identities(&i.alg, Some(pair), 100, SEED) {
                Ok(c) => checks.extend(c),
                Err(e) => checks.push(failed(&format!("triple identities: {e}"))),
            }
            let short: Vec<_> = checks.iter().filter(|c| c.samples < 100 && c.name != "fundamental_identity_det").map(|c| c.name.clone()).collect();
            if !short.is_empty() {
                checks.push(failed(&format!("fewer than 100 samples: {short:?}")));
            }
            (i.spec.to_string(), checks)
        })
        .collect();
    exact(results, "100 samples each")
}

fn failed(name: &str) -> Check {
    Check { name: name.into(), pass: false, max_residual: f64::INFINITY, samples: 0, seed: SEED }
}

fn c5_pair(inst: &[Instance]) -> Outcome {
    let results: Vec<_> = inst.par_iter().map(|i| (i.spec.to_string(), check_pair(i.models[0].pair(), &i.alg))).collect();
    exact(results, "rank residuals")
}

fn c6_gauss(inst: &[Instance]) -> Outcome {
    exact(models_checks(inst, |m| vec![m.gauss_check()]), "all basis triples")
}

fn c7_cubic(inst: &[Instance]) -> Outcome {
    exact(models_checks(inst, |m| vec![m.symmetry_check(), m.apolarity_check()]), "A_o")
}

fn random_sums(inst: &[Instance]) -> Vec<JordanAlgebra<Rational>> {
    let small: Vec<&Instance> = inst.iter().filter(|i| i.alg.dim() <= 10).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..3)
        .map(|_| {
            let k = rng.gen_range(2..=3);
            let parts: Vec<_> = small.choose_multiple(&mut rng, k).map(|i| i.alg.clone()).collect();
            direct_sum(&parts).expect("direct sum of catalog algebras")
        })
        .collect()
}

fn roundtrip(alg: &JordanAlgebra<Rational>, model: &HypersurfaceModel<Rational>) -> Check {
    let ok = match model.reconstruct() {
        Ok(rec) => !rec.flagged && rec.algebra == *alg && rec.algebra.tensor() == alg.tensor(),
        Err(_) => false,
    };
    Check { name: "roundtrip".into(), pass: ok, max_residual: if ok { 0.0 } else { 1.0 }, samples: 1, seed: 0 }
}

fn c8_roundtrip(inst: &[Instance]) -> Outcome {
    let mut results: Vec<_> = inst.par_iter().map(|i| (i.spec.to_string(), vec![roundtrip(&i.alg, &i.models[0])])).collect();
    let sums = random_sums(inst);
    results.extend(sums.par_iter().map(|s| {
        let check = match build_model(s, Rational::integer(-1)) {
            Ok(m) => roundtrip(s, &m),
            Err(e) => failed(&format!("model: {e}")),
        };
        (s.name().to_string(), vec![check])
    }).collect::<Vec<_>>());
    let names: Vec<_> = sums.iter().map(|s| s.name().to_string()).collect();
    let mut o = exact(results, "every family plus 3 random sums");
    o.notes.push(format!("random sums: {}", names.join(", ")));
    o
}

fn c9_level(inst: &[Instance]) -> Outcome {
    let results = models_checks(inst, |m| {
        let level = m.to_f64().level_check(200, DEFAULT_STEPS, DEFAULT_STEP, SEED);
        let enough = Check { name: "200_points".into(), pass: level.samples == 200, max_residual: 0.0, samples: level.samples, seed: SEED };
        vec![level, enough]
    });
    let (level_pass, worst, count, mut failing) = fold(results);
    let normal = models_checks(inst, |m| vec![m.affine_normal_check()]);
    let (normal_pass, normal_worst, _, f2) = fold(normal);
    failing.extend(f2);
    let mut o = Outcome::new(
        level_pass && worst <= 1e-8 && normal_pass && normal_worst == 0.0,
        format!("200 points per model, {count} checks, worst |det P_p / C^(2(n+1)) - 1| = {worst:e}; affine normal residual {normal_worst:e}"),
    );
    o.notes = failing;
    o
}

fn calabi_specs(inst: &[Instance]) -> Vec<(String, CalabiSpec)> {
    let find = |f: Family| inst.iter().find(|i| i.spec.family == f).unwrap().alg.clone();
    let fac = |a: JordanAlgebra<Rational>, l1: i64| CalabiFactor { algebra: a, l1: Rational::integer(l1) };
    let reals = find(Family::Reals);
    let s3 = build(&FamilySpec::new(Family::SymmetricR).with_m(3)).unwrap();
    let h3 = build(&FamilySpec::new(Family::HermitianC).with_m(3)).unwrap();
    vec![
        ("R+R".into(), CalabiSpec::new(vec![fac(reals.clone(), -1), fac(reals.clone(), -1)], Rational::integer(-1))),
        ("C+S3(R)+R".into(), CalabiSpec::new(vec![fac(find(Family::ComplexField), -1), fac(s3, 2), fac(reals.clone(), 1)], Rational::new(-1, 2))),
        ("H3(C)+R".into(), CalabiSpec::new(vec![fac(h3, -1), fac(reals, 2)], Rational::integer(1))),
    ]
}

fn c10_calabi(inst: &[Instance]) -> Outcome {
    let specs = calabi_specs(inst);
    let results: Vec<_> = specs
        .par_iter()
        .map(|(name, s)| (name.clone(), calabi_checks(s, 200, SEED).unwrap_or_else(|e| vec![failed(&e.to_string())])))
        .collect();
    let (pass, worst, count, mut notes) = fold(results);

    // ℝ ⊕ ℝ: composed points trace u₁u₂ = C² with C = 1/2.
    let rr = &specs[0].1;
    let c = scale_constant(1, -1.0).unwrap();
    let mut hyperbola = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..200 {
        let t: f64 = rng.gen_range(-3.0..3.0);
        match compose_point(rr, &[t, -t], &[vec![1.0], vec![1.0]]) {
            Ok(p) => hyperbola = hyperbola.max(((p[0] * p[1]) / (c * c) - 1.0).abs()),
            Err(_) => hyperbola = f64::INFINITY,
        }
    }
    let rejected = matches!(compose_point(rr, &[0.25, 0.0], &[vec![1.0], vec![1.0]]), Err(ModelError::T0Constraint(_)))
        && matches!(compose_point(rr, &[1e-9, 0.0], &[vec![1.0], vec![1.0]]), Err(ModelError::T0Constraint(_)));
    if hyperbola > 1e-12 {
        notes.push(format!("hyperbola residual {hyperbola:e}"));
    }
    if !rejected {
        notes.push("T0 constraint violation accepted".into());
    }
    let mut o = Outcome::new(
        pass && hyperbola <= 1e-12 && rejected,
        format!("{count} checks on {} specs (worst {worst:e}), hyperbola residual {hyperbola:e}, T0 violations rejected: {rejected}", specs.len()),
    );
    o.notes = notes;
    o
}

fn c11_tangent(inst: &[Instance]) -> Outcome {
    let results: Vec<_> = inst
        .par_iter()
        .map(|i| {
            let c = tangent_suite(&i.alg.to_f64(), 10, SEED).unwrap_or_else(|e| failed(&e.to_string()));
            (i.spec.to_string(), vec![c])
        })
        .collect();
    let (pass, worst, count, failing) = fold(results);
    let mut o = Outcome::new(pass, format!("order >= 0.99, {count} algebras, worst 1 - order = {worst:e}"));
    o.notes = failing;
    o
}

fn main() -> ExitCode {
    let start = Instant::now();
    let inst: Vec<Instance> = desk_instances()
        .into_par_iter()
        .map(|spec| {
            let alg = build(&spec).expect("catalog instance");
            let models = L1S.iter().map(|&l| build_model(&alg, Rational::integer(l)).expect("model")).collect();
            Instance { spec, alg, models }
        })
        .collect();
    println!("acceptance: {} desk-scale instances, seed {SEED}", inst.len());

    let criteria: [(&str, fn(&[Instance]) -> Outcome); 11] = [
        ("jordan axioms", c1_jordan),
        ("determinant table", c2_detformula),
        ("trace-form identities", c3_trace_form),
        ("structure identities", c4_structure),
        ("symmetric pair", c5_pair),
        ("Gauss equation", c6_gauss),
        ("apolarity and symmetry", c7_cubic),
        ("roundtrip", c8_roundtrip),
        ("level set and affine normal", c9_level),
        ("Calabi composition", c10_calabi),
        ("tangent check", c11_tangent),
    ];
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f(&inst);
        all &= o.pass;
        println!(
            "criterion {:>2} {}  {name}: {} [{:.1} s]",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        for n in &o.notes {
            println!("    {n}");
        }
    }
    println!("acceptance: {} in {:.1} s", if all { "all criteria pass" } else { "FAILED" }, start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
