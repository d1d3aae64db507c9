use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jordanaff::calabi::{calabi_checks, compose, sample_composed};
use jordanaff::catalog::{self, build, Family, FamilySpec};
use jordanaff::hypersurface::{build_model, reconstruct_algebra, DEFAULT_STEP, DEFAULT_STEPS};
use jordanaff::io;
use jordanaff::jordan::{JordanAlgebra, DEFAULT_SEED};
use jordanaff::report::{Check, VerificationReport};
use jordanaff::suite::{jordan_checks, run_suite, Suite, SuiteOptions};
use jordanaff::{Mode, Rational};

#[derive(Parser)]
#[command(name = "jordanaff", version, about = "Real Jordan algebras and their equiaffine symmetric hypersurfaces")]
struct Cli {
    /// Print a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Arithmetic for checks.
    #[arg(long, global = true, env = "JORDANAFF_MODE", default_value = "rational")]
    mode: Mode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or build catalog algebras.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Run a verification suite on one algebra.
    Verify(VerifyArgs),
    /// Build a hypersurface model or sample points on it.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Calabi composition of several models.
    #[command(subcommand)]
    Calabi(CalabiCmd),
    /// Rebuild an algebra from an affine metric, a cubic form and L1.
    Reconstruct(ReconstructArgs),
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    m: Option<usize>,
    /// Signs of the twisting diagonal, e.g. `+,-,+`.
    #[arg(long, value_parser = parse_signs, allow_hyphen_values = true)]
    gamma: Option<Signs>,
    /// Signature of the quadratic form, e.g. `+,+,-`.
    #[arg(long, value_parser = parse_signs, allow_hyphen_values = true)]
    q: Option<Signs>,
    /// Allow sizes below the classification thresholds.
    #[arg(long)]
    desk: bool,
}

#[derive(Clone, Debug)]
struct Signs(Vec<i8>);

#[derive(Args)]
struct Source {
    /// Algebra JSON file.
    #[arg(long, conflicts_with = "family")]
    alg: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, requires = "family")]
    m: Option<usize>,
    #[arg(long, value_parser = parse_signs, allow_hyphen_values = true, requires = "family")]
    gamma: Option<Signs>,
    #[arg(long, value_parser = parse_signs, allow_hyphen_values = true, requires = "family")]
    q: Option<Signs>,
    #[arg(long, requires = "family")]
    desk: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Affine mean curvature for `gauss`.
    #[arg(long = "L1", default_value = "-1", allow_hyphen_values = true)]
    l1: Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Jordan,
    Semisimple,
    Triple,
    Pair,
    Detformula,
    Gauss,
}

#[derive(Subcommand)]
enum ModelCmd {
    Build {
        #[command(flatten)]
        source: Source,
        #[arg(long = "L1", allow_hyphen_values = true)]
        l1: Rational,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// `.json` writes a JSON array, anything else CSV.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CalabiCmd {
    Compose {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Composed points sampled for the level check.
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also write the sampled points as CSV.
        #[arg(long)]
        points: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    g: PathBuf,
    #[arg(long = "A")]
    a: PathBuf,
    #[arg(long = "L1", allow_hyphen_values = true)]
    l1: Rational,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_signs(s: &str) -> Result<Signs, String> {
    s.split(',')
        .map(|t| match t.trim() {
            "+" | "1" | "+1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(format!("expected + or -, found {other:?}")),
        })
        .collect::<Result<_, _>>()
        .map(Signs)
}

fn family_spec(family: Family, m: Option<usize>, gamma: Option<Signs>, q: Option<Signs>, desk: bool) -> FamilySpec {
    FamilySpec { family, m, gamma: gamma.map(|s| s.0), q: q.map(|s| s.0), strict: !desk }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("{}: cannot write", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

impl Source {
    fn load(&self) -> Result<(JordanAlgebra<Rational>, Option<FamilySpec>)> {
        match (&self.alg, self.family) {
            (Some(path), _) => {
                let loaded = io::deserialize_algebra(&path.display().to_string(), &read(path)?)?;
                let fam = loaded.algebra.family().cloned();
                Ok((loaded.algebra, fam))
            }
            (None, Some(f)) => {
                let spec = family_spec(f, self.m, self.gamma.clone(), self.q.clone(), self.desk);
                Ok((build(&spec)?, Some(spec)))
            }
            (None, None) => bail!("pass --alg FILE or --family NAME"),
        }
    }
}

/// Prints the report and returns whether every check passed.
fn emit<T: Serialize>(json: bool, report: &VerificationReport, extra: Option<&T>) -> Result<bool> {
    if json {
        #[derive(Serialize)]
        struct Out<'a, T> {
            #[serde(flatten)]
            report: &'a VerificationReport,
            pass: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            details: Option<&'a T>,
        }
        println!("{}", serde_json::to_string_pretty(&Out { report, pass: report.pass(), details: extra })?);
    } else {
        println!("{} [{}]", report.target, report.mode);
        for c in &report.checks {
            print_check(c);
        }
        println!("{} ({} ms)", if report.pass() { "PASS" } else { "FAIL" }, report.elapsed_ms);
    }
    Ok(report.pass())
}

fn print_check(c: &Check) {
    println!(
        "  {:<4} {:<32} max_residual={:.3e} samples={} seed={}",
        if c.pass { "ok" } else { "FAIL" },
        c.name,
        c.max_residual,
        c.samples,
        c.seed
    );
}

fn run(cli: Cli) -> Result<bool> {
    let json = cli.json;
    let mode = cli.mode;
    match cli.command {
        Command::Catalog(CatalogCmd::List) => {
            if json {
                let rows: Vec<_> = catalog::list()
                    .into_iter()
                    .map(|(f, d)| serde_json::json!({"family": f.cli_name(), "description": d, "uses_m": f.uses_m()}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                for (f, d) in catalog::list() {
                    println!("{:<30} {}", f.cli_name(), d);
                }
            }
            Ok(true)
        }
        Command::Catalog(CatalogCmd::Build { family, output }) => {
            let spec = family_spec(family.family, family.m, family.gamma, family.q, family.desk);
            let alg = build(&spec)?;
            write_out(output.as_deref(), &io::serialize_algebra(&alg, mode))?;
            if output.is_some() && !json {
                println!("{} (dim {})", alg.name(), alg.dim());
            }
            Ok(true)
        }
        Command::Verify(args) => {
            let (alg, fam) = args.source.load()?;
            let suite = match args.suite {
                SuiteArg::Jordan => Suite::Jordan,
                SuiteArg::Semisimple => Suite::Semisimple,
                SuiteArg::Triple => Suite::Triple,
                SuiteArg::Pair => Suite::Pair,
                SuiteArg::Detformula => Suite::Detformula,
                SuiteArg::Gauss => Suite::Gauss,
            };
            let opts = SuiteOptions { samples: args.samples, seed: args.seed, l1: args.l1 };
            let run = run_suite(suite, &alg, fam.as_ref(), mode, &opts)?;
            if !json {
                if let Some(a) = &run.audit {
                    println!(
                        "exponent audit: observed 2p={:?}, table 2p={} ({}), list 2p={} ({})",
                        a.observed_twice_exponent,
                        a.table_twice_exponent,
                        if a.table_matches { "matches" } else { "differs" },
                        a.list_twice_exponent,
                        if a.list_matches { "matches" } else { "differs" },
                    );
                }
            }
            emit(json, &run.report, run.audit.as_ref())
        }
        Command::Model(ModelCmd::Build { source, l1, output }) => {
            let (alg, _) = source.load()?;
            let start = std::time::Instant::now();
            let model = build_model(&alg, l1)?;
            let mut report = VerificationReport::new(format!("model {}", alg.name()), Mode::Rational);
            report.extend(model.checks());
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            if let Some(p) = &output {
                write_out(Some(p), &io::serialize_model(&model))?;
            }
            let summary = model.summary();
            if !json {
                println!("{}", serde_json::to_string(&summary)?);
            }
            emit(json, &report, Some(&summary))
        }
        Command::Model(ModelCmd::Sample { model, count, seed, steps, step, output }) => {
            let m = io::deserialize_model(&model.display().to_string(), &read(&model)?)?.to_f64();
            let pts = m.sample_points(count, steps, step, seed);
            let worst = pts.iter().map(|p| m.level_residual(p).abs()).fold(0.0, f64::max);
            let text = match output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
                Some("json") => io::points_json(&pts),
                _ => {
                    let mut buf = Vec::new();
                    io::write_points_csv(&mut buf, &pts)?;
                    String::from_utf8(buf)?
                }
            };
            write_out(output.as_deref(), &text)?;
            let mut report = VerificationReport::new(format!("sample {}", m.algebra.name()), Mode::Float);
            report.push(Check {
                name: "level_set".into(),
                pass: worst <= jordanaff::TOL.level,
                max_residual: worst,
                samples: count,
                seed,
            });
            if output.is_none() {
                return Ok(report.pass());
            }
            emit::<()>(json, &report, None)
        }
        Command::Calabi(CalabiCmd::Compose { spec, output, count, seed, points }) => {
            let s = io::parse_calabi_spec(&spec.display().to_string(), &read(&spec)?)?;
            let start = std::time::Instant::now();
            let comp = compose(&s)?;
            let mut report = VerificationReport::new(format!("calabi {}", comp.model.algebra.name()), Mode::Rational);
            report.extend(calabi_checks(&s, count, seed)?);
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            if let Some(p) = &output {
                write_out(Some(p), &io::serialize_model(&comp.model))?;
            }
            if let Some(p) = &points {
                let pts = sample_composed(&s, count, 3, 0.3, 1.0, seed)?;
                let f = fs::File::create(p).with_context(|| format!("{}: cannot write", p.display()))?;
                io::write_points_csv(f, &pts)?;
            }
            emit(json, &report, Some(&serde_json::json!({ "warp": comp.warp, "C": comp.model.c })))
        }
        Command::Reconstruct(args) => {
            let g = io::parse_matrix(&args.g.display().to_string(), &read(&args.g)?)?;
            let a = io::parse_tensor(&args.a.display().to_string(), &read(&args.a)?)?;
            let start = std::time::Instant::now();
            let rec = reconstruct_algebra(&g, &a, &args.l1)?;
            write_out(args.output.as_deref(), &io::serialize_algebra(&rec.algebra, Mode::Rational))?;
            let mut report = VerificationReport::new("reconstruct", Mode::Rational);
            report.extend(jordan_checks(&rec.jordan));
            report.push(Check {
                name: "semisimple".into(),
                pass: rec.semisimple,
                max_residual: 0.0,
                samples: 1,
                seed: 0,
            });
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            if args.output.is_none() {
                return Ok(report.pass());
            }
            emit(json, &report, Some(&serde_json::json!({ "flagged": rec.flagged })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
