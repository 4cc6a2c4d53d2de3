use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ncat_algebra::alg::{morita_search, segal_roundtrip, BimoduleWitness, ComposablePair, MoritaOutcome};
use ncat_algebra::algebra::Algebra;
use ncat_algebra::bimodule::{relative_tensor, Bimodule, DEFAULT_ISO_CUTOFF};
use ncat_algebra::corpus;
use ncat_algebra::module::{FpModule, GroundRing};
use ncat_algebra::segal::{check_nfold_segal, check_segal_monoid, check_uple, PresheafSpec};
use ncat_cli::report::{emit, Aggregate, Format};
use ncat_cli::suites::SuiteError;
use ncat_cli::{run_all, run_suite, CliError, Report, RunConfig};
use ncat_combinat::gamma::{enumerate_gamma, gamma_classify, GammaMorphism};
use ncat_combinat::nerve::{cellular_host, class_counts, u_host};
use ncat_combinat::simplex::{enumerate_active, enumerate_morphisms, DeltaMorphism, DeltaNMorphism};
use ncat_combinat::{Budget, CombinatError, Tally};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ncat", version, about = "Finite checks for Segal objects, slices of Δ and bimodule composition")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    #[arg(long, global = true, env = "NCAT_TRUNCATION", default_value_t = 3)]
    truncation: usize,
    #[arg(long, global = true, env = "NCAT_BUDGET", default_value_t = 1_000_000)]
    budget: u64,
    /// largest bimodule carrier, in elements, in corpus sweeps
    #[arg(long, global = true, env = "NCAT_CAP", default_value_t = 64)]
    cap: u64,
    #[arg(long, global = true, env = "NCAT_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, env = "NCAT_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "NCAT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "NCAT_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// List the maps [src] → [tgt] of Δ, or of Γ with --gamma.
    Enumerate {
        #[arg(long)]
        src: usize,
        #[arg(long)]
        tgt: usize,
        /// active maps only
        #[arg(long)]
        active: bool,
        #[arg(long)]
        gamma: bool,
    },
    /// Active/inert factorization of a morphism given as JSON.
    Factorize {
        #[arg(long)]
        morphism: String,
    },
    /// Counts of nondegenerate simplices per family in a nerve.
    ClassifySimplices {
        /// `cellular` for Λ/[i] or `u` for 𝒰
        #[arg(long, default_value = "cellular")]
        host: String,
        #[arg(long, default_value_t = 2)]
        i: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Segal checks on a presheaf read from a JSON file.
    CheckSegal {
        #[arg(long)]
        input: PathBuf,
    },
    /// Relative tensor product of two bimodules.
    Tensor {
        /// corpus index or `Z/n`
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// `second ∘ first` for two morphisms given as JSON.
    Compose {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Fill a composable pair over Δ/[2], restrict back and compare.
    Roundtrip {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Bounded search for an invertible pair of bimodules.
    Morita {
        /// corpus algebra index
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// most generators of a candidate's underlying module
        #[arg(long, default_value_t = 2)]
        generators: usize,
    },
    /// Run one registered suite.
    VerifyLemma { tag: String },
    /// Run every registered suite.
    ReportAll,
}

impl GlobalArgs {
    fn config(&self) -> RunConfig {
        RunConfig { truncation: self.truncation, budget: self.budget, cap: self.cap, jobs: self.jobs, out: self.out.clone(), seed: self.seed }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyMorphism {
    Gamma(GammaMorphism),
    Delta(DeltaMorphism),
    DeltaN(DeltaNMorphism),
}

fn parse_morphism(s: &str) -> Result<AnyMorphism, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Input(format!("not a morphism: {e}")))
}

fn bimodule(name: &str) -> Result<Bimodule, CliError> {
    if let Some(n) = name.strip_prefix("Z/") {
        let n: u64 = n.parse().map_err(|_| CliError::Input(format!("bad cyclic group {name}")))?;
        let m = FpModule::cyclic(GroundRing::Integers, &[n]).map_err(SuiteError::from)?;
        return Ok(Bimodule::scalar(&m));
    }
    let ms = corpus::bimodules().map_err(SuiteError::from)?;
    let listing = || ms.iter().enumerate().map(|(i, m)| format!("{i}: {m} over ({}, {})", m.left(), m.right())).collect::<Vec<_>>().join("; ");
    name.parse::<usize>().ok().and_then(|i| ms.get(i).cloned()).ok_or_else(|| CliError::Input(format!("no bimodule {name}; corpus is {}", listing())))
}

fn algebra(i: usize) -> Result<Arc<Algebra>, CliError> {
    let algs = corpus::algebras();
    let listing = algs.iter().enumerate().map(|(i, a)| format!("{i}: {a}")).collect::<Vec<_>>().join("; ");
    algs.get(i).cloned().ok_or_else(|| CliError::Input(format!("no algebra {i}; corpus is {listing}")))
}

/// Computation results go out as a passing report with the result in
/// `details`; a bound that stops them makes the report INCONCLUSIVE.
fn computed(name: &str, anchor: &str, cfg: &RunConfig, start: Instant, result: Result<Value, CliError>) -> Result<Report, CliError> {
    match result {
        Ok(v) => {
            let mut t = Tally::new();
            t.pass();
            Ok(Report::from_tally(name, anchor, t, v, cfg, start.elapsed()))
        }
        Err(CliError::Suite(e)) => match e.bound() {
            Some(why) => Ok(Report::stopped(name, anchor, why, cfg, start.elapsed())),
            None => Err(CliError::Suite(e)),
        },
        Err(e) => Err(e),
    }
}

fn combinat<T>(r: Result<T, CombinatError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Suite(e.into()))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let cfg = cli.global.config();
    cfg.validate()?;
    let budget = Budget(cfg.budget);
    let start = Instant::now();
    let report = match cli.command {
        Command::ReportAll => {
            let all = Aggregate::new(&cfg, run_all(&cfg)?);
            let lines: Vec<String> = all.reports.iter().map(Report::summary_line).chain([format!("overall {}", all.verdict)]).collect();
            emit(&all, &lines, cli.global.format, &cfg)?;
            return Ok(all.exit_code());
        }
        Command::VerifyLemma { tag } => run_suite(&tag, &cfg)?,
        Command::Enumerate { src, tgt, active, gamma } => {
            let listed = if gamma {
                combinat(enumerate_gamma(src, tgt, budget)).map(|v| json!({ "count": v.len(), "morphisms": v }))
            } else {
                let v = if active { enumerate_active(src, tgt, budget) } else { enumerate_morphisms(src, tgt, budget) };
                combinat(v).map(|v| json!({ "count": v.len(), "morphisms": v }))
            };
            computed("enumerate", "monotone or pointed maps between finite ordinals", &cfg, start, listed)?
        }
        Command::Factorize { morphism } => {
            let out = match parse_morphism(&morphism)? {
                AnyMorphism::Delta(f) => {
                    let fac = f.factorize();
                    json!({ "class": f.classify(), "active": fac.active, "inert": fac.inert })
                }
                AnyMorphism::DeltaN(f) => {
                    let (a, i) = f.factorize();
                    json!({ "class": f.classify(), "active": a, "inert": i })
                }
                AnyMorphism::Gamma(g) => json!({ "class": gamma_classify(&g) }),
            };
            computed("factorize", "active/inert factorization", &cfg, start, Ok(out))?
        }
        Command::Compose { first, second } => {
            let out = match (parse_morphism(&first)?, parse_morphism(&second)?) {
                (AnyMorphism::Delta(f), AnyMorphism::Delta(g)) => combinat(f.then(&g)).map(|h| json!(h)),
                (AnyMorphism::DeltaN(f), AnyMorphism::DeltaN(g)) => combinat(f.then(&g)).map(|h| json!(h)),
                (AnyMorphism::Gamma(f), AnyMorphism::Gamma(g)) => combinat(f.then(&g)).map(|h| json!(h)),
                _ => Err(CliError::Input("both morphisms must live in the same category".into())),
            };
            computed("compose", "composition of morphisms", &cfg, start, out)?
        }
        Command::ClassifySimplices { host, i, max_dim } => {
            let h = match host.as_str() {
                "cellular" => combinat(cellular_host(i, cfg.truncation))?,
                "u" => combinat(u_host(cfg.truncation))?,
                other => return Err(CliError::Input(format!("unknown host {other}; use `cellular` or `u`"))),
            };
            let counts: Vec<std::collections::BTreeMap<String, usize>> = class_counts(&h, max_dim).into_iter().map(|m| m.into_iter().collect()).collect();
            computed("classify-simplices", "families of nondegenerate simplices", &cfg, start, Ok(json!({ "host": h.name, "by_dimension": counts })))?
        }
        Command::CheckSegal { input } => {
            let text = std::fs::read_to_string(&input).map_err(|e| CliError::Io(input.display().to_string(), e))?;
            let spec: PresheafSpec = serde_json::from_str(&text)?;
            let index = spec.index().map_err(SuiteError::from)?;
            let x = spec.build(&index).map_err(SuiteError::from)?;
            let mut t = x.audit_functoriality();
            if spec.arity == 1 {
                t.merge(check_segal_monoid(&x));
            } else {
                t.merge(check_uple(&x));
                t.merge(check_nfold_segal(&x).map_err(SuiteError::from)?);
            }
            Report::from_tally("check-segal", "Segal condition on a finite presheaf", t, json!({ "input": input }), &cfg, start.elapsed())
        }
        Command::Tensor { left, right } => {
            let (m, n) = (bimodule(&left)?, bimodule(&right)?);
            let out = relative_tensor(&m, &n).map_err(|e| CliError::Suite(e.into())).map(|t| {
                let b = &t.bimodule;
                json!({ "module": b.module().describe(), "size": b.module().size().map(|s| s.to_string()), "invariant_factors": b.module().invariant_factors(), "bimodule": BimoduleWitness::from(b) })
            });
            computed("tensor", "relative tensor product over the middle algebra", &cfg, start, out)?
        }
        Command::Roundtrip { left, right } => {
            let pair = ComposablePair::new(bimodule(&left)?, bimodule(&right)?).map_err(SuiteError::from)?;
            let r = segal_roundtrip(&pair, DEFAULT_ISO_CUTOFF).map_err(SuiteError::from)?;
            let filled = BimoduleWitness::from(&r.filled);
            Report::from_tally("roundtrip", "composite filling restricts back to its edges", r.tally, json!({ "filled": filled }), &cfg, start.elapsed())
        }
        Command::Morita { a, b, generators } => {
            let (a, b) = (algebra(a)?, algebra(b)?);
            let out = morita_search(&a, &b, generators, cfg.budget, DEFAULT_ISO_CUTOFF).map_err(SuiteError::from)?;
            let mut t = Tally::new();
            let details = match out {
                MoritaOutcome::Found { p, q, .. } => {
                    t.pass();
                    json!({ "p": BimoduleWitness::from(&p), "q": BimoduleWitness::from(&q) })
                }
                MoritaOutcome::NoneWithinCap { candidates } => {
                    t.fail(|| format!("no invertible pair among {} and {} candidates", candidates.0, candidates.1));
                    Value::Null
                }
                MoritaOutcome::Inconclusive(why) => {
                    t.undecided(|| why);
                    Value::Null
                }
            };
            Report::from_tally("morita", "invertible bimodules between two algebras", t, details, &cfg, start.elapsed())
        }
    };
    emit(&report, &[report.summary_line()], cli.global.format, &cfg)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(64)
        }
    }
}
