//! `ecdlog`: build models, solve discrete logarithms, replay certificates
//! and sample elimination statistics.
//!
//! Every subcommand prints one JSON document on stdout (or writes it to
//! `--out`) and logs to stderr. Exit codes: 0 success, 1 internal failure,
//! 2 bad parameters, 3 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ecdlog_core::algebra::Fe;
use ecdlog_core::certificate::{self, Certificate};
use ecdlog_core::model::{Model, ModelDoc, ModelReport, SCHEMA_VERSION};
use ecdlog_core::policy::Policy;
use ecdlog_core::{dlp, rng, stats, Error};

#[derive(Parser, Debug)]
#[command(name = "ecdlog", version, about = "Discrete logarithms in small-characteristic fields via an elliptic-curve model")]
struct Cli {
    /// Worker threads for sampling and relation collection.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: Option<u32>,
    /// Extension degree of the target field F_{q^n}.
    #[arg(long)]
    n: Option<usize>,
    /// Base field degree: q = p^r. Defaults to the smallest admissible value.
    #[arg(long)]
    r: Option<usize>,
    /// Load the model from a document written by `ecdlog model`.
    #[arg(long)]
    model_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PolicyArgs {
    /// JSON policy file; defaults to $ECDLP_POLICY, then built-in values.
    #[arg(long)]
    policy_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the elliptic-curve model of F_{p^n} and print it with its checks.
    Model {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Compute log_g(h) in F_{q^n}^× and print a certificate.
    Dlog {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Seed of every random choice.
        #[arg(long)]
        seed: u64,
        /// Target h as a hex coefficient string; random when omitted.
        #[arg(long)]
        target: Option<String>,
        /// Generator g as a hex coefficient string; the smallest generator
        /// when omitted.
        #[arg(long)]
        generator: Option<String>,
        /// Cross-check the answer with baby-step giant-step (small fields).
        #[arg(long)]
        oracle_check: bool,
    },
    /// Replay a certificate.
    Verify {
        /// Certificate file.
        certificate: PathBuf,
        /// Check against this model instead of the embedded one.
        #[arg(long)]
        model_file: Option<PathBuf>,
    },
    /// Sample elimination and trap statistics with binomial confidence bands.
    Stats {
        mode: StatsMode,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long)]
        seed: u64,
        /// Tower level i of the field F_{q^{2^i}} the divisors live over.
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Number of sampled divisors.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Random points per divisor for the kernel-dimension check
        /// (0 tests every point).
        #[arg(long, default_value_t = 16)]
        kernel_points: usize,
        /// Specializations t₀ drawn per divisor for the C′ degree census.
        #[arg(long, default_value_t = 10)]
        t0_draws: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum StatsMode {
    Split32,
    Split43,
    Traps,
}

/// Errors surfaced by the binary, carrying their exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Params(_) | Error::Format(_) => 2,
            Error::Verify(_) => 3,
            Error::Budget(_) | Error::Degenerate(_) | Error::Internal(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn params(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        log::warn!("thread pool: {e}");
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            log::error!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure { code: 1, message: format!("cannot write {}: {e}", path.display()) }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| params(format!("cannot read {}: {e}", path.display())))
}

fn load_model(f: &FieldArgs) -> Result<Model, Failure> {
    if let Some(path) = &f.model_file {
        let doc: ModelDoc = serde_json::from_str(&read(path)?).map_err(|e| params(format!("bad model file: {e}")))?;
        let m = Model::from_doc(&doc).map_err(|e| params(e.to_string()))?;
        let mismatch = f.p.is_some_and(|p| p != m.p())
            || f.n.is_some_and(|n| n != m.params.n_requested && n != m.n())
            || f.r.is_some_and(|r| r != m.r());
        if mismatch {
            return Err(params("--p/--n/--r disagree with the model file"));
        }
        return Ok(m);
    }
    let (Some(p), Some(n)) = (f.p, f.n) else {
        return Err(params("give --p and --n, or --model-file"));
    };
    let m = Model::build(p, n, f.r)?;
    log::info!("model: q = {}^{}, n = {}, |E(F_q)| = {}, ℓ = {}, s = {}", m.p(), m.r(), m.n(), m.order, m.ell, m.s);
    Ok(m)
}

fn parse_element(m: &Model, s: &str, what: &str) -> Result<Fe, Failure> {
    m.field().from_hex(s.trim()).ok_or_else(|| {
        params(format!("{what}: expected {} hex digit pairs (one per F_p coefficient, each < p)", m.field().degree()))
    })
}

#[derive(Serialize)]
struct ModelOut<'a> {
    #[serde(flatten)]
    doc: ModelDoc,
    model_digest: String,
    q: String,
    report: &'a ModelReport,
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Model { field } => {
            let m = load_model(field)?;
            let report = m.verify();
            emit(out, &ModelOut { doc: m.to_doc(), model_digest: m.digest(), q: m.q().to_string(), report: &report })?;
            if !report.ok {
                return Err(Failure { code: 1, message: "model checks failed".into() });
            }
            Ok(())
        }
        Command::Dlog { field, policy, seed, target, generator, oracle_check } => {
            let policy = Policy::load(policy.policy_file.as_deref())?;
            let m = load_model(field)?;
            let big = m.field();
            let g = match generator {
                Some(s) => parse_element(&m, s, "--generator")?,
                None => dlp::default_generator(&m),
            };
            let h = match target {
                Some(s) => parse_element(&m, s, "--target")?,
                None => big.random_nonzero(&mut rng::stream(*seed, "target")),
            };
            let run = dlp::dlog(&m, &g, &h, &policy, *seed)?;
            log::info!("log_g h = {} (mod ℓ: {}, mod s: {})", run.answer, run.answer_mod_ell, run.answer_mod_s);
            let oracle = if *oracle_check {
                let x = dlp::oracle_dlog(big, &g, &h, m.group_order(), policy.oracle_bound)?;
                if x != run.answer {
                    return Err(Failure { code: 1, message: format!("oracle disagrees: {x} != {}", run.answer) });
                }
                log::info!("oracle check passed");
                Some(x)
            } else {
                None
            };
            let cert = Certificate::build(&m, &run, *seed, &policy);
            match out {
                Some(path) => {
                    emit(Some(path), &cert)?;
                    let summary = json!({
                        "schema_version": SCHEMA_VERSION,
                        "model_digest": cert.model_digest,
                        "answer": cert.answer,
                        "answer_mod_ell": cert.answer_mod_ell,
                        "answer_mod_s": cert.answer_mod_s,
                        "oracle": oracle.map(|x| x.to_string()),
                        "certificate": path.display().to_string(),
                        "digest": cert.digest,
                    });
                    emit(None, &summary)
                }
                None => emit(None, &cert),
            }
        }
        Command::Verify { certificate: path, model_file } => {
            let cert = Certificate::from_json(&read(path)?).map_err(|e| Failure { code: 3, message: e.to_string() })?;
            let result = match model_file {
                Some(mf) => {
                    let m = load_model(&FieldArgs { p: None, n: None, r: None, model_file: Some(mf.clone()) })?;
                    certificate::verify_with(&cert, &m)
                }
                None => certificate::verify(&cert),
            };
            match result {
                Ok(rep) => emit(out, &json!({ "schema_version": SCHEMA_VERSION, "model_digest": cert.model_digest, "result": rep })),
                Err(e) => {
                    let msg = e.to_string();
                    emit(out, &json!({ "schema_version": SCHEMA_VERSION, "ok": false, "error": msg }))?;
                    Err(Failure { code: 3, message: msg })
                }
            }
        }
        Command::Stats { mode, field, policy, seed, level, samples, kernel_points, t0_draws } => {
            let policy = Policy::load(policy.policy_file.as_deref())?;
            let m = load_model(field)?;
            if m.r() << level > ecdlog_core::algebra::field::MAX_DEGREE {
                return Err(params("level too large for this base field"));
            }
            let head = json!({
                "schema_version": SCHEMA_VERSION,
                "model_digest": m.digest(),
                "seed": seed,
            });
            let body = match mode {
                StatsMode::Split32 => {
                    let kp = (*kernel_points > 0).then_some(*kernel_points);
                    let s = stats::split32(&m, *level, *samples, kp, true, *seed, &policy)?;
                    json!({ "mode": "split32", "stats": s, "median_within_bound": s.median_samples.is_some_and(|v| v <= s.bound) })
                }
                StatsMode::Split43 => {
                    let s = stats::split43(&m, *level, *samples, *t0_draws, true, *seed, &policy)?;
                    json!({ "mode": "split43", "stats": s, "median_within_bound": s.median_samples.is_some_and(|v| v <= s.bound) })
                }
                StatsMode::Traps => json!({ "mode": "traps", "stats": stats::traps(&m, *level, *samples, *seed, &policy) }),
            };
            let mut doc = head;
            doc.as_object_mut().expect("object").extend(body.as_object().expect("object").clone());
            emit(out, &doc)
        }
    }
}
