//! `rootmult`: batch front-end for q-th root multiplicities of S_n characters.

mod cache;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rootmult_core::cycles::MomentSpec;
use rootmult_core::multiplicity::{lambda_from_tail, MultiplicityEngine, MultiplicityResult};
use rootmult_core::number_theory::is_prime;
use rootmult_core::sampler::empirical_moment;
use rootmult_core::verify::{run_suite, Suite, VerifyConfig};
use rootmult_core::{Error, ExactScalar, Partition};
use serde_json::json;

use config::ConfigFile;
use output::{exact, rational_json, significant, Format, Row};

const MAX_Q: u64 = 1_000_000_000;
const MAX_BRUTE_N: u64 = 40;
const MAX_SAMPLE_N: u64 = 1_000_000;
const MAX_TABLE_DELTA: u64 = 8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("verification failed")]
    VerifyFailed,
    #[error("{0}")]
    Internal(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Input(_) => 2,
            CliError::Core(Error::Consistency(_)) | CliError::Internal(_) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rootmult",
    version,
    about = "Multiplicities of irreducible characters in the q-th root number function of S_n"
)]
struct Cli {
    /// key=value settings file; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for parallel paths (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicity of one character
    Multiplicity(MultiplicityArgs),
    /// Exact value against the main term over a range of q
    Table(TableArgs),
    /// Run a named verification suite
    Verify(VerifyArgs),
    /// Monte Carlo estimate of cycle-count moments of π^q
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    #[value(name = "closed_form")]
    ClosedForm,
    Asymptotic,
    All,
}

impl std::str::FromStr for MethodArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <MethodArg as ValueEnum>::from_str(s, false)
    }
}

#[derive(Args, Debug)]
struct MultiplicityArgs {
    /// Full partition, e.g. 4,1
    #[arg(long)]
    lambda: Option<String>,
    /// Tail partition below the first row; requires --n
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    mu: Option<String>,
    /// Defaults to |mu|·q for each q
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q_min: Option<u64>,
    #[arg(long)]
    q_max: Option<u64>,
    /// Only prime q
    #[arg(long)]
    primes: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: String,
    /// Upper limit for monitored constants
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Moment as k:m[,k:m...]; repeatable
    #[arg(long)]
    spec: Vec<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_partition(text: &str, what: &str) -> Result<Partition, CliError> {
    text.parse()
        .map_err(|e: Error| CliError::Input(format!("--{what}: {e}")))
}

fn check_q(q: u64) -> Result<u64, CliError> {
    if q == 0 || q > MAX_Q {
        return Err(CliError::Input(format!(
            "q must lie in 1..={MAX_Q}, got {q}"
        )));
    }
    Ok(q)
}

fn require<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Input(format!("missing --{name}")))
}

struct Context {
    cfg: ConfigFile,
    format: Format,
    engine: MultiplicityEngine,
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn exact_row(r: &MultiplicityResult, n: u64, main: Option<(&ExactScalar, &ExactScalar)>) -> Row {
    let value = ExactScalar::from(r.value.clone());
    Row {
        lambda: r.lambda.to_string(),
        q: r.q,
        n,
        method: r.method.as_str(),
        main_term: main.map(|(m, _)| m.clone()),
        error_scale: main.map(|(_, s)| s.clone()),
        ratio: main.map(|(m, _)| &value / m),
        monitored_k: main.map(|(m, s)| (&value - m).abs() / s.clone()),
        value,
        elapsed_ms: ms(r.elapsed),
    }
}

fn cmd_multiplicity(ctx: &Context, args: MultiplicityArgs) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let lambda_text = cfg.layer(args.lambda, "lambda")?;
    let mu_text = cfg.layer(args.mu, "mu")?;
    let q = check_q(require(cfg.layer(args.q, "q")?, "q")?)?;
    let method = cfg
        .layer(args.method, "method")?
        .unwrap_or(MethodArg::ClosedForm);
    let lambda = match (lambda_text, mu_text) {
        (Some(l), None) => parse_partition(&l, "lambda")?,
        (None, Some(m)) => {
            let n = require(cfg.layer(args.n, "n")?, "n")?;
            lambda_from_tail(&parse_partition(&m, "mu")?, n)?
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "give either --lambda or --mu, not both".into(),
            ))
        }
        (None, None) => return Err(CliError::Input("missing --lambda or --mu".into())),
    };
    if lambda.is_empty() {
        return Err(CliError::Input("lambda must be nonempty".into()));
    }
    let n = lambda.weight();
    let mu = lambda.remove_tail()?;
    let wants = |m: MethodArg| method == m || method == MethodArg::All;
    if wants(MethodArg::Brute) && n > MAX_BRUTE_N {
        return Err(CliError::Input(format!(
            "brute path supports n ≤ {MAX_BRUTE_N}, got {n}"
        )));
    }

    let t0 = Instant::now();
    let estimate = match ctx.engine.asymptotic(&mu, q) {
        Ok(e) => Some(e),
        Err(Error::TrivialCharacter) if method != MethodArg::Asymptotic => None,
        Err(e) => return Err(e.into()),
    };
    let asymptotic_ms = ms(t0.elapsed());
    if let Some(e) = estimate.as_ref().filter(|e| !e.within_range) {
        log::warn!(
            "|mu| = {} exceeds log2(q) for q = {q}; the main term is outside its proven range",
            e.delta
        );
    }
    let main = estimate.as_ref().map(|e| (&e.main_term, &e.error_scale));

    let mut rows = Vec::new();
    if wants(MethodArg::Brute) {
        rows.push(exact_row(&ctx.engine.brute(&lambda, q)?, n, main));
    }
    if wants(MethodArg::ClosedForm) {
        rows.push(exact_row(&ctx.engine.closed_form(&lambda, q)?, n, main));
    }
    if let (true, Some(e)) = (wants(MethodArg::Asymptotic), &estimate) {
        rows.push(Row {
            lambda: lambda.to_string(),
            q,
            n,
            method: rootmult_core::multiplicity::Method::AsymptoticMain.as_str(),
            value: e.main_term.clone(),
            main_term: Some(e.main_term.clone()),
            error_scale: Some(e.error_scale.clone()),
            ratio: None,
            elapsed_ms: asymptotic_ms,
            monitored_k: None,
        });
    }
    output::write_rows(
        std::io::stdout().lock(),
        ctx.format,
        "multiplicity",
        &rows,
        false,
    )
}

fn cmd_table(ctx: &Context, args: TableArgs) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let mu = parse_partition(&require(cfg.layer(args.mu, "mu")?, "mu")?, "mu")?;
    let delta = mu.weight();
    if delta == 0 {
        return Err(CliError::Input("--mu must be nonempty".into()));
    }
    if delta > MAX_TABLE_DELTA {
        return Err(CliError::Input(format!(
            "table supports |mu| ≤ {MAX_TABLE_DELTA}, got {delta}"
        )));
    }
    let fixed_n = cfg.layer(args.n, "n")?;
    let q_min = check_q(cfg.layer(args.q_min, "q-min")?.unwrap_or(2))?;
    let q_max = check_q(require(cfg.layer(args.q_max, "q-max")?, "q-max")?)?;
    let primes = args.primes || cfg.layer::<bool>(None, "primes")?.unwrap_or(false);

    let mut rows = Vec::new();
    for q in (q_min..=q_max).filter(|&q| !primes || is_prime(q)) {
        let n = fixed_n.unwrap_or((delta * q).max(delta + mu.first()));
        let result = ctx.engine.closed_form_for_tail(&mu, n, q)?;
        let est = ctx.engine.asymptotic(&mu, q)?;
        rows.push(exact_row(
            &result,
            n,
            Some((&est.main_term, &est.error_scale)),
        ));
    }
    output::write_rows(std::io::stdout().lock(), ctx.format, "table", &rows, true)
}

fn cmd_verify(ctx: &Context, args: VerifyArgs) -> Result<(), CliError> {
    let suite: Suite = args.suite.parse()?;
    let threshold = ctx.cfg.layer(args.threshold, "threshold")?.unwrap_or(10.0);
    let threshold = ExactScalar::from_f64(threshold)
        .filter(|t| !t.is_negative() && !t.is_zero())
        .ok_or_else(|| {
            CliError::Input(format!(
                "threshold must be a positive finite number, got {threshold}"
            ))
        })?;
    let t0 = Instant::now();
    let report = run_suite(
        suite,
        &VerifyConfig {
            threshold: threshold.clone(),
        },
        &ctx.engine,
    );
    let elapsed = ms(t0.elapsed());
    for f in &report.failures {
        log::error!("{suite}: {f}");
    }
    let out = std::io::stdout().lock();
    match ctx.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "suite",
                "item",
                "checks",
                "failed",
                "worst_k",
                "threshold",
                "at",
            ])?;
            let t = significant(&threshold, 12);
            w.write_record([
                suite.as_str(),
                "all",
                &report.checks.to_string(),
                &report.failed.to_string(),
                "",
                &t,
                "",
            ])?;
            for m in &report.monitored {
                w.write_record([
                    suite.as_str(),
                    &m.name,
                    &m.samples.to_string(),
                    "",
                    &significant(&m.worst, 12),
                    &t,
                    &m.at,
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let monitored: Vec<_> = report
                .monitored
                .iter()
                .map(|m| json!({ "name": m.name, "samples": m.samples, "worst": rational_json(&m.worst), "at": m.at }))
                .collect();
            let doc = json!({
                "command": "verify",
                "suite": suite.as_str(),
                "checks": report.checks,
                "failed": report.failed,
                "passed": report.passed(),
                "threshold": rational_json(&threshold),
                "elapsed_ms": elapsed,
                "failures": report.failures,
                "monitored": monitored,
            });
            output::write_json(out, &doc)?;
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

fn cmd_sample(ctx: &Context, args: SampleArgs) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let n = cfg.layer(args.n, "n")?.unwrap_or(10);
    if n == 0 || n > MAX_SAMPLE_N {
        return Err(CliError::Input(format!(
            "sample supports 1 ≤ n ≤ {MAX_SAMPLE_N}, got {n}"
        )));
    }
    let q = check_q(cfg.layer(args.q, "q")?.unwrap_or(1))?;
    let trials = cfg.layer(args.trials, "trials")?.unwrap_or(10_000);
    if trials == 0 {
        return Err(CliError::Input("trials must be at least 1".into()));
    }
    let seed = cfg.layer(args.seed, "seed")?.unwrap_or(0);
    let spec_texts: Vec<String> = if !args.spec.is_empty() {
        args.spec
    } else if let Some(raw) = cfg.raw("spec") {
        raw.split(';').map(|s| s.trim().to_string()).collect()
    } else {
        vec!["1:1".to_string()]
    };
    let specs: Vec<MomentSpec> = spec_texts
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|e: Error| CliError::Input(format!("--spec {s}: {e}")))
        })
        .collect::<Result<_, _>>()?;

    let mut reports = Vec::new();
    for spec in &specs {
        let report = empirical_moment(spec, n, q, trials, seed)?;
        let exact_value = ctx.engine.moments().root_cycle_power_moment(spec, q, n)?;
        reports.push((report, exact_value));
    }
    let out = std::io::stdout().lock();
    match ctx.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "spec",
                "n",
                "q",
                "trials",
                "seed",
                "estimate",
                "standard_error",
                "exact",
            ])?;
            for (r, e) in &reports {
                w.write_record([
                    r.spec.to_string(),
                    r.n.to_string(),
                    r.q.to_string(),
                    r.trials.to_string(),
                    r.seed.to_string(),
                    significant(&r.mean, 12),
                    ExactScalar::from_f64(r.standard_error)
                        .map(|se| significant(&se, 12))
                        .unwrap_or_default(),
                    exact(e),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = reports
                .iter()
                .map(|(r, e)| {
                    json!({
                        "spec": r.spec.to_string(),
                        "n": r.n,
                        "q": r.q,
                        "trials": r.trials,
                        "seed": r.seed,
                        "mean": rational_json(&r.mean),
                        "estimate": r.estimate,
                        "standard_error": r.standard_error,
                        "exact": rational_json(e),
                    })
                })
                .collect();
            output::write_json(out, &json!({ "command": "sample", "reports": rows }))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = cfg
        .layer(cli.format, "format")
        .map_err(|e| CliError::Input(e.to_string()))?
        .unwrap_or(Format::Csv);
    if let Some(workers) = cfg.layer(cli.workers, "workers")? {
        if workers == 0 {
            return Err(CliError::Input("workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let ctx = Context {
        cfg,
        format,
        engine: MultiplicityEngine::new(),
    };
    cache::load(ctx.engine.characters());
    let result = match cli.command {
        Command::Multiplicity(a) => cmd_multiplicity(&ctx, a),
        Command::Table(a) => cmd_table(&ctx, a),
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Sample(a) => cmd_sample(&ctx, a),
    };
    if !matches!(result, Err(CliError::Input(_))) {
        cache::save(ctx.engine.characters());
    }
    result
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed) {
                eprintln!("error: {e}");
            } else {
                eprintln!("verification failed");
            }
            let _ = std::io::stdout().flush();
            ExitCode::from(e.exit_code())
        }
    }
}
