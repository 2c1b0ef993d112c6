//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a run fails or an audit row fails its
//! checks, 2 on invalid usage or configuration.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rrs_core::infotheory::Scheme;
use rrs_core::{MonotonicityConfig, QuadratureOptions, PRESET_ALPHA};
use serde::Serialize;

use crate::config::{FileConfig, SnrValue};
use crate::harness::{
    self, parse_configs, AuditSpec, AuditThresholds, BerSpec, ConstellationSpec, MiSpec, ProtocolSpec, SnrGrid,
    Variant, TABLE_MI_TARGETS,
};
use crate::output::{self, RunLog};
use crate::{codes, Error, Result};

/// Environment variable supplying the output directory when neither the
/// command line nor the config file does.
pub const OUT_DIR_ENV: &str = "RRS_OUT_DIR";

const DEFAULT_OUT_DIR: &str = "out";
const DEFAULT_SEED: u64 = 1;
const DEFAULT_CONSTELLATION: &str = "pam4";

#[derive(Debug, Parser)]
#[command(
    name = "rrs",
    version,
    about = "Soft-metric reverse reconciliation: MI sweeps, BER sweeps and leakage audits"
)]
pub struct Cli {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory [default: $RRS_OUT_DIR or ./out].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Log filter for stderr, e.g. `info` or `rrs=debug` [default: info].
    #[arg(long, global = true)]
    pub log_level: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutual information per scheme over an SNR grid, plus the SNR needed
    /// for each target MI.
    MiSweep(MiArgs),
    /// Coded BER/FER per scheme over an SNR grid.
    BerSweep(BerArgs),
    /// Leakage and uniformity audit of the softening transform.
    Audit(AuditArgs),
    /// One reconciliation frame; prints the public transcript as JSON.
    Reconcile(ReconcileArgs),
    /// Writes a parity-check matrix in alist format.
    Codegen(CodegenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// SNR grid in dB: `start:stop:step` or a comma list.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["snr_start", "snr_stop", "snr_step"])]
    pub snr: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["snr_stop", "snr_step"])]
    pub snr_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["snr_start", "snr_step"])]
    pub snr_stop: Option<f64>,
    #[arg(long, requires_all = ["snr_start", "snr_stop"])]
    pub snr_step: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MiArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// `pamM` or `qamM` (`bpsk`, `qpsk` accepted) [default: pam4].
    #[arg(long)]
    pub constellation: Option<String>,
    /// Comma list of `direct`, `hard`, `rrs` [default: all three].
    #[arg(long)]
    pub schemes: Option<String>,
    /// Monotonicity configurations for `rrs` [default: base,alternating].
    #[arg(long)]
    pub configs: Option<String>,
    /// Comma list of MI targets in bits per symbol.
    #[arg(long)]
    pub mi_targets: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BerArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub constellation: Option<String>,
    #[arg(long)]
    pub schemes: Option<String>,
    /// Monotonicity configurations for `rrs` [default: alternating].
    #[arg(long)]
    pub configs: Option<String>,
    /// Comma list of LAPPR scalings; `preset` stands for 0.65 [default: 1].
    #[arg(long)]
    pub alpha: Option<String>,
    /// `hamming74`, `dvbs2-r12-64800`, or an alist file [default: hamming74].
    #[arg(long)]
    pub code: Option<String>,
    /// Frames per point (fewer with early stopping) [default: 200].
    #[arg(long)]
    pub frames: Option<u64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Simulate every requested frame even after enough errors.
    #[arg(long)]
    pub no_early_stop: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub constellation: Option<String>,
    /// [default: all]
    #[arg(long)]
    pub configs: Option<String>,
    /// KS samples per decision [default: 100000].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Histogram cells of the transcript MI estimate [default: 16].
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Audit a deliberately leaking transform (negative control).
    #[arg(long, hide = true)]
    pub inject_broken: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReconcileArgs {
    /// SNR in dB.
    #[arg(long, allow_hyphen_values = true)]
    pub snr: Option<f64>,
    #[arg(long)]
    pub constellation: Option<String>,
    /// One monotonicity configuration [default: alternating].
    #[arg(long)]
    pub configs: Option<String>,
    /// LAPPR scaling; `preset` stands for 0.65 [default: 1].
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct CodegenArgs {
    #[arg(long)]
    pub code: Option<String>,
    /// Destination file [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// What a finished command reports to the process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

/// Runs a parsed command line and maps the result to an exit code.
pub fn main_with(cli: Cli) -> ExitCode {
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    init_logging(cli.log_level.as_deref().or(file.log_level.as_deref()));
    let out_dir = cli
        .out
        .clone()
        .or_else(|| file.out_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    match cli.command {
        Command::MiSweep(args) => mi_command(args, &file, &out_dir),
        Command::BerSweep(args) => ber_command(args, &file, &out_dir),
        Command::Audit(args) => audit_command(args, &file, &out_dir),
        Command::Reconcile(args) => reconcile_command(args, &file, &out_dir),
        Command::Codegen(args) => codegen_command(args, &file, &out_dir),
    }
}

fn init_logging(filter: Option<&str>) {
    let env = env_logger::Env::default().default_filter_or(filter.unwrap_or("info"));
    let mut builder = env_logger::Builder::from_env(env);
    if let Some(f) = filter {
        builder.parse_filters(f);
    }
    builder.format_timestamp(None);
    // A second initialisation (tests calling `run` repeatedly) is harmless.
    let _ = builder.try_init();
}

fn open_run_log(out_dir: &Path) -> Result<RunLog> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    RunLog::create(&out_dir.join("run.jsonl"))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

fn resolve_grid(grid: &GridArgs, file: &FileConfig) -> Result<SnrGrid> {
    let parsed = match (&grid.snr, grid.snr_start, grid.snr_stop, grid.snr_step) {
        (Some(text), ..) => text.parse()?,
        (None, Some(a), Some(b), Some(c)) => SnrGrid::range(a, b, c)?,
        _ => match &file.snr {
            Some(SnrValue::Text(text)) => text.parse()?,
            Some(SnrValue::List(values)) => SnrGrid(values.clone()),
            None => return Err(Error::Validation("an SNR grid is required (--snr)".into())),
        },
    };
    parsed.validate()?;
    Ok(parsed)
}

fn resolve_constellation(cli: &Option<String>, file: &FileConfig) -> Result<ConstellationSpec> {
    cli.as_deref()
        .or(file.constellation.as_deref())
        .unwrap_or(DEFAULT_CONSTELLATION)
        .parse()
}

fn resolve_configs(
    cli: &Option<String>,
    file: &FileConfig,
    default: &str,
    order: usize,
) -> Result<Vec<MonotonicityConfig>> {
    let text = match (cli, &file.configs) {
        (Some(t), _) => t.clone(),
        (None, Some(list)) => list.join(","),
        (None, None) => default.to_string(),
    };
    parse_configs(&text, order)
}

fn parse_schemes(text: &str) -> Result<Vec<Scheme>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let scheme = match item {
            "direct" => Scheme::Direct,
            "hard" => Scheme::Hard,
            "rrs" => Scheme::Rrs,
            other => return Err(Error::Validation(format!("unknown scheme {other:?}"))),
        };
        if !out.contains(&scheme) {
            out.push(scheme);
        }
    }
    if out.is_empty() {
        return Err(Error::Validation("no scheme selected".into()));
    }
    Ok(out)
}

fn resolve_schemes(cli: &Option<String>, file: &FileConfig) -> Result<Vec<Scheme>> {
    match (cli, &file.schemes) {
        (Some(t), _) => parse_schemes(t),
        (None, Some(list)) => parse_schemes(&list.join(",")),
        (None, None) => Ok(vec![Scheme::Direct, Scheme::Hard, Scheme::Rrs]),
    }
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "preset" if what == "alpha" => Ok(PRESET_ALPHA),
            _ => t
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("bad {what} value {t:?}"))),
        })
        .collect()
}

fn resolve_alphas(cli: &Option<String>, file: &FileConfig) -> Result<Vec<f64>> {
    let alphas = match (cli, &file.alpha) {
        (Some(t), _) => parse_numbers(t, "alpha")?,
        (None, Some(v)) => v.clone().into_vec(),
        (None, None) => vec![1.0],
    };
    if alphas.is_empty() || alphas.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::Validation(format!(
            "alpha must be positive and finite, got {alphas:?}"
        )));
    }
    Ok(alphas)
}

fn positive(value: usize, what: &str) -> Result<usize> {
    if value == 0 {
        return Err(Error::Validation(format!("{what} must be at least 1")));
    }
    Ok(value)
}

#[derive(Serialize)]
struct MiEcho<'a> {
    command: &'static str,
    out_dir: &'a Path,
    constellation: String,
    snr_db: &'a [f64],
    schemes: Vec<&'static str>,
    configs: Vec<String>,
    mi_targets: &'a [f64],
    workers: usize,
    quadrature_abs_tol: f64,
    quadrature_rel_tol: f64,
}

fn mi_command(args: MiArgs, file: &FileConfig, out_dir: &Path) -> Result<Outcome> {
    let constellation = resolve_constellation(&args.constellation, file)?;
    let snr = resolve_grid(&args.grid, file)?;
    let schemes = resolve_schemes(&args.schemes, file)?;
    let configs = resolve_configs(&args.configs, file, "base,alternating", constellation.order)?;
    let targets = match (&args.mi_targets, &file.mi_targets) {
        (Some(t), _) => parse_numbers(t, "MI target")?,
        (None, Some(v)) => v.clone(),
        (None, None) => TABLE_MI_TARGETS.to_vec(),
    };
    let workers = positive(args.workers.or(file.workers).unwrap_or_else(default_workers), "workers")?;
    let quadrature = QuadratureOptions::default();

    let mut log = open_run_log(out_dir)?;
    log.record(
        "config",
        &MiEcho {
            command: "mi-sweep",
            out_dir,
            constellation: constellation.to_string(),
            snr_db: snr.points(),
            schemes: schemes.iter().map(|s| s.as_str()).collect(),
            configs: configs.iter().map(MonotonicityConfig::to_sign_string).collect(),
            mi_targets: &targets,
            workers,
            quadrature_abs_tol: quadrature.abs_tol,
            quadrature_rel_tol: quadrature.rel_tol,
        },
    )?;
    let spec = MiSpec {
        constellation,
        snr,
        schemes,
        configs,
        workers,
        quadrature,
    };
    let rows = harness::mi_sweep(&spec)?;
    output::write_mi(&out_dir.join("mi.csv"), &rows)?;
    let table = harness::snr_at_mi(&rows, &targets);
    for row in table.iter().filter(|r| r.snr_db.is_none()) {
        let message = format!(
            "{} does not reach {} bits inside the swept SNR range; cell left empty",
            row.scheme, row.mi_bits
        );
        log::warn!("{message}");
        log.record("warning", &message)?;
    }
    output::write_snr_at_mi(&out_dir.join("snr_at_mi.csv"), &table)?;
    log.record(
        "done",
        &serde_json::json!({ "mi_rows": rows.len(), "snr_at_mi_rows": table.len() }),
    )?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct BerEcho<'a> {
    command: &'static str,
    out_dir: &'a Path,
    constellation: String,
    snr_db: &'a [f64],
    schemes: Vec<&'static str>,
    configs: Vec<String>,
    alpha: &'a [f64],
    code: &'a str,
    code_n: usize,
    code_m: usize,
    frames: u64,
    max_iterations: usize,
    early_stop: bool,
    seed: u64,
    workers: usize,
}

fn ber_command(args: BerArgs, file: &FileConfig, out_dir: &Path) -> Result<Outcome> {
    let constellation = resolve_constellation(&args.constellation, file)?;
    let snr = resolve_grid(&args.grid, file)?;
    let schemes = resolve_schemes(&args.schemes, file)?;
    let configs = resolve_configs(&args.configs, file, "alternating", constellation.order)?;
    let alphas = resolve_alphas(&args.alpha, file)?;
    let code_name = args
        .code
        .or_else(|| file.code.clone())
        .unwrap_or_else(|| codes::HAMMING74.into());
    let frames = args.frames.or(file.frames).unwrap_or(200);
    let max_iterations = args
        .max_iterations
        .or(file.max_iterations)
        .unwrap_or(rrs_core::ldpc::DEFAULT_MAX_ITERATIONS);
    let early_stop = !args.no_early_stop && file.early_stop.unwrap_or(true);
    let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let workers = positive(args.workers.or(file.workers).unwrap_or_else(default_workers), "workers")?;
    let code = codes::load_code(&code_name)?;

    let mut variants = Vec::new();
    for scheme in &schemes {
        match scheme {
            Scheme::Direct => variants.push(Variant::Direct),
            Scheme::Hard => variants.push(Variant::Hard),
            Scheme::Rrs => {
                for config in &configs {
                    for &alpha in &alphas {
                        variants.push(Variant::Rrs {
                            config: config.clone(),
                            alpha,
                        });
                    }
                }
            }
        }
    }

    let mut log = open_run_log(out_dir)?;
    log.record(
        "config",
        &BerEcho {
            command: "ber-sweep",
            out_dir,
            constellation: constellation.to_string(),
            snr_db: snr.points(),
            schemes: schemes.iter().map(|s| s.as_str()).collect(),
            configs: configs.iter().map(MonotonicityConfig::to_sign_string).collect(),
            alpha: &alphas,
            code: &code_name,
            code_n: code.n(),
            code_m: code.m(),
            frames,
            max_iterations,
            early_stop,
            seed,
            workers,
        },
    )?;
    let spec = BerSpec {
        constellation,
        snr,
        variants,
        frames,
        max_iterations,
        seed,
        workers,
        early_stop,
    };
    let points = harness::ber_sweep(&spec, &code)?;
    output::write_ber(&out_dir.join("ber.csv"), &points)?;
    for p in points.iter().filter(|p| p.undersampled) {
        log.record(
            "undersampled",
            &serde_json::json!({
                "snr_db": p.snr_db,
                "scheme": p.scheme,
                "config": p.config,
                "alpha": p.alpha,
                "bit_errors": p.bit_errors,
                "frame_errors": p.frame_errors,
            }),
        )?;
    }
    log.record("snr_at_ber_1e-4", &harness::snr_at_ber(&points, 1e-4))?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct AuditEcho<'a> {
    command: &'static str,
    out_dir: &'a Path,
    constellation: String,
    snr_db: &'a [f64],
    configs: Vec<String>,
    samples_per_decision: usize,
    bins: usize,
    seed: u64,
    workers: usize,
    thresholds: AuditThresholds,
    inject_broken: bool,
}

fn audit_command(args: AuditArgs, file: &FileConfig, out_dir: &Path) -> Result<Outcome> {
    let constellation = resolve_constellation(&args.constellation, file)?;
    let snr = resolve_grid(&args.grid, file)?;
    let configs = resolve_configs(&args.configs, file, "all", constellation.order)?;
    let samples = args.samples.or(file.samples).unwrap_or(100_000);
    let bins = args.bins.or(file.bins).unwrap_or(16);
    let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let workers = positive(args.workers.or(file.workers).unwrap_or_else(default_workers), "workers")?;
    let thresholds = AuditThresholds::default();

    let mut log = open_run_log(out_dir)?;
    log.record(
        "config",
        &AuditEcho {
            command: "audit",
            out_dir,
            constellation: constellation.to_string(),
            snr_db: snr.points(),
            configs: configs.iter().map(MonotonicityConfig::to_sign_string).collect(),
            samples_per_decision: samples,
            bins,
            seed,
            workers,
            thresholds,
            inject_broken: args.inject_broken,
        },
    )?;
    let spec = AuditSpec {
        constellation,
        snr,
        configs,
        samples_per_decision: samples,
        bins,
        seed,
        workers,
        thresholds,
        quadrature: QuadratureOptions::default(),
        inject_broken: args.inject_broken,
    };
    let rows = harness::audit(&spec)?;
    output::write_audit(&out_dir.join("audit.csv"), &rows)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    log.record("done", &serde_json::json!({ "rows": rows.len(), "failed": failed }))?;
    if failed > 0 {
        log::error!("{failed} of {} audit rows failed", rows.len());
        return Ok(Outcome::ChecksFailed);
    }
    log::info!("all {} audit rows passed", rows.len());
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct ReconcileEcho<'a> {
    command: &'static str,
    out_dir: &'a Path,
    constellation: String,
    snr_db: f64,
    config: String,
    alpha: f64,
    code: &'a str,
    max_iterations: usize,
    seed: u64,
}

fn reconcile_command(args: ReconcileArgs, file: &FileConfig, out_dir: &Path) -> Result<Outcome> {
    let constellation = resolve_constellation(&args.constellation, file)?;
    let snr_db = match (args.snr, &file.snr) {
        (Some(v), _) => v,
        (None, Some(SnrValue::List(v))) if v.len() == 1 => v[0],
        (None, Some(SnrValue::Text(t))) => t
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("reconcile needs a single SNR value, got {t:?}")))?,
        _ => return Err(Error::Validation("a single SNR value is required (--snr)".into())),
    };
    if !snr_db.is_finite() {
        return Err(Error::Validation(format!("SNR value {snr_db} is not finite")));
    }
    let configs = resolve_configs(&args.configs, file, "alternating", constellation.order)?;
    let [config] = <[MonotonicityConfig; 1]>::try_from(configs)
        .map_err(|_| Error::Validation("reconcile takes exactly one monotonicity configuration".into()))?;
    let alphas = resolve_alphas(&args.alpha, file)?;
    let [alpha] =
        <[f64; 1]>::try_from(alphas).map_err(|_| Error::Validation("reconcile takes exactly one alpha".into()))?;
    let code_name = args
        .code
        .or_else(|| file.code.clone())
        .unwrap_or_else(|| codes::HAMMING74.into());
    let max_iterations = args
        .max_iterations
        .or(file.max_iterations)
        .unwrap_or(rrs_core::ldpc::DEFAULT_MAX_ITERATIONS);
    let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let code = codes::load_code(&code_name)?;

    let mut log = open_run_log(out_dir)?;
    log.record(
        "config",
        &ReconcileEcho {
            command: "reconcile",
            out_dir,
            constellation: constellation.to_string(),
            snr_db,
            config: config.to_sign_string(),
            alpha,
            code: &code_name,
            max_iterations,
            seed,
        },
    )?;
    let spec = ProtocolSpec {
        constellation,
        snr_db,
        config,
        alpha,
        code: &code,
        max_iterations,
    };
    let run = harness::run_protocol(&spec, seed)?;
    log.record(
        "done",
        &serde_json::json!({
            "bit_errors": run.bit_errors(),
            "converged": run.converged,
            "iterations": run.iterations,
        }),
    )?;
    println!("{}", serde_json::to_string(&run.transcript)?);
    Ok(Outcome::Success)
}

fn codegen_command(args: CodegenArgs, file: &FileConfig, out_dir: &Path) -> Result<Outcome> {
    let code_name = args
        .code
        .or_else(|| file.code.clone())
        .unwrap_or_else(|| codes::DVBS2_R12.into());
    let code = codes::load_code(&code_name)?;
    let mut log = open_run_log(out_dir)?;
    log.record(
        "config",
        &serde_json::json!({
            "command": "codegen",
            "out_dir": out_dir,
            "code": code_name,
            "output": args.output,
        }),
    )?;
    let text = crate::alist::write(&code);
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e))?,
        None => print!("{text}"),
    }
    log.record(
        "done",
        &serde_json::json!({ "n": code.n(), "m": code.m(), "edges": code.edges() }),
    )?;
    Ok(Outcome::Success)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("rrs").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn grid_forms_agree() {
        let file = FileConfig::default();
        let Command::MiSweep(a) = parse(&["mi-sweep", "--snr", "-1:1:0.5"]).command else {
            panic!()
        };
        let Command::MiSweep(b) =
            parse(&["mi-sweep", "--snr-start", "-1", "--snr-stop", "1", "--snr-step", "0.5"]).command
        else {
            panic!()
        };
        let ga = resolve_grid(&a.grid, &file).unwrap();
        assert_eq!(ga, resolve_grid(&b.grid, &file).unwrap());
        assert_eq!(ga.points(), &[-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn grid_flags_conflict() {
        let r = Cli::try_parse_from(["rrs", "mi-sweep", "--snr", "0", "--snr-start", "1"]);
        assert!(r.is_err());
        let r = Cli::try_parse_from(["rrs", "mi-sweep", "--snr-start", "1"]);
        assert!(r.is_err());
    }

    #[test]
    fn cli_beats_file_beats_default() {
        let file = FileConfig::parse("snr = [3.0]\nconstellation = \"qam16\"\nalpha = 0.5").unwrap();
        let Command::BerSweep(a) = parse(&["ber-sweep", "--constellation", "pam2"]).command else {
            panic!()
        };
        assert_eq!(
            resolve_constellation(&a.constellation, &file).unwrap().to_string(),
            "pam2"
        );
        assert_eq!(resolve_grid(&a.grid, &file).unwrap().points(), &[3.0]);
        assert_eq!(resolve_alphas(&a.alpha, &file).unwrap(), vec![0.5]);
        let empty = FileConfig::default();
        assert_eq!(resolve_constellation(&None, &empty).unwrap().to_string(), "pam4");
        assert_eq!(resolve_alphas(&None, &empty).unwrap(), vec![1.0]);
        assert!(resolve_grid(&a.grid, &empty).unwrap_err().is_validation());
    }

    #[test]
    fn alpha_preset_and_validation() {
        let f = FileConfig::default();
        assert_eq!(
            resolve_alphas(&Some("preset,1".into()), &f).unwrap(),
            vec![PRESET_ALPHA, 1.0]
        );
        assert!(resolve_alphas(&Some("0".into()), &f).is_err());
        assert!(resolve_alphas(&Some("x".into()), &f).is_err());
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!(
            parse_schemes("rrs, direct,rrs").unwrap(),
            vec![Scheme::Rrs, Scheme::Direct]
        );
        assert!(parse_schemes("soft").unwrap_err().is_validation());
        assert!(parse_schemes("").is_err());
    }
}
