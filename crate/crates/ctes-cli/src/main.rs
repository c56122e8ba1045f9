//! Command-line front end: simulate interferograms, classify factors, plan
//! and verify displacement sequences, tabulate non-factor ceilings, and run
//! whole sequences, all through files.
//!
//! Exit codes: 0 success, 1 usage, 2 i/o or parse, 3 planning/feasibility,
//! 4 coverage violation.

mod config;
mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ctes::analysis::{multi_scan, threshold, ScanPolicy};
use ctes::instrument::{
    fringe_period, read_interferogram, simulate, write_interferogram, Band, NoiseSpec, SetupSpec,
};
use ctes::oracle::residue_max_intensity;
use ctes::planner::{plan, run_sequence, verify_coverage, Method, SequencePlan};
use ctes::sumcore::{nonfactor_ceiling, SumConfig};
use ctes::Error;

use config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or argument values (exit 1).
    Usage(String),
    /// Unreadable or malformed files (exit 2).
    File(String),
    /// Errors surfaced by the library, mapped by kind.
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::File(_) => 2,
            CliError::Lib(e) => match e {
                Error::Domain(_) | Error::Config(_) => 1,
                Error::Parse { .. } | Error::Io(_) | Error::Validation(_) => 2,
                Error::InadequateSampling { .. }
                | Error::Planning(_)
                | Error::InfeasibleStart { .. } => 3,
                Error::Coverage { .. } => 4,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::File(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(name = "ctes", version, about = "Interferometric factoring toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate one interferogram and write it as CSV with a metadata header.
    Simulate(SimulateArgs),
    /// Classify trial factors of one or more candidates on a recorded interferogram.
    Factor(FactorArgs),
    /// Plan the displacement sequence covering a candidate range.
    Plan(PlanArgs),
    /// Verify that a plan covers the target trial factors of a candidate.
    Verify(VerifyArgs),
    /// Tabulate worst-case non-factor ceilings and thresholds.
    Bound(BoundArgs),
    /// Simulate a planned sequence and merge the per-candidate reports.
    Sequence(SequenceArgs),
}

#[derive(Args)]
struct SetupArgs {
    /// Number of interfering paths.
    #[arg(long = "M")]
    m: Option<u32>,
    /// Sum order (1 = Fourier, 2 = Gauss, 3 = Kummer).
    #[arg(long = "j")]
    j: Option<u32>,
}

#[derive(Args)]
struct NoiseArgs {
    /// Noise preset: `off` (ideal instrument) or `default` (bench hardware).
    #[arg(long)]
    noise: Option<String>,
    /// Additive per-sample intensity noise std dev.
    #[arg(long)]
    sigma_i: Option<f64>,
    /// Wavelength reading accuracy bound (nm).
    #[arg(long)]
    dl_cal: Option<f64>,
    /// Per-arm path calibration error bound (nm).
    #[arg(long)]
    dx_cal: Option<f64>,
    /// Comma-separated per-arm amplitude factors.
    #[arg(long)]
    amp: Option<String>,
    /// Seed for all pseudo-random draws (default: $CTES_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    setup: SetupArgs,
    /// Displacement unit x (nm).
    #[arg(long)]
    x: Option<f64>,
    /// Wavelength band `lambda_min:lambda_max` (nm).
    #[arg(long)]
    band: Option<String>,
    /// Spectrometer grid step (nm).
    #[arg(long)]
    dl: Option<f64>,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Output interferogram path.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// key=value config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct FactorArgs {
    /// Interferogram file written by `ctes simulate`.
    interferogram: PathBuf,
    /// Candidate integer(s) to factor (repeatable).
    #[arg(long = "N")]
    n: Vec<u64>,
    /// Threshold margin fraction in [0, 1).
    #[arg(long)]
    rho: Option<f64>,
    /// Also probe the trial factor 2 (skipped by default).
    #[arg(long)]
    include_two: bool,
    /// Render intensity vs xi_N with trial-factor markers (single N only).
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Write the report JSON here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    /// Coverage method: 1 (trial factors in [3, sqrt(N)]) or 2 ([sqrt(N), N]).
    #[arg(long)]
    method: Option<u8>,
    #[arg(long)]
    nmin: Option<u64>,
    #[arg(long)]
    nmax: Option<u64>,
    /// Wavelength band `lambda_min:lambda_max` (nm).
    #[arg(long)]
    band: Option<String>,
    /// Starting displacement (nm); defaults to the method minimum.
    #[arg(long)]
    x0: Option<f64>,
    /// Write the plan JSON here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Plan JSON written by `ctes plan`.
    plan: PathBuf,
    /// Candidate to verify coverage for.
    #[arg(long = "N")]
    n: Option<u64>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    setup: SetupArgs,
    /// Trial factor or inclusive range, e.g. `5` or `451..461`.
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SequenceArgs {
    /// Plan JSON written by `ctes plan`.
    plan: PathBuf,
    /// Candidate integer(s) to factor (repeatable).
    #[arg(long = "N")]
    n: Vec<u64>,
    #[command(flatten)]
    setup: SetupArgs,
    /// Spectrometer grid step (nm), shared by every interferogram.
    #[arg(long)]
    dl: Option<f64>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    include_two: bool,
    /// Write the reports JSON here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.cmd {
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Factor(args) => cmd_factor(args),
        Cmd::Plan(args) => cmd_plan(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Bound(args) => cmd_bound(args),
        Cmd::Sequence(args) => cmd_sequence(args),
    }
}

// --- shared resolution helpers ------------------------------------------------

fn merged<T: FromStr>(flag: Option<T>, cfg: &FileConfig, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    cfg.get(key)
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::default()),
    }
}

fn want<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required {what}")))
}

fn parse_band(spec: &str) -> Result<Band, CliError> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("band must be `min:max` in nm, got `{spec}`")))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("bad band minimum `{lo}`: {e}")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("bad band maximum `{hi}`: {e}")))?;
    Ok(Band::new(lo, hi)?)
}

fn resolve_sum_config(args: &SetupArgs, cfg: &FileConfig) -> Result<SumConfig, CliError> {
    let m = merged(args.m, cfg, "m")?.unwrap_or(3);
    let j = merged(args.j, cfg, "j")?.unwrap_or(2);
    Ok(SumConfig::new(m, j)?)
}

fn resolve_seed(flag: Option<u64>, cfg: &FileConfig) -> Result<u64, CliError> {
    if let Some(seed) = merged(flag, cfg, "seed")? {
        return Ok(seed);
    }
    match std::env::var("CTES_SEED") {
        Ok(raw) => raw
            .parse()
            .map_err(|e| CliError::Usage(format!("bad CTES_SEED `{raw}`: {e}"))),
        Err(_) => Ok(0),
    }
}

fn resolve_noise(args: &NoiseArgs, cfg: &FileConfig) -> Result<NoiseSpec, CliError> {
    let seed = resolve_seed(args.seed, cfg)?;
    let preset = args
        .noise
        .clone()
        .or_else(|| cfg.get_string("noise").map(String::from))
        .unwrap_or_else(|| "off".into());
    let mut noise = match preset.as_str() {
        "off" => NoiseSpec { seed, ..NoiseSpec::default() },
        "default" | "hardware" => NoiseSpec::hardware(seed),
        other => {
            return Err(CliError::Usage(format!(
                "unknown noise preset `{other}` (expected `off` or `default`)"
            )))
        }
    };
    if let Some(v) = merged(args.sigma_i, cfg, "sigma_i")? {
        noise.sigma_i = v;
    }
    if let Some(v) = merged(args.dl_cal, cfg, "dl_cal")? {
        noise.dlambda_cal_nm = v;
    }
    if let Some(v) = merged(args.dx_cal, cfg, "dx_cal")? {
        noise.dx_cal_nm = v;
    }
    let amp = args
        .amp
        .clone()
        .or_else(|| cfg.get_string("amp").map(String::from));
    if let Some(list) = amp {
        noise.amplitudes = list
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Usage(format!("bad amplitude `{part}`: {e}")))
            })
            .collect::<Result<_, _>>()?;
    }
    Ok(noise)
}

fn resolve_policy(
    rho: Option<f64>,
    include_two: bool,
    cfg: &FileConfig,
) -> Result<ScanPolicy, CliError> {
    let mut policy = ScanPolicy::default();
    if let Some(r) = merged(rho, cfg, "rho")? {
        policy.rho = r;
    }
    policy.include_two = include_two || cfg.get::<bool>("include_two")?.unwrap_or(false);
    policy.validate()?;
    Ok(policy)
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::File(format!("cannot serialize output: {e}")))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::File(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_plan(path: &Path) -> Result<SequencePlan, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::File(format!("cannot read {}: {e}", path.display())))?;
    let plan: SequencePlan = serde_json::from_str(&text)
        .map_err(|e| CliError::File(format!("{}: bad plan JSON: {e}", path.display())))?;
    plan.validate()?;
    Ok(plan)
}

// --- commands ------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    let sum = resolve_sum_config(&args.setup, &cfg)?;
    let x = want(merged(args.x, &cfg, "x")?, "--x (displacement unit, nm)")?;
    if !(x.is_finite() && x > 0.0) {
        return Err(CliError::Usage(format!("--x must be positive, got {x}")));
    }
    let band_spec: String = want(
        args.band.or_else(|| cfg.get_string("band").map(String::from)),
        "--band min:max (nm)",
    )?;
    let band = parse_band(&band_spec)?;
    let dl = merged(args.dl, &cfg, "dl")?.unwrap_or(0.01);
    let noise = resolve_noise(&args.noise, &cfg)?;
    let out = args
        .out
        .or_else(|| cfg.get_string("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("interferogram.csv"));

    let setup = SetupSpec::new(sum, x, band, dl, noise)?;
    let ig = simulate(&setup)?;
    write_interferogram(&ig, &out)?;

    let period = fringe_period(&setup, band.lambda_min_nm)?;
    println!(
        "wrote {} ({} samples)\nsampling: fastest fringe period {:.6} nm at {} nm, \
         {:.1} samples per fringe (grid step {} nm)",
        out.display(),
        ig.samples.len(),
        period,
        band.lambda_min_nm,
        period / dl,
        dl
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_factor(args: FactorArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    if args.n.is_empty() {
        return Err(CliError::Usage("at least one --N candidate is required".into()));
    }
    if let Some(&bad) = args.n.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("candidates must be >= 2, got {bad}")));
    }
    let policy = resolve_policy(args.rho, args.include_two, &cfg)?;
    let ig = read_interferogram(&args.interferogram)?;
    let reports = multi_scan(&ig, &args.n, policy)?;

    if let Some(plot_path) = &args.plot {
        if args.n.len() != 1 {
            return Err(CliError::Usage("--plot requires exactly one --N".into()));
        }
        let rendered = svg::render_factor_plot(&ig, &reports[0]);
        std::fs::write(plot_path, rendered)
            .map_err(|e| CliError::File(format!("cannot write {}: {e}", plot_path.display())))?;
    }
    emit_json(&reports, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_plan(args: PlanArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    let method_idx = want(merged(args.method, &cfg, "method")?, "--method (1 or 2)")?;
    let method = Method::from_index(method_idx)
        .map_err(|_| CliError::Usage(format!("--method must be 1 or 2, got {method_idx}")))?;
    let nmin = merged(args.nmin, &cfg, "nmin")?.unwrap_or(1);
    let nmax = want(merged(args.nmax, &cfg, "nmax")?, "--nmax")?;
    let band_spec: String = want(
        args.band.or_else(|| cfg.get_string("band").map(String::from)),
        "--band min:max (nm)",
    )?;
    let band = parse_band(&band_spec)?;
    let x0 = merged(args.x0, &cfg, "x0")?;

    let p = plan(nmin, nmax, band, method, x0)?;
    eprintln!(
        "plan: method {}, {} interferograms, x0 = {} nm, c = {}",
        p.method.index(),
        p.count,
        p.x0_nm,
        p.ratio
    );
    emit_json(&p, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let plan = load_plan(&args.plan)?;
    let n = want(args.n, "--N")?;
    match verify_coverage(&plan, n) {
        Ok(proof) => {
            eprintln!("covered, no gaps");
            emit_json(&proof, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::Coverage { n, message, gaps }) => {
            let violation = serde_json::json!({
                "n": n,
                "message": message,
                "gaps": gaps,
            });
            eprintln!("coverage violation: {message}");
            println!("{}", serde_json::to_string_pretty(&violation).unwrap());
            Ok(ExitCode::from(4))
        }
        Err(other) => Err(other.into()),
    }
}

fn parse_l_spec(spec: &str) -> Result<(u64, u64), CliError> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = lo
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("bad trial factor `{lo}`: {e}")))?;
        let hi: u64 = hi
            .trim_start_matches('=')
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("bad trial factor `{hi}`: {e}")))?;
        if lo > hi {
            return Err(CliError::Usage(format!("empty trial-factor range `{spec}`")));
        }
        Ok((lo, hi))
    } else {
        let l: u64 = spec
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("bad trial factor `{spec}`: {e}")))?;
        Ok((l, l))
    }
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    let sum = resolve_sum_config(&args.setup, &cfg)?;
    let spec: String = want(
        args.l.or_else(|| cfg.get_string("l").map(String::from)),
        "--l (trial factor or range like 451..461)",
    )?;
    let (lo, hi) = parse_l_spec(&spec)?;
    let rho = merged(args.rho, &cfg, "rho")?.unwrap_or(0.5);
    if !(0.0..1.0).contains(&rho) {
        return Err(CliError::Usage(format!("--rho must be in [0, 1), got {rho}")));
    }

    let mut table = String::from("l,worst_residue,ceiling,threshold\n");
    for l in lo..=hi {
        let (r, _) = residue_max_intensity(sum, l)?;
        let ceiling = nonfactor_ceiling(sum, l)?;
        let _ = writeln!(
            table,
            "{l},{r},{:.12},{:.12}",
            ceiling.value(),
            threshold(ceiling, rho)
        );
    }
    print!("{table}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_sequence(args: SequenceArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.config)?;
    let plan = load_plan(&args.plan)?;
    if args.n.is_empty() {
        return Err(CliError::Usage("at least one --N candidate is required".into()));
    }
    let sum = resolve_sum_config(&args.setup, &cfg)?;
    let dl = merged(args.dl, &cfg, "dl")?.unwrap_or(0.01);
    let noise = resolve_noise(&args.noise, &cfg)?;
    let policy = resolve_policy(args.rho, args.include_two, &cfg)?;

    let reports = run_sequence(&plan, sum, &args.n, &noise, dl, policy)?;
    let all_complete = reports.iter().all(|r| r.complete);
    emit_json(&reports, args.out.as_deref())?;
    if all_complete {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("incomplete coverage for at least one candidate");
        Ok(ExitCode::from(4))
    }
}
