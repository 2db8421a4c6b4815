//! `metrics`: δ-sweeps, witness certificates and single-point tables for
//! the invariant metrics of the egg-ring domain.

mod settings;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use invariant_metrics::psh::{certify_admissible, CertifyConfig, MIN_CERTIFY_SAMPLES};
use invariant_metrics::sweep::{
    bounds_at_point, check_ordering, emit, fit_all, run_sweep, steps_for_range, OutputFormat, SweepConfig,
    DEFAULT_STEPS_PER_DECADE,
};
use invariant_metrics::{EggRingDomain, Metric, MetricsError, SibonyWitness, TangentVector2};

use settings::FileSettings;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Invariant(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn config_err(e: MetricsError) -> CliError {
    match e {
        MetricsError::Config(m) => CliError::Config(m),
        e => CliError::Config(e.to_string()),
    }
}

#[derive(Parser)]
#[command(name = "metrics", version, about = "Kobayashi, Carathéodory and Sibony metric bounds on the egg-ring domain")]
struct Cli {
    /// Flat key=value file mirroring the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bounds over a log-spaced range of δ and fit growth exponents.
    Sweep(SweepArgs),
    /// Numerically certify the Sibony witness at one point.
    Certify(CertifyArgs),
    /// Print every bound at a single δ.
    Point(PointArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    delta_min: Option<f64>,
    #[arg(long)]
    delta_max: Option<f64>,
    /// Number of δ values; defaults to 16 per decade.
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated metric names, or `all`.
    #[arg(long)]
    metrics: Option<String>,
    /// Tangent vector as `re,im,re,im`; may be repeated.
    #[arg(long = "direction", allow_hyphen_values = true)]
    directions: Vec<String>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Feasibility evaluations allowed per disc search.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long = "direction", allow_hyphen_values = true)]
    directions: Vec<String>,
    #[arg(long)]
    budget: Option<usize>,
}

fn parse_direction(s: &str) -> Result<TangentVector2<f64>, CliError> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("direction {s:?}: expected four numbers re,im,re,im")))?;
    match parts[..] {
        [a, b, c, d] => {
            let xi = TangentVector2::from_parts(a, b, c, d);
            if !xi.is_finite() {
                return Err(CliError::Config(format!("direction {s:?} is not finite")));
            }
            Ok(xi)
        }
        _ => Err(CliError::Config(format!("direction {s:?}: expected four numbers re,im,re,im"))),
    }
}

/// Directions from the flags, else from the file (`;`-separated), else `(1, 0)`.
fn directions(flags: &[String], file: &FileSettings) -> Result<Vec<TangentVector2<f64>>, CliError> {
    let raw: Vec<String> = if !flags.is_empty() {
        flags.to_vec()
    } else if let Some(v) = file.raw("direction") {
        v.split(';').map(str::to_string).collect()
    } else {
        return Ok(vec![TangentVector2::normal()]);
    };
    raw.iter().map(|s| parse_direction(s)).collect()
}

fn parse_metrics(s: &str) -> Result<Vec<Metric>, CliError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Metric::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in s.split(',') {
        let m = Metric::parse(name).ok_or_else(|| CliError::Config(format!("unknown metric {name:?}")))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

fn load_settings(path: &Option<PathBuf>, allowed: &[&str]) -> Result<FileSettings, CliError> {
    let file = match path {
        Some(p) => FileSettings::load(p)?,
        None => FileSettings::default(),
    };
    file.check_keys(allowed)?;
    Ok(file)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn sweep(args: SweepArgs, config: &Option<PathBuf>) -> Result<(), CliError> {
    let file = load_settings(
        config,
        &["m", "delta-min", "delta-max", "steps", "metrics", "direction", "format", "out", "seed", "budget"],
    )?;
    let mut cfg = SweepConfig::<f64>::default();
    cfg.m = file.pick(args.m, "m")?.unwrap_or(cfg.m);
    cfg.delta_min = file.pick(args.delta_min, "delta-min")?.unwrap_or(cfg.delta_min);
    cfg.delta_max = file.pick(args.delta_max, "delta-max")?.unwrap_or(cfg.delta_max);
    cfg.steps = file
        .pick(args.steps, "steps")?
        .unwrap_or_else(|| steps_for_range(cfg.delta_min, cfg.delta_max, DEFAULT_STEPS_PER_DECADE));
    if let Some(list) = file.pick::<String>(args.metrics, "metrics")? {
        cfg.metrics = parse_metrics(&list)?;
    }
    cfg.directions = directions(&args.directions, &file)?;
    cfg.seed = file.pick(args.seed, "seed")?.unwrap_or(cfg.seed);
    cfg.disc.budget = file.pick(args.budget, "budget")?.unwrap_or(cfg.disc.budget);
    let format_name = file.pick::<String>(args.format, "format")?.unwrap_or_else(|| "csv".into());
    let format =
        OutputFormat::parse(&format_name).ok_or_else(|| CliError::Config(format!("unknown format {format_name:?}")))?;
    let out = file.pick(args.out, "out")?;
    cfg.validate().map_err(config_err)?;

    let records = run_sweep(&cfg).map_err(config_err)?;
    let fits = fit_all(&records);
    write_output(&out, &emit(&records, &fits, format))?;

    for f in &fits {
        eprintln!(
            "fit {:<12} {:<5} slope {:+.4} (theory {:+.4}, r² {:.6}) {}",
            f.metric.name(),
            f.kind.name(),
            f.slope,
            f.theoretical_slope,
            f.r_squared,
            if f.within_tolerance { "ok" } else { "outside tolerance" }
        );
    }
    let failed = records.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        eprintln!("{failed} record(s) failed; see the error tags in the output");
    }
    let violations = check_ordering(&records);
    if let Some(v) = violations.first() {
        return Err(CliError::Invariant(format!(
            "{} ordering violation(s); first at delta = {}: {} {} = {} exceeds {} {} = {}",
            violations.len(),
            v.delta,
            v.lower.0,
            v.lower.1,
            v.lower.2,
            v.upper.0,
            v.upper.1,
            v.upper.2
        )));
    }
    Ok(())
}

fn certify(args: CertifyArgs, config: &Option<PathBuf>) -> Result<(), CliError> {
    let file = load_settings(config, &["m", "delta", "samples", "seed"])?;
    let m = file.pick(args.m, "m")?.unwrap_or(2);
    let delta = file.pick(args.delta, "delta")?.unwrap_or(1e-2);
    let samples = file.pick(args.samples, "samples")?.unwrap_or(MIN_CERTIFY_SAMPLES);
    let seed = file.pick(args.seed, "seed")?.unwrap_or(0);
    let domain = EggRingDomain::<f64>::new(m).map_err(config_err)?;
    let witness = SibonyWitness::new(delta, m).map_err(config_err)?;
    let cert = certify_admissible(&witness, &domain, &CertifyConfig::with_samples(samples, seed)).map_err(config_err)?;
    write_output(&None, &format!("m                     {m}\ndelta                 {delta}\n{cert}\n"))?;
    if cert.passes() {
        Ok(())
    } else {
        Err(CliError::Invariant("the witness failed certification".into()))
    }
}

fn point(args: PointArgs, config: &Option<PathBuf>) -> Result<(), CliError> {
    let file = load_settings(config, &["m", "delta", "direction", "budget"])?;
    let mut cfg = SweepConfig::<f64> {
        m: file.pick(args.m, "m")?.unwrap_or(2),
        directions: directions(&args.directions, &file)?,
        ..SweepConfig::default()
    };
    let delta = file.pick(args.delta, "delta")?.unwrap_or(1e-2);
    cfg.disc.budget = file.pick(args.budget, "budget")?.unwrap_or(cfg.disc.budget);
    if cfg.directions.iter().any(|d| d.is_zero()) {
        return Err(CliError::Config("the zero direction carries no information".into()));
    }
    let records = bounds_at_point(&cfg, delta).map_err(config_err)?;
    let mut text = format!("m = {}, delta = {delta}, p = {}\n", cfg.m, 0.5 + delta);
    for xi in &cfg.directions {
        text.push_str(&format!(
            "\ndirection ({}{:+}i, {}{:+}i)\n{:<13} {:<6} {:<21} {}\n",
            xi.xi_z.re, xi.xi_z.im, xi.xi_w.re, xi.xi_w.im, "metric", "kind", "method", "value"
        ));
        for r in records.iter().filter(|r| r.direction == *xi) {
            let value = match &r.error {
                Some(e) => format!("error: {e}"),
                None => format!("{}", r.value),
            };
            text.push_str(&format!("{:<13} {:<6} {:<21} {}\n", r.metric.name(), r.kind.name(), r.method, value));
        }
    }
    write_output(&None, &text)?;
    let violations = check_ordering(&records);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("{} ordering violation(s)", violations.len())))
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("METRICS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("METRICS_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Sweep(a) => sweep(a, &cli.config),
        Command::Certify(a) => certify(a, &cli.config),
        Command::Point(a) => point(a, &cli.config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("metrics: {e}");
            ExitCode::from(e.code())
        }
    }
}
