//! Command line front end: computes plane constants, verifies the relation
//! battery, sweeps parameters, and renders SVG figures.

mod norms;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use isoplane::relations;
use isoplane::{estimate, ConstantKind, Estimate, GridConfig, NormSpec};
use output::{ComputeRecord, SweepRecord, VerifyRecord};

const ENV_WORKERS: &str = "ISOPLANE_WORKERS";

#[derive(Parser)]
#[command(
    name = "isoplane",
    version,
    about = "Geometric constants of two-dimensional normed planes",
    after_help = "Environment:\n  ISOPLANE_WORKERS  worker-thread count used when --workers is not given\n\nExit codes:\n  0  success (verify: every asserted relation passed)\n  1  at least one asserted relation failed\n  2  computation or I/O error\n  64 usage error"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one constant of one norm and print a single record
    Compute(ComputeArgs),
    /// Run every proven relation over a battery of norms
    Verify(VerifyArgs),
    /// Sweep gamma's t, delta's eps, or a constant over the lp family
    Sweep(SweepArgs),
    /// Render an SVG: a unit ball with optional witness, or a sweep chart
    Plot(PlotArgs),
    /// List the builtin norm labels
    ListNorms,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct GridArgs {
    /// Points of the theta grid
    #[arg(long)]
    grid: Option<usize>,
    /// Points of the radius grid for ball-interior searches
    #[arg(long, default_value_t = 32)]
    radius_grid: usize,
    /// Refinement value tolerance
    #[arg(long, default_value_t = 1e-9)]
    refine_tol: f64,
    /// Worker threads (default: ISOPLANE_WORKERS, then all cores)
    #[arg(long)]
    workers: Option<usize>,
}

impl GridArgs {
    fn config(&self, default_grid: usize) -> GridConfig {
        GridConfig {
            theta_grid: self.grid.unwrap_or(default_grid),
            radius_grid: self.radius_grid,
            refine_tol: self.refine_tol,
            refine_budget: GridConfig::default().refine_budget,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Norm source: builtin:<label> or a JSON norm file
    #[arg(long)]
    norm: String,
    /// omega | omega-prime | james | schaffer | cnj | d | br | gamma:<t> | delta:<eps>
    #[arg(long)]
    constant: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// "default" or a list of norm file paths
    #[arg(long, num_args = 1.., default_values_t = vec!["default".to_string()])]
    battery: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// gamma or delta (needs --norm), or any constant for an lp sweep
    #[arg(long)]
    constant: String,
    /// Norm source for gamma/delta sweeps; forbidden for lp sweeps
    #[arg(long)]
    norm: Option<String>,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    step: f64,
    /// Append a p = inf row to an lp sweep
    #[arg(long)]
    include_inf: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct PlotArgs {
    /// Norm source: builtin:<label> or a JSON norm file
    #[arg(long)]
    norm: String,
    /// Draw the witness pair of this constant on the unit ball
    #[arg(long)]
    constant: Option<String>,
    /// Sweep range: with --to and --step, renders a chart instead
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Output path of the SVG
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
}

/// CLI failures carrying their exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Failure(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Compute(args) => with_pool(args.grid.workers, || cmd_compute(&args)),
        Command::Verify(args) => with_pool(args.grid.workers, || cmd_verify(&args)),
        Command::Sweep(args) => with_pool(args.grid.workers, || cmd_sweep(&args)),
        Command::Plot(args) => with_pool(args.grid.workers, || cmd_plot(&args)),
        Command::ListNorms => cmd_list_norms(),
    }
}

/// Run `f` inside a scoped rayon pool when a worker count is requested
/// (--workers, then ISOPLANE_WORKERS). Results are identical for every
/// worker count; the pool only controls parallelism.
fn with_pool<R: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<R, CliError> + Send,
) -> Result<R, CliError> {
    let workers = workers.or_else(|| {
        std::env::var(ENV_WORKERS)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    match workers {
        None => f(),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| CliError::Failure(format!("cannot build worker pool: {e}")))?;
            pool.install(f)
        }
    }
}

fn cmd_compute(args: &ComputeArgs) -> Result<u8, CliError> {
    let (label, spec) = norms::load_norm(&args.norm)?;
    let kind = parse_constant(&args.constant, false)?;
    let cfg = args.grid.config(2048);
    let est = run_estimate(&spec, kind, &cfg)?;
    let record = ComputeRecord::new(label, &est, cfg.radius_grid);
    let text = match args.format {
        Format::Json => output::json_line(&record),
        Format::Csv => format!("{}\n{}\n", ComputeRecord::CSV_HEADER, record.csv_row()),
    };
    emit(&text, args.out.as_deref())?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let battery: Vec<(String, NormSpec)> =
        if args.battery.len() == 1 && args.battery[0] == "default" {
            relations::default_battery()
        } else {
            let mut norms = Vec::new();
            for src in &args.battery {
                norms.push(norms::load_norm(src)?);
            }
            norms
        };
    let cfg = args.grid.config(1024);
    let run = relations::run_battery(&battery, &cfg)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let records: Vec<VerifyRecord> = run.reports.iter().map(VerifyRecord::new).collect();
    let mut text = String::new();
    match args.format {
        Format::Json => {
            for r in &records {
                text.push_str(&output::json_line(r));
            }
        }
        Format::Csv => {
            text.push_str(VerifyRecord::CSV_HEADER);
            text.push('\n');
            for r in &records {
                text.push_str(&r.csv_row());
                text.push('\n');
            }
        }
    }
    emit(&text, args.out.as_deref())?;
    Ok(verify_verdict(&run.reports))
}

/// Exit code of a verify run: 0 when every asserted relation passes,
/// 1 otherwise. Informational rows never gate the code.
fn verify_verdict(reports: &[isoplane::RelationReport]) -> u8 {
    if reports.iter().all(|r| !r.asserted || r.pass) {
        0
    } else {
        1
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, CliError> {
    if args.step.is_nan() || args.step <= 0.0 {
        return Err(CliError::Usage("sweep step must be positive".into()));
    }
    if args.from > args.to {
        return Err(CliError::Usage("sweep range must satisfy from <= to".into()));
    }
    let cfg = args.grid.config(512);
    let params = sweep_params(args.from, args.to, args.step);

    let mut rows: Vec<SweepRecord> = Vec::new();
    match args.constant.as_str() {
        "gamma" | "delta" => {
            let src = args.norm.as_deref().ok_or_else(|| {
                CliError::Usage(format!("sweep of {} needs --norm", args.constant))
            })?;
            let (_, spec) = norms::load_norm(src)?;
            for &p in &params {
                let kind = if args.constant == "gamma" {
                    ConstantKind::Gamma(p)
                } else {
                    ConstantKind::Delta(p)
                };
                let est = run_estimate(&spec, kind, &cfg)?;
                rows.push(SweepRecord { param: p, value: est.value });
            }
        }
        other => {
            // Sweep over the lp family.
            if args.norm.is_some() {
                return Err(CliError::Usage(
                    "an lp sweep picks its own norms; drop --norm or sweep gamma/delta".into(),
                ));
            }
            let kind = parse_constant(other, false)?;
            let mut ps = params.clone();
            if args.include_inf {
                ps.push(f64::INFINITY);
            }
            for &p in &ps {
                if p.is_nan() || p < 1.0 {
                    return Err(CliError::Usage(format!("lp sweep needs p >= 1, got {p}")));
                }
                let spec = NormSpec::lp(p)
                    .map_err(|e| CliError::Usage(format!("invalid exponent {p}: {e}")))?;
                let est = run_estimate(&spec, kind, &cfg)?;
                rows.push(SweepRecord { param: p, value: est.value });
            }
        }
    }

    let mut text = String::new();
    match args.format {
        Format::Json => {
            for r in &rows {
                if r.param.is_infinite() {
                    // JSON has no infinity; spell the lp endpoint as a string.
                    text.push_str(&format!(
                        "{{\"param\":\"inf\",\"value\":{}}}\n",
                        output::fmt_f64(r.value)
                    ));
                } else {
                    text.push_str(&output::json_line(r));
                }
            }
        }
        Format::Csv => {
            text.push_str(SweepRecord::CSV_HEADER);
            text.push('\n');
            for r in &rows {
                if r.param.is_infinite() {
                    text.push_str(&format!("inf,{}\n", output::fmt_f64(r.value)));
                } else {
                    text.push_str(&r.csv_row());
                    text.push('\n');
                }
            }
        }
    }
    emit(&text, args.out.as_deref())?;
    Ok(0)
}

fn cmd_plot(args: &PlotArgs) -> Result<u8, CliError> {
    let (label, spec) = norms::load_norm(&args.norm)?;
    let cfg = args.grid.config(512);
    let svg = match (args.from, args.to, args.step) {
        (Some(from), Some(to), Some(step)) => {
            let constant = args.constant.as_deref().ok_or_else(|| {
                CliError::Usage("a sweep plot needs --constant gamma or delta".into())
            })?;
            if step.is_nan() || step <= 0.0 || from > to {
                return Err(CliError::Usage("invalid sweep range".into()));
            }
            let mut rows = Vec::new();
            for &p in &sweep_params(from, to, step) {
                let kind = match constant {
                    "gamma" => ConstantKind::Gamma(p),
                    "delta" => ConstantKind::Delta(p),
                    other => {
                        return Err(CliError::Usage(format!(
                            "sweep plots support gamma and delta, not {other}"
                        )))
                    }
                };
                rows.push((p, run_estimate(&spec, kind, &cfg)?.value));
            }
            let x_label = if constant == "gamma" { "t" } else { "eps" };
            svg::sweep_chart_svg(&rows, &format!("{constant} on {label}"), x_label, constant)
        }
        (None, None, None) => {
            let witness = match &args.constant {
                Some(c) => {
                    let kind = parse_constant(c, false)?;
                    let est = run_estimate(&spec, kind, &cfg)?;
                    Some((est.witness.x, est.witness.y))
                }
                None => None,
            };
            svg::unit_ball_svg(&spec, &label, witness)
        }
        _ => {
            return Err(CliError::Usage(
                "a sweep plot needs all of --from, --to and --step".into(),
            ))
        }
    };
    std::fs::write(&args.out, svg)
        .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", args.out.display())))?;
    Ok(0)
}

fn cmd_list_norms() -> Result<u8, CliError> {
    let mut text = String::new();
    for (label, desc) in norms::BUILTINS {
        text.push_str(&format!("{label:<20} {desc}\n"));
    }
    emit(&text, None)?;
    Ok(0)
}

fn run_estimate(spec: &NormSpec, kind: ConstantKind, cfg: &GridConfig) -> Result<Estimate, CliError> {
    estimate(spec, kind, cfg).map_err(|e| CliError::Failure(e.to_string()))
}

/// Parse a `--constant` argument. `gamma`/`delta` need a `:<param>` suffix
/// unless the caller supplies the parameter externally (sweeps).
fn parse_constant(text: &str, allow_bare_param: bool) -> Result<ConstantKind, CliError> {
    let kind = match text {
        "omega" => ConstantKind::Omega,
        "omega-prime" | "omega_prime" => ConstantKind::OmegaPrime,
        "james" => ConstantKind::James,
        "schaffer" => ConstantKind::Schaffer,
        "cnj" => ConstantKind::Cnj,
        "d" => ConstantKind::DConst,
        "br" => ConstantKind::Br,
        "gamma" | "delta" if allow_bare_param => {
            return Err(CliError::Usage("internal: bare parameter".into()))
        }
        other => {
            if let Some(t) = other.strip_prefix("gamma:") {
                let t: f64 = t
                    .parse()
                    .map_err(|_| CliError::Usage(format!("cannot parse gamma parameter {t:?}")))?;
                ConstantKind::Gamma(t)
            } else if let Some(eps) = other.strip_prefix("delta:") {
                let eps: f64 = eps
                    .parse()
                    .map_err(|_| CliError::Usage(format!("cannot parse delta parameter {eps:?}")))?;
                ConstantKind::Delta(eps)
            } else if other == "gamma" || other == "delta" {
                return Err(CliError::Usage(format!(
                    "{other} needs a parameter here, e.g. {other}:0.5 (bare {other} is for sweep)"
                )));
            } else {
                return Err(CliError::Usage(format!("unknown constant {other:?}")));
            }
        }
    };
    Ok(kind)
}

fn sweep_params(from: f64, to: f64, step: f64) -> Vec<f64> {
    let mut params = Vec::new();
    let mut k = 0u64;
    loop {
        let p = from + k as f64 * step;
        if p > to + step * 1e-9 {
            break;
        }
        params.push(p.min(to));
        k += 1;
    }
    params
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display()))),
    }
}
