#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freeplate_cli::config::{Check, ExperimentConfig};
use freeplate_cli::pipeline::{self, fourier_reports};
use freeplate_cli::report;
use freeplate_cli::CliError;
use freeplate_core::bounds::bound_table;
use freeplate_core::{DomainKind, DomainSpec, Operator};

#[derive(Parser)]
#[command(name = "freeplate", version, about = "Free membrane and free plate spectra, bounds and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a spectrum and write it as JSON.
    Compute(ProblemArgs),
    /// Tabulate the closed-form bounds for m = 1..M.
    Bounds(BoundsArgs),
    /// Compute a spectrum and check it against the bounds (and optional oracle).
    Verify(VerifyArgs),
    /// Evaluate N/D on a radius grid and check it against the next eigenvalue.
    FourierCheck(FourierArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Interval,
    Rectangle,
    Disk,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Membrane,
    Plate,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Bounds,
    Oracle,
    Fourier,
}

#[derive(Args)]
struct ProblemArgs {
    /// JSON experiment config. Conflicts with the inline problem flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Domain shape. Without it, `--n 1` is an interval of length `--volume`
    /// and `--n 2` a disk of area `--volume`.
    #[arg(long, value_enum, conflicts_with = "config")]
    domain: Option<ShapeArg>,
    /// Side lengths, or the radius for a disk.
    #[arg(long, value_delimiter = ',', conflicts_with = "config")]
    extents: Vec<f64>,
    #[arg(long, conflicts_with = "config")]
    n: Option<usize>,
    #[arg(long, conflicts_with = "config")]
    volume: Option<f64>,
    #[arg(long, value_enum, default_value = "plate", conflicts_with = "config")]
    operator: OperatorArg,
    #[arg(long, conflicts_with = "config")]
    tau: Option<f64>,
    /// Largest m checked.
    #[arg(long, conflicts_with = "config")]
    m: Option<usize>,
    /// Number of eigenvalues, default m + 1.
    #[arg(long, conflicts_with = "config")]
    count: Option<usize>,
    /// Output file, standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    n: Option<usize>,
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    volume: Option<f64>,
    #[arg(long, conflicts_with = "config")]
    tau: Option<f64>,
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    m: Option<usize>,
    /// One row per (m, bound kind) instead of one row per m.
    #[arg(long)]
    long: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Checks to run with inline flags; defaults to `bounds`.
    #[arg(long = "check", value_enum, conflicts_with = "config")]
    checks: Vec<CheckArg>,
    /// Where to write the spectrum JSON.
    #[arg(long)]
    spectrum_out: Option<PathBuf>,
}

#[derive(Args)]
struct FourierArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Radii per grid.
    #[arg(long)]
    points: Option<usize>,
}

impl ProblemArgs {
    fn domain(&self) -> Result<DomainSpec, CliError> {
        let domain = match (self.domain, self.n, self.volume) {
            (Some(shape), _, _) => {
                let kind = match shape {
                    ShapeArg::Interval => DomainKind::Interval,
                    ShapeArg::Rectangle => DomainKind::Rectangle,
                    ShapeArg::Disk => DomainKind::Disk,
                };
                DomainSpec::new(kind, self.extents.clone())
            }
            (None, Some(1), Some(v)) => DomainSpec::interval(v),
            (None, Some(2), Some(v)) => DomainSpec::disk((v / std::f64::consts::PI).sqrt()),
            (None, Some(n), Some(_)) => {
                return Err(CliError::Config(format!(
                    "no default domain in dimension {n}; pass --domain"
                )))
            }
            _ => return Err(CliError::Config("pass --config, --domain or --n with --volume".into())),
        };
        let domain = domain.map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(n) = self.n {
            if n != domain.dimension() {
                return Err(CliError::Config(format!(
                    "--n {n} does not match a {}-dimensional domain",
                    domain.dimension()
                )));
            }
        }
        Ok(domain)
    }

    fn experiment(&self, checks: BTreeSet<Check>) -> Result<ExperimentConfig, CliError> {
        if let Some(path) = &self.config {
            return ExperimentConfig::load(path);
        }
        let operator = match self.operator {
            OperatorArg::Membrane => Operator::Membrane,
            OperatorArg::Plate => Operator::Plate,
        };
        let m_max = self.m.unwrap_or(0);
        let mut config = ExperimentConfig::new(
            self.domain()?,
            operator,
            self.tau.unwrap_or(0.0),
            self.count.unwrap_or(m_max + 1),
        );
        config.m_max = m_max;
        config.checks = checks;
        config.validate()?;
        Ok(config)
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Io(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let mut w = open_out(path)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Io(e.to_string()))
}

fn run_compute(args: &ProblemArgs) -> Result<(), CliError> {
    let config = args.experiment(BTreeSet::new())?;
    let computed = pipeline::compute(&config)?;
    let out = args.out.as_deref().or(config.spectrum_out.as_deref());
    write_text(out, &report::spectrum_json(&computed.spectrum))
}

fn run_bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let (n, volume, tau, m_max) = match &args.config {
        Some(path) => {
            let c = ExperimentConfig::load(path)?;
            (c.domain.dimension(), c.domain.volume(), c.tau, c.m_max)
        }
        None => (
            args.n.unwrap_or(0),
            args.volume.unwrap_or(0.0),
            args.tau.unwrap_or(0.0),
            args.m.unwrap_or(0),
        ),
    };
    let rows = bound_table(n, volume, tau, m_max).map_err(|e| CliError::Config(e.to_string()))?;
    let out = open_out(args.out.as_deref())?;
    if args.long {
        report::write_bounds_long(out, &rows)
    } else {
        report::write_bounds_wide(out, &rows)
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let checks = if args.checks.is_empty() {
        BTreeSet::from([Check::Bounds])
    } else {
        args.checks
            .iter()
            .map(|c| match c {
                CheckArg::Bounds => Check::Bounds,
                CheckArg::Oracle => Check::Oracle,
                CheckArg::Fourier => Check::Fourier,
            })
            .collect()
    };
    let config = args.problem.experiment(checks)?;
    let outcome = pipeline::run(&config)?;

    if let Some(path) = args.spectrum_out.as_deref().or(config.spectrum_out.as_deref()) {
        write_text(Some(path), &report::spectrum_json(&outcome.spectrum))?;
    }
    if let Some(path) = config.fourier_out.as_deref() {
        report::write_fourier_csv(open_out(Some(path))?, &outcome.fourier)?;
    }
    let out = args.problem.out.as_deref().or(config.report_out.as_deref());
    report::write_verify_csv(open_out(out)?, &outcome.rows)?;

    if let Some(dev) = outcome.oracle_deviation {
        eprintln!("oracle: max deviation {dev:e}");
    }
    if outcome.passed() {
        Ok(())
    } else {
        for f in &outcome.failures {
            eprintln!("FAIL {f}");
        }
        Err(CliError::Failed(format!("{} failing checks", outcome.failures.len())))
    }
}

fn run_fourier(args: &FourierArgs) -> Result<(), CliError> {
    let mut config = args.problem.experiment(BTreeSet::from([Check::Fourier]))?;
    if let Some(p) = args.points {
        config.grid_points = Some(p);
    }
    config.validate()?;
    let computed = pipeline::compute(&config)?;
    let modes = computed
        .modes
        .ok_or_else(|| CliError::Config("the fourier check needs Ritz eigenfunctions".into()))?;
    let reports = fourier_reports(&modes, config.m_max, config.grid_points())?;
    let out = args.problem.out.as_deref().or(config.fourier_out.as_deref());
    report::write_fourier_csv(open_out(out)?, &reports)?;
    let bad: Vec<_> = reports.iter().flat_map(|r| &r.rows).filter(|r| !r.holds).collect();
    for row in &bad {
        eprintln!(
            "FAIL m = {}, r = {:e}: N/D = {:e} below lambda_next = {:e}",
            row.m, row.r, row.ratio, row.lambda_next
        );
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} grid points violate the inequality", bad.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => run_compute(args),
        Command::Bounds(args) => run_bounds(args),
        Command::Verify(args) => run_verify(args),
        Command::FourierCheck(args) => run_fourier(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("freeplate: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
