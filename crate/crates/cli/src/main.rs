use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use koopman_rkhs::experiments::{
    error_field, run_convergence_sweep, theoretical_rate, write_field_csv, ConvergenceRecord,
    FailedCell, RateReport, SmoothnessParams, SweepConfig,
};
use koopman_rkhs::{Error, KernelSpec, MaternNu, RotationParams, System};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_OTHER: u8 = 1;

#[derive(Parser)]
#[command(
    name = "koopman-rkhs",
    version,
    about = "Kernel Koopman approximation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a benchmark orbit as CSV (`step,x1,...,xp`).
    Trajectory {
        /// Experiment config; defaults to the rotation benchmark.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Number of steps; defaults to what the config's sweep needs.
        #[arg(long)]
        steps: Option<usize>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a convergence sweep, writing `sweep.csv` and `summary.json` to the config's out_dir.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Pointwise error of both approximations on a grid, written to `field.csv` in out_dir.
    Field {
        #[arg(long)]
        config: PathBuf,
        /// Sample count; overrides the config's field_n.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Print the supremal log-log error slope t - s.
    Rate {
        /// Matérn smoothness: 1/2, 3/2 or 5/2.
        #[arg(long, default_value = "5/2")]
        nu: String,
        /// Ambient dimension.
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Manifold dimension.
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Derivative index.
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    system: &'a System,
    trajectory: &'a str,
    kernel: &'a KernelSpec,
    sample_counts: &'a [usize],
    eval_tail: usize,
    records: Vec<&'a ConvergenceRecord>,
    failed: Vec<&'a FailedCell>,
    report: Option<&'a RateReport>,
    report_error: Option<&'a str>,
}

enum Failure {
    Lib(Error),
    AllCellsFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::AllCellsFailed) => {
            eprintln!("error: every sweep cell failed");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::Input(_) | Error::InsufficientData { .. } => EXIT_CONFIG,
                Error::Factorization { .. } | Error::NonFinite { .. } => EXIT_NUMERICAL,
                Error::Io(_) => EXIT_OTHER,
            })
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Trajectory { config, steps, out } => {
            let cfg = match config {
                Some(path) => SweepConfig::from_file(&path)?,
                None => SweepConfig::defaults(System::Rotation(RotationParams::default())),
            };
            let mut cfg = cfg;
            if steps.is_some() {
                cfg.steps = steps;
            }
            let traj =
                koopman_rkhs::system_trajectory(&cfg.system, &cfg.x0, cfg.trajectory_steps())?;
            match out {
                Some(path) => traj.write_csv(BufWriter::new(create(&path)?))?,
                None => traj.write_csv(io::stdout().lock())?,
            }
        }
        Command::Sweep { config } => {
            let cfg = SweepConfig::from_file(&config)?;
            let traj = cfg.trajectory()?;
            let problem = cfg.problem(&traj)?;
            let outcome = run_convergence_sweep(&problem)?;

            fs::create_dir_all(&cfg.out_dir)?;
            let mut csv = BufWriter::new(create(&cfg.out_dir.join("sweep.csv"))?);
            outcome.write_csv(&mut csv)?;
            csv.flush()?;

            let summary = SweepSummary {
                system: &cfg.system,
                trajectory: traj.map_id(),
                kernel: &cfg.kernel,
                sample_counts: &cfg.sample_counts,
                eval_tail: cfg.eval_tail,
                records: outcome.records().collect(),
                failed: outcome.failures().collect(),
                report: outcome.report.as_ref(),
                report_error: outcome.report_error.as_deref(),
            };
            let mut json = BufWriter::new(create(&cfg.out_dir.join("summary.json"))?);
            serde_json::to_writer_pretty(&mut json, &summary)
                .map_err(|e| Error::Io(e.to_string()))?;
            writeln!(json)?;
            json.flush()?;

            for failed in outcome.failures() {
                eprintln!("cell n={} failed: {}", failed.n, failed.diagnostic);
            }
            if outcome.all_failed() {
                return Err(Failure::AllCellsFailed);
            }
            match (&outcome.report, &outcome.report_error) {
                (Some(r), _) => {
                    println!("slope_proj = {:.4}", r.slope_proj);
                    println!("slope_data = {:.4}", r.slope_data);
                    if let Some(bound) = r.theoretical_bound {
                        println!("theoretical t - s = {bound}");
                    }
                }
                (None, Some(why)) => println!("no slope fit: {why}"),
                (None, None) => {}
            }
        }
        Command::Field { config, n } => {
            let mut cfg = SweepConfig::from_file(&config)?;
            if n.is_some() {
                cfg.field_n = n;
                cfg.validate()?;
            }
            let traj = cfg.trajectory()?;
            let problem = cfg.problem(&traj)?;
            let grid = cfg.grid_for(&traj);
            let nodes = error_field(&problem, cfg.field_n(), &grid)?;
            fs::create_dir_all(&cfg.out_dir)?;
            let mut csv = BufWriter::new(create(&cfg.out_dir.join("field.csv"))?);
            write_field_csv(&nodes, &mut csv)?;
            csv.flush()?;
        }
        Command::Rate { nu, p, d, s } => {
            let nu: MaternNu = nu.parse()?;
            let rate = theoretical_rate(&SmoothnessParams { nu, p, d, s })?;
            println!("{rate}");
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())).into())
}
