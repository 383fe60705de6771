use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use secrecy_core::quadrature::QuadratureSpec;
use secrecy_sched::report::{certify, diversity_csv, floor_csv};
use secrecy_sched::{figure_spec, parse_config, sweep_csv, CliError, CliResult, SweepSpec};

#[derive(Parser)]
#[command(
    name = "secrecy-sched",
    version,
    about = "Secrecy outage of scheduled cognitive users"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form, floor and Monte-Carlo outage over a parameter grid
    Sweep(SpecArgs),
    /// Outage floors and bounds against the MER
    Floor(SpecArgs),
    /// Diversity-order estimates
    Diversity(SpecArgs),
    /// Check closed forms against numerical integration
    Certify {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relative tolerance requested from the integrator
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// TOML sweep configuration
    #[arg(long, conflicts_with = "figure", required_unless_present = "figure")]
    config: Option<PathBuf>,
    /// Built-in figure sweep (2, 3, 4 or 5)
    #[arg(long)]
    figure: Option<u32>,
    /// Write CSV here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monte-Carlo trials per grid point (0 disables simulation)
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

impl SpecArgs {
    fn spec(&self) -> CliResult<SweepSpec> {
        let mut spec = match (&self.config, self.figure) {
            (Some(path), _) => parse_config(&std::fs::read_to_string(path)?)?,
            (None, Some(n)) => figure_spec(n)?,
            (None, None) => return Err(CliError::Config("give --config or --figure".into())),
        };
        if let Some(t) = self.trials {
            spec.mc_trials = t;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        Ok(spec)
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::Config(format!("--workers: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep(a) => {
            let spec = a.spec()?;
            let csv = with_workers(a.workers, || sweep_csv(&spec))??;
            emit(a.out.as_ref(), &csv)
        }
        Command::Floor(a) => {
            let spec = a.spec()?;
            let csv = with_workers(a.workers, || floor_csv(&spec))??;
            emit(a.out.as_ref(), &csv)
        }
        Command::Diversity(a) => {
            let spec = a.spec()?;
            let csv = with_workers(a.workers, || diversity_csv(&spec))??;
            emit(a.out.as_ref(), &csv)
        }
        Command::Certify { out, rel_tol } => {
            let quad = QuadratureSpec {
                rel_tol,
                ..Default::default()
            };
            quad.validate()?;
            let report = certify(&quad)?;
            emit(out.as_ref(), &report.to_csv())?;
            report.check()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage mistakes are configuration errors, not numerical ones
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
