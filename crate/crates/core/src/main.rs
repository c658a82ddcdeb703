use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ivefit::io::read_dataset;
use ivefit::pipeline::{fit_report, hull_report, plot2d, sweep, sweep_csv, RunConfig, DEFAULT_EXACT_THRESHOLD};
use ivefit::{AnnealConfig, Error, ReportFile, SolverConfig};

/// Fit linear models to interval data by maximizing the Tol functional and
/// report the interval variability of the estimate.
#[derive(Parser)]
#[command(name = "ivefit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate parameters, min cond, IVE and RVE.
    Fit { input: PathBuf },
    /// As `fit`, plus the interval hull of the tolerable set.
    Hull { input: PathBuf },
    /// SVG of a two-parameter tolerable set with the estimate and its IVE box.
    Plot2d { input: PathBuf },
    /// Fit and hull of the theta-family test systems.
    Sweep,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Opts {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Seed of the min-cond annealer.
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,
    /// Largest n fitted by the exact orthant LP oracle.
    #[arg(long, default_value_t = DEFAULT_EXACT_THRESHOLD, global = true)]
    exact_threshold: usize,
    #[arg(long, global = true)]
    anneal_restarts: Option<usize>,
    #[arg(long, global = true)]
    anneal_steps: Option<usize>,
    #[arg(long, global = true)]
    tol_max_iters: Option<usize>,
    /// Starting point of the ascent, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    start: Option<Vec<f64>>,
}

impl Opts {
    fn run_config(&self) -> RunConfig {
        let mut anneal = AnnealConfig {
            seed: self.seed,
            ..AnnealConfig::default()
        };
        if let Some(r) = self.anneal_restarts {
            anneal.restarts = r;
        }
        if let Some(s) = self.anneal_steps {
            anneal.steps = s;
        }
        let mut solver = SolverConfig {
            start: self.start.clone(),
            ..SolverConfig::default()
        };
        if let Some(it) = self.tol_max_iters {
            solver.max_iterations = it;
        }
        RunConfig {
            exact_threshold: self.exact_threshold,
            solver,
            anneal,
        }
    }
}

fn render_report(report: &ReportFile, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => report.to_json().map(|s| s + "\n"),
        Format::Csv => report.to_csv(),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = cli.opts.run_config();
    let text = match &cli.command {
        Command::Fit { input } => {
            let report = fit_report(&read_dataset(input)?, &cfg)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            render_report(&report, cli.opts.format)?
        }
        Command::Hull { input } => render_report(&hull_report(&read_dataset(input)?, &cfg)?, cli.opts.format)?,
        Command::Plot2d { input } => plot2d(&read_dataset(input)?, &cfg)?,
        Command::Sweep => {
            let rows = sweep(&cfg)?;
            match cli.opts.format {
                Format::Csv => sweep_csv(&rows)?,
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            }
        }
    };
    emit(cli.opts.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
