#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons deliberately reject NaN
mod commands;
mod config;
mod error;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Output;
use config::RunConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "signchange", version, about = "Spectra, Riesz bounds, coercivity checks and bifurcation branches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (`key = value` lines); defaults are used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `out` from the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write SVG figures (default).
    #[arg(long, global = true, overrides_with = "no_plot")]
    plot: bool,
    /// Skip the SVG figures.
    #[arg(long, global = true, overrides_with = "plot")]
    no_plot: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Analytic eigenvalues, eigenfunction profiles and zero counts.
    Spectrum,
    /// Continue nonlinear branches from the configured seeds.
    Bifurcate,
    /// Extreme eigenvalues of the Gram matrix for growing truncations.
    Riesz,
    /// Discrete T-coercivity check over a grid of k.
    Coercivity,
    /// Eigenvalue counting function against its asymptotic slope.
    Weyl,
}

fn run(cli: &Cli) -> Result<Vec<String>, CliError> {
    let run = match &cli.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)?,
        None => RunConfig::default(),
    };
    let out = Output::new(commands::output_dir(&run, cli.out.as_deref()), !cli.no_plot)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} worker threads: {e}", cli.jobs)))?;
    pool.install(|| match cli.command {
        Command::Spectrum => commands::cmd_spectrum(&run, &out),
        Command::Bifurcate => commands::cmd_bifurcate(&run, &out),
        Command::Riesz => commands::cmd_riesz(&run, &out),
        Command::Coercivity => commands::cmd_coercivity(&run, &out),
        Command::Weyl => commands::cmd_weyl(&run, &out),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in &failures {
                eprintln!("FAIL: {f}");
            }
            ExitCode::from(CliError::Numerical(String::new()).exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
