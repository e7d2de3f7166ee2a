mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sneakpath_core::TinSingleVariant;

use config::{Format, GridSpec, RunConfig};
use error::{CliError, CliResult};
use output::render;

#[derive(Parser)]
#[command(
    name = "sneakpath",
    version,
    about = "Rates and Monte Carlo checks for crossbar memories with failed selectors"
)]
struct Cli {
    /// JSON run configuration; missing fields take the reference defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file, or the target directory for `simulate` (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, value_enum)]
    tin_variant: Option<TinArg>,
    /// Overrides `params.sigma`.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Overrides `q` with a single input probability.
    #[arg(long, global = true)]
    q: Option<f64>,
    /// Overrides `trials`.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Overrides the array side `n`.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TinArg {
    WorstK,
    Ergodic,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum atoms: k_prime,location_bits,weight.
    Spectrum,
    /// Rates over a q grid: q,single,across,tin_single,tin_across.
    RateCurve,
    /// Rates maximised over q for each sigma in the grid.
    RateVsSigma,
    /// Monte Carlo checks; exits with 2 if any check fails.
    Validate,
    /// Writes one simulated array (x, phi, v, y) into the --out directory.
    Simulate,
}

fn build_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(sigma) = cli.sigma {
        cfg.params.sigma = sigma;
    }
    if let Some(q) = cli.q {
        cfg.q = Some(GridSpec::Value(q));
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(t) = cli.tin_variant {
        cfg.tin_variant = match t {
            TinArg::WorstK => TinSingleVariant::WorstK,
            TinArg::Ergodic => TinSingleVariant::Ergodic,
        };
    }
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(format) = cli.format {
        cfg.output.format = Some(format);
    }
    Ok(cfg)
}

fn emit(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.output.path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let cfg = build_config(cli)?;
    let csv = cfg.output.format.unwrap_or(Format::Csv);
    match cli.command {
        Command::Spectrum => emit(&cfg, &render(&commands::spectrum_rows(&cfg)?, csv)),
        Command::RateCurve => emit(&cfg, &render(&commands::rate_curve_rows(&cfg)?, csv)),
        Command::RateVsSigma => emit(&cfg, &render(&commands::rate_vs_sigma_rows(&cfg)?, csv)),
        Command::Validate => {
            let checks = commands::validation_checks(&cfg)?;
            let format = cfg.output.format.unwrap_or(Format::Json);
            emit(&cfg, &render(&checks, format))?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(CliError::ValidationFailed {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
        Command::Simulate => {
            let dir = cfg
                .output
                .path
                .clone()
                .unwrap_or_else(|| PathBuf::from("simulation"));
            let written = commands::simulate(&cfg, &dir)?;
            println!("{}", written.join("\n"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(jobs);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(CliError::Usage(format!("worker pool: {e}"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
