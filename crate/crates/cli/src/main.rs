//! `dirac-shell`: command-line front end to the numerical core.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CouplingSection, CurveSection, Discretization, Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("ConfigError: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] dirac_shell_core::Error),
    #[error("IoError: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(dirac_shell_core::Error::Io(_)) | CliError::Io(_) => 1,
            CliError::Core(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dirac-shell", version, about = "Dirac operators with δ-shell interactions on closed curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Treat ill-conditioned or spurious roots as failures (exit 3).
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Curve preset, e.g. `square(1)`, `circle`, `ellipse(2, 1)`, `lipschitz`.
    #[arg(long, global = true)]
    curve: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, global = true)]
    mass: Option<f64>,
    #[arg(long, global = true)]
    nodes_per_edge: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Self-adjointness verdict for the curve and coupling.
    Classify,
    /// m(θ) over a grid of opening angles.
    Mtheta,
    /// Corner symbol, closed form against direct Mellin evaluation.
    Symbol,
    /// Discrete eigenvalues in the gap.
    Eigs,
    /// Numerical checks of the boundary identities.
    Verify,
    /// Verdicts over a rectangle in the (ε, μ) plane.
    Sweep,
}

impl Command {
    fn default_format(self) -> Format {
        match self {
            Command::Classify | Command::Eigs | Command::Verify => Format::Json,
            Command::Mtheta | Command::Symbol | Command::Sweep => Format::Csv,
        }
    }
}

fn merge_flags(cli: &Cli, mut cfg: RunConfig) -> Result<RunConfig, CliError> {
    if let Some(c) = &cli.curve {
        cfg.curve = Some(CurveSection::parse_flag(c)?);
    }
    if cli.epsilon.is_some() || cli.mu.is_some() || cli.mass.is_some() {
        let base = cfg.coupling.unwrap_or(CouplingSection { epsilon: 0.0, mu: 0.0, mass: 1.0 });
        cfg.coupling = Some(CouplingSection {
            epsilon: cli.epsilon.unwrap_or(base.epsilon),
            mu: cli.mu.unwrap_or(base.mu),
            mass: cli.mass.unwrap_or(base.mass),
        });
    }
    if let Some(n) = cli.nodes_per_edge {
        cfg.discretization = Some(Discretization { nodes_per_edge: n, ..cfg.discretization.unwrap_or_default() });
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = merge_flags(cli, cfg)?;
    let output = cfg.output.clone().unwrap_or_default();
    let format = cli.format.or(output.format).unwrap_or(cli.command.default_format());
    let dir = cli.out.clone().or(output.dir).unwrap_or_else(|| PathBuf::from("."));
    let outcome = match cli.command {
        Command::Classify => commands::classify(&cfg, format)?,
        Command::Mtheta => commands::mtheta(&cfg, format)?,
        Command::Symbol => commands::symbol(&cfg, format)?,
        Command::Eigs => commands::eigs(&cfg, format, cli.strict)?,
        Command::Verify => commands::verify(&cfg, format)?,
        Command::Sweep => commands::sweep(&cfg, format)?,
    };
    let written = outcome
        .artifacts
        .iter()
        .map(|a| output::write_atomic(&dir, a))
        .collect::<Result<Vec<_>, _>>()?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(written),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
