use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dtx::selftest::{self, Status};
use dtx::{commands, CliError, Route, RunConfig, EXIT_ERROR, EXIT_OK, EXIT_OUT_OF_RANGE};

/// Weighted X-ray transform of symmetric tensors on the unit disk.
#[derive(Parser)]
#[command(name = "dtx", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Weight exponent γ in (−1, 1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Tensor order m.
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Largest polynomial degree.
    #[arg(long, global = true)]
    nmax: Option<u32>,
    /// α nodes of the boundary grid (β nodes are twice this).
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,
    /// Relative tolerance of range condition (a).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    route: Option<Route>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path (or path prefix for `sinogram`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON config file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Forward transform of a tensor JSON file to a CSV sinogram and coefficients.
    Sinogram { input: PathBuf },
    /// Range test of coefficient data for the given order.
    Rangecheck { input: PathBuf },
    /// itt representative from coefficients (JSON) or samples (CSV).
    Reconstruct { input: PathBuf },
    /// itt representative of a tensor JSON file.
    Decompose { input: PathBuf },
    /// Normalized Zernike table with singular values.
    SvdTable,
    /// Runs the self-verification suites.
    Selftest,
}

fn config(flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(g) = flags.gamma {
        cfg.gamma = g;
    }
    if let Some(m) = flags.order {
        cfg.order = m;
    }
    if let Some(n) = flags.nmax {
        cfg.n_max = n;
    }
    if flags.quad_nodes.is_some() {
        cfg.quad_nodes = flags.quad_nodes;
    }
    if let Some(t) = flags.tol {
        cfg.tol = t;
    }
    if let Some(r) = flags.route {
        cfg.route = r;
    }
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    if flags.out.is_some() {
        cfg.out = flags.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let cfg = config(&cli.flags)?;
    match &cli.command {
        Command::Sinogram { input } => commands::sinogram(&cfg, input),
        Command::Rangecheck { input } => commands::rangecheck(&cfg, input),
        Command::Reconstruct { input } => commands::reconstruct(&cfg, input),
        Command::Decompose { input } => commands::decompose(&cfg, input),
        Command::SvdTable => commands::svd_table(&cfg),
        Command::Selftest => {
            let gammas = if cli.flags.gamma.is_some() { vec![cfg.gamma] } else { cfg.gammas.clone() };
            let results = selftest::run(&cfg, &gammas);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| r.status == Status::Fail).count();
            let skipped = results.iter().filter(|r| r.status == Status::Skip).count();
            println!("{} suites, {failed} failed, {skipped} skipped", results.len());
            Ok(if failed == 0 { EXIT_OK } else { EXIT_ERROR })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(CliError::Core(e @ dtx_core::Error::OutOfRange { .. })) => {
            eprintln!("error: {e}");
            EXIT_OUT_OF_RANGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code as u8)
}
