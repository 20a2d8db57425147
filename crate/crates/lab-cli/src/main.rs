use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conclab::suites::Suite;
use lab_cli::{
    execute, exit_code, generate, render, CliError, Format, GenerateParams, InstanceKind,
    Overrides, RunConfig, Target,
};

#[derive(Parser)]
#[command(name = "lab", version, about = "Seeded verification sweeps for concentration inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy and variance tensorization, entropy duality.
    Entropy(RunArgs),
    /// Dirichlet forms, LSI, Poincaré and hypercontractivity on the biased cube.
    Cube(RunArgs),
    /// Gauss-Hermite moments and the Gaussian log-Sobolev bounds.
    Gauss(RunArgs),
    /// Convex distance: min-norm duality and moment bounds.
    Convex(RunArgs),
    /// The L1-L2 variance inequality and influence bounds.
    #[command(name = "l1l2")]
    L1l2(RunArgs),
    /// Transport solver certificates and the T2 inequality.
    Transport(RunArgs),
    /// Suprema of empirical processes against Poisson-type and Bernstein-type tails.
    Empirical(RunArgs),
    /// Every suite, in order.
    All(RunArgs),
    /// Writes a seeded instance file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of randomized instances.
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Replaces every tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with any of the fields above; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: InstanceKind,
    /// Cube dimension, number of support points or number of coordinates.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 4)]
    family: usize,
    #[arg(long, default_value_t = 2)]
    support: usize,
    #[arg(long)]
    signed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("LAB_THREADS = '{raw}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run(target: Target, args: RunArgs) -> Result<u8, CliError> {
    let flags = Overrides {
        seed: args.seed,
        n: args.n,
        p: args.p,
        instances: args.instances,
        samples: args.samples,
        tol: args.tol,
        out: args.out,
        format: args.format,
    };
    let file = match &args.config {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    let cfg = RunConfig::resolve(target, flags.over(file))?;
    let summary = execute(&cfg, &mut |line| eprintln!("{line}"))?;
    emit(&render(&summary, cfg.format)?, cfg.out.as_ref())?;
    eprintln!(
        "{}: {} instances, {} checks, {} failures",
        summary.suite, summary.instances, summary.checks, summary.failures
    );
    Ok(exit_code(&summary))
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    configure_threads()?;
    match command {
        Command::Entropy(a) => run(Target::One(Suite::Entropy), a),
        Command::Cube(a) => run(Target::One(Suite::Cube), a),
        Command::Gauss(a) => run(Target::One(Suite::Gauss), a),
        Command::Convex(a) => run(Target::One(Suite::Convex), a),
        Command::L1l2(a) => run(Target::One(Suite::L1l2), a),
        Command::Transport(a) => run(Target::One(Suite::Transport), a),
        Command::Empirical(a) => run(Target::One(Suite::Empirical), a),
        Command::All(a) => run(Target::All, a),
        Command::Generate(g) => {
            let params = GenerateParams {
                n: g.n,
                density: g.density,
                p: g.p,
                dim: g.dim,
                family: g.family,
                support: g.support,
                signed: g.signed,
                seed: g.seed,
            };
            emit(&generate(g.kind, &params)?, g.out.as_ref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
