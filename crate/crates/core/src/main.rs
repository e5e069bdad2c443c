use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use steer::config::{ExperimentConfig, FormulaSpec, Method, ModelSpec};
use steer::experiments::{run_to_file, with_threads, Experiment};
use steer::formulas::{depth_estimate, split_symmetric, steer_depth_bound, suzuki};
use steer::models::Model;
use steer::sampler::SteerMode;
use steer::series::{error_hamiltonian, symmetric_effective_hamiltonian};
use steer::simulator::StateVector;
use steer::Error;

#[derive(Parser)]
#[command(name = "steer", version, about = "Trotter error series, sampled corrections and benchmark sweeps")]
struct Cli {
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the error Hamiltonian series as `<power> <pauli> <coefficient>` lines.
    Derive(DeriveArgs),
    /// Run the sweep described by a TOML config and write its CSV.
    Run(RunArgs),
    /// Print per-layer two-qubit depths of the formula and each correction mode.
    Depth(DepthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Ising,
    Heisenberg,
    Hubbard,
    File,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long, default_value_t = 1)]
    rows: usize,
    /// Columns of the lattice (chain length for Heisenberg).
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    j: f64,
    /// Transverse field of the Ising model.
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// On-site interaction of the Hubbard model.
    #[arg(long, default_value_t = 4.0)]
    u: f64,
    /// Hamiltonian file for `--model file`.
    #[arg(long)]
    path: Option<PathBuf>,
    /// `suzuki1`, `suzuki2` or `suzuki4`.
    #[arg(long, default_value = "suzuki2")]
    formula: FormulaSpec,
    /// Master seed; random-field models draw their fields from it.
    #[arg(long)]
    seed: u64,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec, Error> {
        let cols = || self.cols.ok_or_else(|| Error::Config("--cols is required for this model".into()));
        Ok(match self.model {
            ModelKind::Ising => ModelSpec::Ising { rows: self.rows, cols: cols()?, j: self.j, h: self.h },
            ModelKind::Heisenberg => ModelSpec::Heisenberg { n: cols()?, field_seed: None },
            ModelKind::Hubbard => ModelSpec::Hubbard { rows: self.rows, cols: cols()?, j: self.j, u: self.u },
            ModelKind::File => ModelSpec::File {
                path: self.path.clone().ok_or_else(|| Error::Config("--path is required for --model file".into()))?,
            },
        })
    }

    fn build(&self) -> Result<Model, Error> {
        self.spec()?.build(self.seed)
    }
}

#[derive(Args)]
struct DeriveArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Highest power kept; defaults to twice the formula order.
    #[arg(long)]
    order: Option<usize>,
    /// Derive the sandwiched generator of the symmetric split instead.
    #[arg(long)]
    symmetric: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the seed stored in the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DepthArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Correction modes to tabulate; all when absent.
    #[arg(long, value_delimiter = ',')]
    mode: Vec<SteerMode>,
}

fn derive(args: &DeriveArgs) -> Result<(), Error> {
    let model = args.model.build()?;
    let f = args.model.formula.build(&model)?;
    let max_order = args.order.unwrap_or(2 * f.order());
    let h = &model.hamiltonian;
    let e = if args.symmetric {
        symmetric_effective_hamiltonian(&split_symmetric(&f)?, h, max_order)?
    } else {
        error_hamiltonian(&f, h, max_order)?
    };
    if e.is_zero() {
        eprintln!("error series vanishes up to t^{max_order}: the formula is exact for {}", model.name);
        return Ok(());
    }
    print!("{}", e.dump());
    Ok(())
}

fn run(args: &RunArgs, threads: Option<usize>) -> Result<(), Error> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if threads.is_some() {
        cfg.threads = threads;
    }
    let rows = run_to_file(&cfg)?;
    eprintln!("wrote {} rows to {}", rows.len(), cfg.output.display());
    Ok(())
}

fn depth(args: &DepthArgs, threads: Option<usize>) -> Result<(), Error> {
    let model = args.model.build()?;
    let n = model.n_qubits();
    let f = args.model.formula.build(&model)?;
    let modes = if args.mode.is_empty() { SteerMode::ALL.to_vec() } else { args.mode.clone() };
    let methods: Vec<Method> = std::iter::once(Method::Trotter).chain(modes.into_iter().map(Method::Steer)).collect();
    let formula_depth = depth_estimate(&f, &[]).formula_depth;
    let mut exp = Experiment::new(model, f, StateVector::basis(n, 0)?, args.model.seed)?;
    with_threads(threads, || exp.prepare(&methods))??;

    println!("{:<12} {:>12} {:>12}", "method", "layer_depth", "correction");
    for &m in &methods {
        let d = exp.layer_depth(m);
        println!("{:<12} {:>12} {:>12}", m.name(), d, d - formula_depth);
    }
    println!("worst-case single-rotation bound: {}", steer_depth_bound(formula_depth, n));
    let partition = &exp.model().partition;
    let s2 = depth_estimate(&suzuki(2, partition)?, &[]).formula_depth;
    let s4 = depth_estimate(&suzuki(4, partition)?, &[]).formula_depth;
    if s2 > 0 {
        println!("suzuki4/suzuki2 depth ratio: {s4}/{s2} = {:.3}", s4 as f64 / s2 as f64);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Derive(a) => derive(a),
        Command::Run(a) => run(a, cli.threads),
        Command::Depth(a) => depth(a, cli.threads),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::HamiltonianParse { .. } | Error::PauliParse(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
