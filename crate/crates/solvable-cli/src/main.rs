use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use solvable::classify::SolvabilityClass;
use solvable_cli::{
    cmd_benchmark, cmd_classify, cmd_factorize, cmd_graph_export, cmd_partition, cmd_simulate,
    CliError, RunConfig,
};

/// Partition qubit Hamiltonians into exactly solvable fragments, factorize
/// and solve them per symmetry sector, and benchmark measurement cost.
#[derive(Parser)]
#[command(name = "solvable", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Solvability class (fc, ac, nc, twc-ac, sym-twc-ac, ff, sym-ff,
    /// twc-ff, sym-twc-ff, pauli)
    #[arg(long, global = true)]
    class: Option<String>,

    /// Total shot budget for simulation
    #[arg(long, global = true)]
    shots: Option<u64>,

    /// RNG seed
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output formats, comma separated (json,csv,dot)
    #[arg(long, global = true)]
    format: Option<String>,

    /// Statevector size cap in qubits
    #[arg(long = "max-qubits", global = true)]
    max_qubits: Option<usize>,

    /// Eigensolver residual tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Flat key=value config file (same keys as the flags)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Test a Hamiltonian against a solvability class
    Classify {
        file: PathBuf,
        /// Print the certificate (twin classes, Krausz cliques)
        #[arg(long)]
        certificate: bool,
    },
    /// Sorted-insertion partition into fragments of a class
    Partition { file: PathBuf },
    /// Factorize fragments into symmetries and so-algebra generators
    Factorize { file: PathBuf },
    /// Ground-state variance metrics and largest-fragment statistics
    Benchmark { files: Vec<PathBuf> },
    /// Simulate shot-based measurement of the ground-state energy
    Simulate { file: PathBuf },
    /// Export anti-compatibility and root graphs as DOT
    GraphExport { file: PathBuf },
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_config_file(path)?;
    }
    if let Some(c) = &cli.class {
        let class: SolvabilityClass = c
            .parse()
            .map_err(|e: String| CliError::Precondition(e))?;
        cfg.class = Some(class);
    }
    if let Some(s) = cli.shots {
        cfg.shots = s;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if let Some(f) = &cli.format {
        cfg.formats = f.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(m) = cli.max_qubits {
        cfg.max_qubits = m;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = build_config(cli)?;
    match &cli.command {
        Command::Classify { file, certificate } => {
            let outcome = cmd_classify(file, &cfg, *certificate)?;
            print!("{}", outcome.report);
        }
        Command::Partition { file } => {
            cmd_partition(file, &cfg)?;
        }
        Command::Factorize { file } => {
            cmd_factorize(file, &cfg)?;
        }
        Command::Benchmark { files } => {
            if files.is_empty() {
                return Err(CliError::Precondition("benchmark needs input files".into()));
            }
            cmd_benchmark(files, &cfg)?;
        }
        Command::Simulate { file } => {
            cmd_simulate(file, &cfg)?;
        }
        Command::GraphExport { file } => {
            cmd_graph_export(file, &cfg)?;
        }
    }
    Ok(())
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
