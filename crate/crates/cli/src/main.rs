use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qadaprune::harness::{run_experiment, ExperimentConfig, ExperimentKind, Line};
use qadaprune::prune::PruneConfig;
use qadaprune::Error;

#[derive(Parser)]
#[command(
    name = "qadaprune",
    version,
    about = "Train variational circuits with adaptive parameter pruning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identity-learning cost on a hardware-efficient ansatz.
    Barren(RunArgs),
    /// Binary classification from a CSV dataset.
    Classify(RunArgs),
    /// Ground-state energy of a Pauli-sum Hamiltonian.
    Vqe(RunArgs),
    /// Compare shift-rule gradients against central differences.
    Gradcheck(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON-lines output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Disable pruning regardless of the config file.
    #[arg(long)]
    no_prune: bool,
    /// Suppress the summary on stderr.
    #[arg(long)]
    quiet: bool,
}

impl Command {
    fn split(self) -> (ExperimentKind, RunArgs) {
        match self {
            Command::Barren(a) => (ExperimentKind::Barren, a),
            Command::Classify(a) => (ExperimentKind::Classify, a),
            Command::Vqe(a) => (ExperimentKind::Vqe, a),
            Command::Gradcheck(a) => (ExperimentKind::Gradcheck, a),
        }
    }
}

/// Relative data paths in a config file are taken from the file's directory.
fn rebase(base: &Path, path: &mut PathBuf) {
    if path.is_relative() {
        *path = base.join(&*path);
    }
}

fn load_config(kind: ExperimentKind, args: &RunArgs) -> qadaprune::Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.experiment != kind {
        return Err(Error::Config(format!(
            "{} describes a {:?} experiment, not {kind:?}",
            args.config.display(),
            cfg.experiment
        )));
    }
    let base = args.config.parent().unwrap_or(Path::new("."));
    if let Some(ds) = cfg.dataset.as_mut() {
        rebase(base, &mut ds.path);
    }
    if let Some(h) = cfg.hamiltonian.as_mut() {
        rebase(base, h);
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.no_prune {
        cfg.prune = PruneConfig {
            enabled: false,
            ..cfg.prune
        };
    }
    Ok(cfg)
}

fn run(kind: ExperimentKind, args: &RunArgs) -> qadaprune::Result<()> {
    let cfg = load_config(kind, args)?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Error::io(path, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let out_path = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("<stdout>"));
    let mut sink = |line: &Line| -> qadaprune::Result<()> {
        writeln!(out, "{}", line.to_json()).map_err(|e| Error::io(&out_path, e))
    };
    let result = run_experiment(&cfg, &mut sink);
    // Records written before a failure are kept.
    out.flush().map_err(|e| Error::io(&out_path, e))?;
    let summary = result?;
    if !args.quiet {
        eprintln!(
            "{:?}: {} steps, final cost {:.6}, pruned {}/{} ({:?}), {} circuit evaluations",
            summary.experiment,
            summary.total_steps,
            summary.final_cost,
            summary.n_frozen,
            summary.n_params,
            summary.stop_reason,
            summary.total_circuit_evals
        );
        if let Some(acc) = summary.final_accuracy {
            eprintln!("validation accuracy {acc:.4}");
        }
        if let (Some(e), Some(exact)) = (summary.final_energy, summary.exact_energy) {
            eprintln!(
                "energy {e:.6} Ha, exact {exact:.6} Ha, error {:.2e}",
                e - exact
            );
        }
        if let Some(err) = summary.max_grad_error {
            eprintln!("max |shift - finite difference| = {err:.3e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let (kind, args) = Cli::parse().command.split();
    match run(kind, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
