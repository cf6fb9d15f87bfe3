#![allow(dead_code)]

use std::path::PathBuf;

use qadaprune::circuits::{AnsatzFamily, AnsatzSpec};
use qadaprune::harness::{
    run_experiment, DatasetConfig, ExperimentConfig, ExperimentKind, Init, LabelAlphabet, Line,
    RunSummary, Task, TrainRecord,
};
use qadaprune::optimizers::OptimizerConfig;
use qadaprune::prune::{PruneConfig, PruneEvent};

pub fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

pub fn ansatz(family: AnsatzFamily, n_qubits: usize, n_layers: usize) -> AnsatzSpec {
    AnsatzSpec {
        family,
        n_qubits,
        n_layers,
    }
}

pub fn barren(n_qubits: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        ExperimentKind::Barren,
        ansatz(AnsatzFamily::HardwareEfficient, n_qubits, 2),
        OptimizerConfig::gd(0.2),
        PruneConfig::new(5),
    );
    cfg.steps = 200;
    cfg.init = Init::Uniform;
    cfg.seed = seed;
    cfg
}

pub fn iris(n_layers: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        ExperimentKind::Classify,
        ansatz(AnsatzFamily::IrisQnn, 4, n_layers),
        OptimizerConfig::rmsprop(0.1),
        PruneConfig::new(5),
    );
    cfg.steps = 100;
    cfg.shots = 1000;
    cfg.seed = seed;
    cfg.task = Some(Task::L2);
    cfg.dataset = Some(DatasetConfig {
        path: data("iris_binary.csv"),
        labels: LabelAlphabet::PlusMinusOne,
        validation_fraction: 0.3,
        batch_size: None,
        epochs: None,
        scale_features: true,
    });
    cfg
}

pub fn vqe_gd(seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        ExperimentKind::Vqe,
        ansatz(AnsatzFamily::VqeCustom, 4, 2),
        OptimizerConfig::gd(0.5),
        PruneConfig::new(5),
    );
    cfg.steps = 40;
    cfg.init = Init::Normal;
    cfg.seed = seed;
    cfg.hamiltonian = Some(data("h2/h2_0.7414.txt"));
    cfg.initial_state = Some("1100".into());
    cfg
}

pub fn vqe_adam(seed: u64) -> ExperimentConfig {
    let mut cfg = vqe_gd(seed);
    cfg.optimizer = OptimizerConfig::adam(1e-3);
    cfg.steps = 500;
    cfg.init_scale = 0.1;
    cfg
}

pub fn synthetic(seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        ExperimentKind::Classify,
        ansatz(AnsatzFamily::MnistQnn, 4, 2),
        OptimizerConfig::adam(0.05),
        PruneConfig::new(5),
    );
    cfg.seed = seed;
    cfg.task = Some(Task::Bce);
    cfg.dataset = Some(DatasetConfig {
        path: data("synthetic16.csv"),
        labels: LabelAlphabet::ZeroOne,
        validation_fraction: 0.3,
        batch_size: Some(32),
        epochs: Some(30),
        scale_features: false,
    });
    cfg
}

pub fn without_pruning(cfg: &ExperimentConfig) -> ExperimentConfig {
    let mut c = cfg.clone();
    c.prune.enabled = false;
    c
}

/// Everything a run emits, split by line type.
#[derive(Debug, Default)]
pub struct Run {
    pub steps: Vec<TrainRecord>,
    pub events: Vec<PruneEvent>,
    pub summary: Option<RunSummary>,
}

impl Run {
    pub fn summary(&self) -> &RunSummary {
        self.summary.as_ref().expect("run finished")
    }
}

pub fn run(cfg: &ExperimentConfig) -> Run {
    let mut out = Run::default();
    let summary = run_experiment(cfg, &mut |line| {
        match line {
            Line::Step(r) => out.steps.push(r.clone()),
            Line::Prune(e) => out.events.push(e.clone()),
            Line::Summary(_) => {}
        }
        Ok(())
    })
    .expect("experiment runs");
    out.summary = Some(summary);
    out
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}
