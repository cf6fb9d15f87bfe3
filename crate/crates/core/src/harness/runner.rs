//! The training loop shared by every experiment family.
//!
//! Per step: cost and shift-rule gradient (frozen slots skipped), pruning
//! observation, optimizer update under the current freeze mask, re-pinning of
//! frozen slots, one [`TrainRecord`]. The loop stops at the step budget or as
//! soon as every slot is frozen.

use std::f64::consts::PI;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::config::{ExperimentConfig, ExperimentKind, Init};
use super::dataset::{load_dataset_csv, Dataset};
use super::exact::{exact_diag, MAX_EXACT_QUBITS};
use super::hamiltonian::load_hamiltonian;
use super::losses::{predict_accuracy, BceLoss, L2Loss, Task};
use super::record::{Line, RunSummary, StopReason, TrainRecord};
use crate::circuits::ParamCircuit;
use crate::gradients::{
    finite_diff_grad, BatchItem, CostFn, LinearLoss, SampleLoss, SeedContext, FINITE_DIFF_STEP,
};
use crate::optimizers::Optimizer;
use crate::prune::PruneState;
use crate::seed::{self, stream};
use crate::simulator::{
    expectation, init_basis_state, sampled_expectation, Observable, PauliSum, Statevector,
};
use crate::{Error, Result};

/// Default VQE reference state (Hartree-Fock for H2 in the shipped files).
pub const HF_STATE: &str = "1100";

/// Energy `⟨ψ(θ)|H|ψ(θ)⟩` of the circuit applied to `initial`. `shots = 0`
/// is exact.
pub fn vqe_energy(
    circuit: &ParamCircuit,
    params: &[f64],
    hamiltonian: &PauliSum,
    initial: &Statevector,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    if hamiltonian.n_qubits() != circuit.n_qubits() {
        return Err(Error::input(format!(
            "Hamiltonian acts on {} qubits, circuit has {}",
            hamiltonian.n_qubits(),
            circuit.n_qubits()
        )));
    }
    let state = circuit.bind_and_run(params, None, initial)?;
    if shots == 0 {
        expectation(&state, hamiltonian)
    } else {
        sampled_expectation(&state, hamiltonian, shots, seed)
    }
}

struct ClassData {
    train: Dataset,
    val: Dataset,
    task: Task,
    batch_size: Option<usize>,
    epochs: usize,
}

/// Everything fixed for the duration of a run.
struct Problem {
    circuit: ParamCircuit,
    initial: Statevector,
    observables: Vec<Observable>,
    loss: Box<dyn SampleLoss>,
    data: Option<ClassData>,
    hamiltonian: Option<PauliSum>,
}

impl Problem {
    fn build(cfg: &ExperimentConfig) -> Result<Self> {
        let circuit = cfg.ansatz.build()?;
        let n = circuit.n_qubits();
        match cfg.experiment {
            ExperimentKind::Barren => Ok(Self {
                circuit,
                initial: Statevector::zero(n)?,
                observables: vec![Observable::ZeroProjector { n_qubits: n }],
                // 1 − ⟨P_0⟩ = 1 − |⟨0…0|ψ⟩|²
                loss: Box::new(LinearLoss {
                    offset: 1.0,
                    weight: -1.0,
                }),
                data: None,
                hamiltonian: None,
            }),
            ExperimentKind::Vqe => {
                let path = cfg.hamiltonian.as_ref().expect("validated");
                let h = load_hamiltonian(path)?;
                if h.n_qubits() != n {
                    return Err(Error::Config(format!(
                        "{} acts on {} qubits, ansatz has {n}",
                        path.display(),
                        h.n_qubits()
                    )));
                }
                let bits = cfg.initial_state.as_deref().unwrap_or(HF_STATE);
                Ok(Self {
                    circuit,
                    initial: init_basis_state(n, bits)?,
                    observables: vec![h.clone().into()],
                    loss: Box::new(LinearLoss::IDENTITY),
                    data: None,
                    hamiltonian: Some(h),
                })
            }
            ExperimentKind::Classify | ExperimentKind::Gradcheck if cfg.dataset.is_some() => {
                let ds_cfg = cfg.dataset.as_ref().expect("checked");
                let task = cfg.task()?;
                let full = load_dataset_csv(&ds_cfg.path, ds_cfg.labels)?;
                if full.dim() < circuit.n_features() {
                    return Err(Error::Config(format!(
                        "{} has {} features, ansatz reads {}",
                        ds_cfg.path.display(),
                        full.dim(),
                        circuit.n_features()
                    )));
                }
                let (mut train, mut val) = full.split(ds_cfg.validation_fraction, cfg.seed)?;
                if train.is_empty() {
                    return Err(Error::Config("training split is empty".into()));
                }
                if ds_cfg.scale_features {
                    let scaler = train.fit_scaler();
                    train = train.scaled(&scaler);
                    val = val.scaled(&scaler);
                }
                let loss: Box<dyn SampleLoss> = match task {
                    Task::L2 => Box::new(L2Loss),
                    Task::Bce => Box::new(BceLoss),
                };
                Ok(Self {
                    observables: task.observables(n)?,
                    initial: Statevector::zero(n)?,
                    circuit,
                    loss,
                    data: Some(ClassData {
                        train,
                        val,
                        task,
                        batch_size: ds_cfg.batch_size,
                        epochs: ds_cfg.epochs.unwrap_or(1),
                    }),
                    hamiltonian: None,
                })
            }
            ExperimentKind::Classify => Err(Error::Config("classify requires a dataset".into())),
            ExperimentKind::Gradcheck => {
                // Without data, check the plain expectation of Z on every qubit
                // summed, which touches every parameter of every ansatz family.
                if circuit.n_features() > 0 {
                    return Err(Error::Config(format!(
                        "{:?} needs a [dataset] for gradcheck",
                        cfg.ansatz.family
                    )));
                }
                let terms: Vec<(f64, String)> = (0..n)
                    .map(|q| {
                        let label: String =
                            (0..n).map(|i| if i == q { 'Z' } else { 'I' }).collect();
                        (1.0, label)
                    })
                    .collect();
                Ok(Self {
                    circuit,
                    initial: Statevector::zero(n)?,
                    observables: vec![PauliSum::from_labels(&terms)?.into()],
                    loss: Box::new(LinearLoss::IDENTITY),
                    data: None,
                    hamiltonian: None,
                })
            }
        }
    }

    fn total_steps(&self, cfg: &ExperimentConfig) -> usize {
        match &self.data {
            Some(ClassData {
                batch_size: Some(b),
                epochs,
                train,
                ..
            }) => epochs * train.len().div_ceil(*b),
            _ => cfg.steps,
        }
    }

    fn full_batch(&self) -> Vec<BatchItem<'_>> {
        match &self.data {
            None => vec![BatchItem::NONE],
            Some(d) => items(&d.train, 0..d.train.len()),
        }
    }
}

fn items(ds: &Dataset, idx: impl IntoIterator<Item = usize>) -> Vec<BatchItem<'_>> {
    idx.into_iter()
        .map(|i| BatchItem {
            features: Some(ds.features()[i].as_slice()),
            label: ds.labels()[i],
        })
        .collect()
}

/// Mini-batch order: one seeded permutation per epoch.
struct Schedule {
    batch_size: usize,
    per_epoch: usize,
    epoch: Option<usize>,
    order: Vec<usize>,
}

impl Schedule {
    fn new(batch_size: usize, n: usize) -> Self {
        Self {
            batch_size,
            per_epoch: n.div_ceil(batch_size),
            epoch: None,
            order: (0..n).collect(),
        }
    }

    /// Indices for `step`, and whether the step closes its epoch.
    fn batch(&mut self, step: usize, seed: u64) -> (Vec<usize>, bool) {
        let epoch = step / self.per_epoch;
        if self.epoch != Some(epoch) {
            self.order = (0..self.order.len()).collect();
            self.order
                .shuffle(&mut seed::rng(seed, &[stream::SHUFFLE, epoch as u64]));
            self.epoch = Some(epoch);
        }
        let b = step % self.per_epoch;
        let lo = b * self.batch_size;
        let hi = (lo + self.batch_size).min(self.order.len());
        (self.order[lo..hi].to_vec(), b + 1 == self.per_epoch)
    }
}

pub(crate) fn initial_params(init: Init, scale: f64, n: usize, seed: u64, trial: u64) -> Vec<f64> {
    let mut rng = seed::rng(seed, &[stream::INIT, trial]);
    let spread = PI * scale;
    match init {
        Init::Zeros => vec![0.0; n],
        Init::Uniform if spread == 0.0 => vec![0.0; n],
        Init::Uniform => (0..n).map(|_| rng.random_range(-spread..spread)).collect(),
        Init::Normal => {
            let dist = Normal::new(0.0, spread).expect("finite spread");
            (0..n).map(|_| dist.sample(&mut rng)).collect()
        }
    }
}

/// Runs one experiment, streaming every line to `sink`, and returns the
/// summary (which is also sent to `sink` last).
pub fn run_experiment(
    cfg: &ExperimentConfig,
    sink: &mut dyn FnMut(&Line) -> Result<()>,
) -> Result<RunSummary> {
    cfg.validate()?;
    let problem = Problem::build(cfg)?;
    let summary = match cfg.experiment {
        ExperimentKind::Gradcheck => gradcheck(cfg, &problem)?,
        _ => train(cfg, &problem, sink)?,
    };
    sink(&Line::Summary(summary.clone()))?;
    Ok(summary)
}

fn train(
    cfg: &ExperimentConfig,
    problem: &Problem,
    sink: &mut dyn FnMut(&Line) -> Result<()>,
) -> Result<RunSummary> {
    let start = Instant::now();
    let circuit = &problem.circuit;
    let n = circuit.n_params();
    let mut params = initial_params(cfg.init, cfg.init_scale, n, cfg.seed, 0);
    let mut optimizer = Optimizer::new(cfg.optimizer, n)?;
    let mut prune = PruneState::new(n, cfg.prune)?;
    let total_steps = problem.total_steps(cfg);
    let mut schedule = problem
        .data
        .as_ref()
        .and_then(|d| d.batch_size.map(|b| Schedule::new(b, d.train.len())));

    let mut evals = 0u64;
    let mut steps_done = 0u64;
    let mut stop_reason = StopReason::Budget;
    for step in 0..total_steps {
        if prune.all_frozen() {
            stop_reason = StopReason::AllFrozen;
            break;
        }
        let t0 = Instant::now();
        let (batch, epoch_end) = match (&mut schedule, &problem.data) {
            (Some(s), Some(d)) => {
                let (idx, end) = s.batch(step, cfg.seed);
                (items(&d.train, idx), end)
            }
            _ => (problem.full_batch(), step + 1 == total_steps),
        };
        let cost_fn = CostFn::new(
            circuit,
            &problem.initial,
            &problem.observables,
            batch,
            problem.loss.as_ref(),
            cfg.shots,
        )?;
        let seeds = SeedContext {
            master: cfg.seed,
            step: step as u64,
        };
        let (cost, grad) = cost_fn.value_and_grad(&params, prune.frozen(), seeds)?;
        let event = prune.observe(&grad.grad, &params, cfg.seed)?;
        params = optimizer.step(&params, &grad.grad, prune.frozen())?;
        prune.apply_freeze(&mut params);
        evals += cost_fn.circuit_evals();

        let val_accuracy = match &problem.data {
            Some(d) if epoch_end && !d.val.is_empty() => {
                Some(predict_accuracy(circuit, &params, &d.val, d.task)?)
            }
            _ => None,
        };
        if let Some(ev) = event {
            sink(&Line::Prune(ev))?;
        }
        sink(&Line::Step(TrainRecord {
            step: step as u64,
            cost,
            grad_norm: grad.norm(),
            n_frozen: prune.n_frozen(),
            pruning_ratio: prune.pruning_ratio(),
            circuit_evals: evals,
            val_accuracy,
            tau: cfg.record_snapshots.then(|| prune.tau().to_vec()),
            accum: cfg.record_snapshots.then(|| prune.accum().to_vec()),
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        }))?;
        steps_done += 1;
    }
    if stop_reason == StopReason::Budget && prune.config().enabled && prune.all_frozen() {
        stop_reason = StopReason::AllFrozen;
    }

    let final_fn = CostFn::new(
        circuit,
        &problem.initial,
        &problem.observables,
        problem.full_batch(),
        problem.loss.as_ref(),
        cfg.shots,
    )?;
    let final_cost = final_fn.evaluate(
        &params,
        SeedContext {
            master: cfg.seed,
            step: total_steps as u64,
        },
    )?;
    evals += final_fn.circuit_evals();

    let (train_accuracy, final_accuracy) = match &problem.data {
        Some(d) => {
            let train_acc = predict_accuracy(circuit, &params, &d.train, d.task)?;
            let held_out = if d.val.is_empty() {
                train_acc
            } else {
                predict_accuracy(circuit, &params, &d.val, d.task)?
            };
            (Some(train_acc), Some(held_out))
        }
        None => (None, None),
    };
    let (final_energy, exact_energy) = match &problem.hamiltonian {
        Some(h) => {
            let e = vqe_energy(circuit, &params, h, &problem.initial, 0, 0)?;
            let exact = if h.n_qubits() <= MAX_EXACT_QUBITS {
                Some(exact_diag(h)?)
            } else {
                None
            };
            (Some(e), exact)
        }
        None => (None, None),
    };

    Ok(RunSummary {
        experiment: cfg.experiment,
        stop_reason,
        total_steps: steps_done,
        final_cost,
        train_accuracy,
        final_accuracy,
        final_energy,
        exact_energy,
        max_grad_error: None,
        n_params: n,
        n_frozen: prune.n_frozen(),
        final_pruning_ratio: prune.pruning_ratio(),
        total_circuit_evals: evals,
        final_params: params,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Shift rule vs. central differences at random parameters, exact mode.
fn gradcheck(cfg: &ExperimentConfig, problem: &Problem) -> Result<RunSummary> {
    const MAX_ITEMS: usize = 8;
    let start = Instant::now();
    let n = problem.circuit.n_params();
    let batch = match &problem.data {
        Some(d) => items(&d.train, 0..d.train.len().min(MAX_ITEMS)),
        None => problem.full_batch(),
    };
    let cost_fn = CostFn::new(
        &problem.circuit,
        &problem.initial,
        &problem.observables,
        batch,
        problem.loss.as_ref(),
        0,
    )?;
    let mut worst = 0.0f64;
    let mut params = Vec::new();
    let mut last_cost = 0.0;
    for trial in 0..cfg.gradcheck_trials.max(1) as u64 {
        params = initial_params(Init::Uniform, 1.0, n, cfg.seed, trial);
        let (cost, shift) =
            cost_fn.value_and_grad(&params, &vec![false; n], SeedContext::default())?;
        let fd = finite_diff_grad(&cost_fn, &params, FINITE_DIFF_STEP)?;
        for (a, b) in shift.grad.iter().zip(&fd) {
            worst = worst.max((a - b).abs());
        }
        last_cost = cost;
    }
    Ok(RunSummary {
        experiment: cfg.experiment,
        stop_reason: StopReason::Budget,
        total_steps: 0,
        final_cost: last_cost,
        train_accuracy: None,
        final_accuracy: None,
        final_energy: None,
        exact_energy: None,
        max_grad_error: Some(worst),
        n_params: n,
        n_frozen: 0,
        final_pruning_ratio: 0.0,
        total_circuit_evals: cost_fn.circuit_evals(),
        final_params: params,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
