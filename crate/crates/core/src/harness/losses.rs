//! Task losses and readouts.

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::circuits::ParamCircuit;
use crate::gradients::SampleLoss;
use crate::simulator::{Observable, PauliSum, Statevector};
use crate::Result;

const PROB_FLOOR: f64 = 1e-12;

/// Supervised task: which observables are read and how they are scored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// `⟨Z_0⟩` against ±1 labels, mean absolute residual.
    L2,
    /// `⟨Z_q⟩` on all four qubits, pair-summed into two logits, summed BCE.
    Bce,
}

impl Task {
    pub fn observables(self, n_qubits: usize) -> Result<Vec<Observable>> {
        match self {
            Task::L2 => Ok(vec![PauliSum::z(n_qubits, 0)?.into()]),
            Task::Bce => (0..4)
                .map(|q| Ok(PauliSum::z(n_qubits, q)?.into()))
                .collect(),
        }
    }

    /// Predicted label (in the task's alphabet) from measured expectations.
    pub fn predict(self, expectations: &[f64]) -> f64 {
        match self {
            Task::L2 => {
                if expectations[0] >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Task::Bce => {
                let z = [
                    expectations[0],
                    expectations[1],
                    expectations[2],
                    expectations[3],
                ];
                let p = mnist_readout(z);
                if p[1] > p[0] {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// `|f − y|`: the 2-norm of a scalar residual.
pub fn loss_l2(expectation: f64, label: f64) -> f64 {
    (expectation - label).abs()
}

/// Negative log-likelihood `−[y ln ŷ + (1 − y) ln(1 − ŷ)]` with `ŷ = probs[1]`
/// clamped to `[1e-12, 1 − 1e-12]`.
pub fn loss_bce(probs: [f64; 2], label: f64) -> f64 {
    let p = probs[1].clamp(PROB_FLOOR, 1.0 - PROB_FLOOR);
    -(label * p.ln() + (1.0 - label) * (1.0 - p).ln())
}

/// Two-class probabilities: softmax over `(z0 + z1, z2 + z3)`.
pub fn mnist_readout(z: [f64; 4]) -> [f64; 2] {
    let l0 = z[0] + z[1];
    let l1 = z[2] + z[3];
    // softmax(l0, l1) = (σ(l0 − l1), σ(l1 − l0))
    let p1 = 1.0 / (1.0 + (l0 - l1).exp());
    [1.0 - p1, p1]
}

/// `1 − |⟨0…0|ψ⟩|²`.
pub fn identity_cost(state: &Statevector) -> f64 {
    1.0 - state.amplitudes()[0].norm_sqr()
}

/// Mean absolute residual over the batch.
#[derive(Clone, Copy, Debug, Default)]
pub struct L2Loss;

impl SampleLoss for L2Loss {
    fn value(&self, e: &[f64], label: f64) -> f64 {
        loss_l2(e[0], label)
    }

    fn derivative(&self, e: &[f64], label: f64) -> Vec<f64> {
        let r = e[0] - label;
        // Subgradient 0 at the kink.
        vec![if r > 0.0 {
            1.0
        } else if r < 0.0 {
            -1.0
        } else {
            0.0
        }]
    }

    fn batch_weight(&self, batch_len: usize) -> f64 {
        1.0 / batch_len as f64
    }
}

/// Summed binary cross entropy through [`mnist_readout`].
#[derive(Clone, Copy, Debug, Default)]
pub struct BceLoss;

impl SampleLoss for BceLoss {
    fn value(&self, e: &[f64], label: f64) -> f64 {
        loss_bce(mnist_readout([e[0], e[1], e[2], e[3]]), label)
    }

    fn derivative(&self, e: &[f64], label: f64) -> Vec<f64> {
        let p = mnist_readout([e[0], e[1], e[2], e[3]])[1];
        // ∂L/∂(l1 − l0) = ŷ − y, zero where the clamp is active.
        let slope = if (PROB_FLOOR..=1.0 - PROB_FLOOR).contains(&p) {
            p - label
        } else {
            0.0
        };
        vec![-slope, -slope, slope, slope]
    }
}

/// Fraction of `dataset` classified correctly with exact expectations.
pub fn predict_accuracy(
    circuit: &ParamCircuit,
    params: &[f64],
    dataset: &Dataset,
    task: Task,
) -> Result<f64> {
    if dataset.is_empty() {
        return Ok(0.0);
    }
    let initial = Statevector::zero(circuit.n_qubits())?;
    let observables = task.observables(circuit.n_qubits())?;
    let mut correct = 0usize;
    for (x, &y) in dataset.features().iter().zip(dataset.labels()) {
        let state = circuit.bind_and_run(params, Some(x), &initial)?;
        let e = observables
            .iter()
            .map(|o| o.expectation(&state))
            .collect::<Result<Vec<_>>>()?;
        if task.predict(&e) == y {
            correct += 1;
        }
    }
    Ok(correct as f64 / dataset.len() as f64)
}
