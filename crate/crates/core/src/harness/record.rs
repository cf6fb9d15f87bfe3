//! JSON-lines output. Every line is an object with `"v": 1` and a `"type"`
//! of `step`, `prune` or `summary`.

use serde::{Deserialize, Serialize};

use super::config::ExperimentKind;
use crate::prune::PruneEvent;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainRecord {
    pub step: u64,
    /// Cost at the parameters the gradient was taken at.
    pub cost: f64,
    /// L2 norm of the gradient (frozen slots contribute 0).
    pub grad_norm: f64,
    pub n_frozen: usize,
    pub pruning_ratio: f64,
    /// Cumulative circuit executions, including this step.
    pub circuit_evals: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_accuracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accum: Option<Vec<f64>>,
    pub wall_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Budget,
    /// Every slot froze; nothing left to train.
    AllFrozen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub experiment: ExperimentKind,
    pub stop_reason: StopReason,
    pub total_steps: u64,
    /// Cost at the final parameters.
    pub final_cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_accuracy: Option<f64>,
    /// Held-out accuracy (classification).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_accuracy: Option<f64>,
    /// Exact energy at the final parameters (VQE).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_energy: Option<f64>,
    /// Ground energy from exact diagonalization (VQE).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_energy: Option<f64>,
    /// Largest |shift − finite difference| seen (gradcheck).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_grad_error: Option<f64>,
    pub n_params: usize,
    pub n_frozen: usize,
    pub final_pruning_ratio: f64,
    /// Training executions plus the final cost evaluation.
    pub total_circuit_evals: u64,
    pub final_params: Vec<f64>,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Line {
    Step(TrainRecord),
    Prune(PruneEvent),
    Summary(RunSummary),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    v: u32,
    #[serde(flatten)]
    line: Line,
}

impl Line {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Envelope {
            v: SCHEMA_VERSION,
            line: self.clone(),
        })
        .expect("records serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        let env: Envelope = serde_json::from_str(text)?;
        Ok(env.line)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_line_shape() {
        let rec = TrainRecord {
            step: 3,
            cost: 0.5,
            grad_norm: 0.25,
            n_frozen: 1,
            pruning_ratio: 0.125,
            circuit_evals: 40,
            val_accuracy: None,
            tau: None,
            accum: None,
            wall_ms: 1.5,
        };
        let json = Line::Step(rec.clone()).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["v"], 1);
        assert_eq!(v["type"], "step");
        assert_eq!(v["n_frozen"], 1);
        assert!(v.get("tau").is_none());
        assert_eq!(Line::from_json(&json).unwrap(), Line::Step(rec));
    }

    #[test]
    fn prune_line_round_trips() {
        let ev = PruneEvent {
            step: 5,
            kappa: 1,
            saliency: vec![0, 2],
            frozen_now: vec![2],
            tau: vec![0.1, 0.2, 0.3],
            accum: vec![0.0, 0.5, 0.01],
        };
        let json = Line::Prune(ev.clone()).to_json();
        assert!(json.contains("\"type\":\"prune\""));
        assert_eq!(Line::from_json(&json).unwrap(), Line::Prune(ev));
    }
}
