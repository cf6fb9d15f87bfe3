//! Experiment configuration, read from TOML.
//!
//! ```toml
//! experiment = "classify"
//! seed = 3
//! steps = 100
//! shots = 1000
//! init = "uniform"
//!
//! [ansatz]
//! family = "iris_qnn"
//! n_qubits = 4
//! n_layers = 4
//!
//! [optimizer]
//! kind = "rmsprop"
//! learning_rate = 0.1
//!
//! [prune]
//! window = 5
//!
//! [dataset]
//! path = "data/iris_binary.csv"
//! labels = "pm1"
//! ```
//!
//! [`ExperimentConfig::load`] leaves relative paths untouched; the command-line
//! runner resolves them against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::dataset::LabelAlphabet;
use super::losses::Task;
use crate::circuits::{AnsatzFamily, AnsatzSpec};
use crate::optimizers::OptimizerConfig;
use crate::prune::PruneConfig;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    /// Identity learning on the hardware-efficient ansatz.
    Barren,
    Classify,
    Vqe,
    /// Shift-rule vs. finite-difference comparison at random parameters.
    Gradcheck,
}

/// Parameter initialization; `init_scale` multiplies the spread.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    /// `Unif(−π·s, π·s)`.
    Uniform,
    /// `N(0, (π·s)²)`, i.e. standard deviation π·s.
    Normal,
    Zeros,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    pub labels: LabelAlphabet,
    #[serde(default = "defaults::validation_fraction")]
    pub validation_fraction: f64,
    /// Mini-batch size; absent means full-batch steps.
    #[serde(default)]
    pub batch_size: Option<usize>,
    /// Epoch count in mini-batch mode (replaces `steps`).
    #[serde(default)]
    pub epochs: Option<usize>,
    /// Min-max scale each feature to `[0, π]` using training-set ranges.
    #[serde(default)]
    pub scale_features: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub ansatz: AnsatzSpec,
    pub optimizer: OptimizerConfig,
    pub prune: PruneConfig,
    /// 0 means exact expectations.
    #[serde(default)]
    pub shots: u64,
    #[serde(default = "defaults::steps")]
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::init")]
    pub init: Init,
    #[serde(default = "defaults::init_scale")]
    pub init_scale: f64,
    /// Defaults from the ansatz family: `l2` for the Iris QNN, `bce` for the
    /// MNIST QNN.
    #[serde(default)]
    pub task: Option<Task>,
    #[serde(default)]
    pub dataset: Option<DatasetConfig>,
    #[serde(default)]
    pub hamiltonian: Option<PathBuf>,
    /// Basis state the VQE circuit acts on; defaults to `1100`.
    #[serde(default)]
    pub initial_state: Option<String>,
    /// Include τ and accumulator vectors in every step record.
    #[serde(default)]
    pub record_snapshots: bool,
    /// Random parameter draws for `gradcheck`.
    #[serde(default = "defaults::gradcheck_trials")]
    pub gradcheck_trials: usize,
}

mod defaults {
    use super::Init;

    pub fn validation_fraction() -> f64 {
        0.3
    }
    pub fn steps() -> usize {
        100
    }
    pub fn init() -> Init {
        Init::Uniform
    }
    pub fn init_scale() -> f64 {
        1.0
    }
    pub fn gradcheck_trials() -> usize {
        5
    }
}

impl ExperimentConfig {
    pub fn new(
        experiment: ExperimentKind,
        ansatz: AnsatzSpec,
        optimizer: OptimizerConfig,
        prune: PruneConfig,
    ) -> Self {
        Self {
            experiment,
            ansatz,
            optimizer,
            prune,
            shots: 0,
            steps: defaults::steps(),
            seed: 0,
            init: defaults::init(),
            init_scale: defaults::init_scale(),
            task: None,
            dataset: None,
            hamiltonian: None,
            initial_state: None,
            record_snapshots: false,
            gradcheck_trials: defaults::gradcheck_trials(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn task(&self) -> Result<Task> {
        match (self.task, self.ansatz.family) {
            (Some(t), _) => Ok(t),
            (None, AnsatzFamily::IrisQnn) => Ok(Task::L2),
            (None, AnsatzFamily::MnistQnn) => Ok(Task::Bce),
            (None, family) => Err(Error::Config(format!(
                "classification needs a data ansatz, got {family:?}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.optimizer.validate()?;
        self.prune.validate()?;
        self.ansatz.build()?;
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return Err(Error::Config("init_scale must be non-negative".into()));
        }
        match self.experiment {
            ExperimentKind::Barren => {
                if self.ansatz.family != AnsatzFamily::HardwareEfficient {
                    return Err(Error::Config(
                        "barren experiments use the hardware_efficient ansatz".into(),
                    ));
                }
            }
            ExperimentKind::Vqe => {
                if self.hamiltonian.is_none() {
                    return Err(Error::Config("vqe requires `hamiltonian`".into()));
                }
            }
            ExperimentKind::Classify => {
                let ds = self
                    .dataset
                    .as_ref()
                    .ok_or_else(|| Error::Config("classify requires a [dataset] table".into()))?;
                let task = self.task()?;
                match (task, ds.labels) {
                    (Task::L2, LabelAlphabet::PlusMinusOne)
                    | (Task::Bce, LabelAlphabet::ZeroOne) => {}
                    _ => {
                        return Err(Error::Config(format!(
                            "{task:?} task expects {} labels",
                            if task == Task::L2 { "pm1" } else { "01" }
                        )))
                    }
                }
                if task == Task::Bce && self.ansatz.n_qubits != 4 {
                    return Err(Error::Config("bce readout needs 4 qubits".into()));
                }
                if ds.batch_size == Some(0) {
                    return Err(Error::Config("batch_size must be at least 1".into()));
                }
                if ds.batch_size.is_some() != ds.epochs.is_some() {
                    return Err(Error::Config(
                        "batch_size and epochs must be given together".into(),
                    ));
                }
            }
            ExperimentKind::Gradcheck => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizers::OptimizerKind;

    const IRIS: &str = r#"
experiment = "classify"
seed = 3
shots = 1000
[ansatz]
family = "iris_qnn"
n_qubits = 4
n_layers = 4
[optimizer]
kind = "rmsprop"
learning_rate = 0.1
[prune]
window = 5
[dataset]
path = "data/iris_binary.csv"
labels = "pm1"
"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = ExperimentConfig::from_toml(IRIS).unwrap();
        assert_eq!(cfg.optimizer.kind, OptimizerKind::Rmsprop);
        assert_eq!(cfg.optimizer.rmsprop_decay, 0.9);
        assert!(cfg.prune.enabled);
        assert_eq!(cfg.prune.k, None);
        assert_eq!(cfg.steps, 100);
        assert_eq!(cfg.init, Init::Uniform);
        assert_eq!(cfg.task().unwrap(), Task::L2);
        assert_eq!(cfg.dataset.as_ref().unwrap().validation_fraction, 0.3);
    }

    #[test]
    fn rejects_inconsistent_configs() {
        let wrong_labels = IRIS.replace("\"pm1\"", "\"01\"");
        assert!(ExperimentConfig::from_toml(&wrong_labels).is_err());
        let no_data = IRIS.split("[dataset]").next().unwrap().to_string();
        assert!(ExperimentConfig::from_toml(&no_data).is_err());
        let unknown = format!("bogus = 1\n{IRIS}");
        assert!(ExperimentConfig::from_toml(&unknown).is_err());
        let vqe = IRIS.replace("\"classify\"", "\"vqe\"");
        assert!(ExperimentConfig::from_toml(&vqe).is_err());
        let zero_window = IRIS.replace("window = 5", "window = 0");
        assert!(ExperimentConfig::from_toml(&zero_window).is_err());
    }
}
