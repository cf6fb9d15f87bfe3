//! Experiment plumbing: losses, data and Hamiltonian ingestion, the exact
//! diagonalization oracle, configuration, and the training runner.

pub mod config;
pub mod dataset;
pub mod exact;
pub mod hamiltonian;
pub mod losses;
pub mod record;
pub mod runner;

pub use config::{DatasetConfig, ExperimentConfig, ExperimentKind, Init};
pub use dataset::{load_dataset_csv, Dataset, LabelAlphabet};
pub use exact::{dense_matrix, exact_diag};
pub use hamiltonian::{load_hamiltonian, parse_hamiltonian};
pub use losses::{
    identity_cost, loss_bce, loss_l2, mnist_readout, predict_accuracy, BceLoss, L2Loss, Task,
};
pub use record::{Line, RunSummary, StopReason, TrainRecord, SCHEMA_VERSION};
pub use runner::{run_experiment, vqe_energy};
