//! Parameterized circuit IR and the ansatz builders.

use serde::{Deserialize, Serialize};

use crate::simulator::{validate_gate, GateKind, Statevector};
use crate::{Error, Result};

/// Where a gate's angle comes from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Binding {
    /// Constant angle; also used (with `None`) for non-rotation gates.
    Fixed(Option<f64>),
    /// Trainable slot.
    Param(usize),
    /// Component of the per-sample input vector.
    Feature(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitOp {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub binding: Binding,
}

impl CircuitOp {
    pub fn fixed(kind: GateKind, targets: &[usize]) -> Self {
        Self {
            kind,
            targets: targets.to_vec(),
            binding: Binding::Fixed(None),
        }
    }

    pub fn rotation(kind: GateKind, targets: &[usize], angle: f64) -> Self {
        Self {
            kind,
            targets: targets.to_vec(),
            binding: Binding::Fixed(Some(angle)),
        }
    }

    pub fn param(kind: GateKind, targets: &[usize], slot: usize) -> Self {
        Self {
            kind,
            targets: targets.to_vec(),
            binding: Binding::Param(slot),
        }
    }

    pub fn feature(kind: GateKind, targets: &[usize], component: usize) -> Self {
        Self {
            kind,
            targets: targets.to_vec(),
            binding: Binding::Feature(component),
        }
    }
}

/// An ordered gate list over `n_qubits`, some angles bound to trainable
/// slots `0..n_params` (each slot used exactly once).
#[derive(Clone, Debug, PartialEq)]
pub struct ParamCircuit {
    n_qubits: usize,
    ops: Vec<CircuitOp>,
    n_params: usize,
    /// One past the largest feature index, 0 when the circuit has no inputs.
    n_features: usize,
}

impl ParamCircuit {
    pub fn new(n_qubits: usize, ops: Vec<CircuitOp>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::input("circuit needs at least one qubit"));
        }
        let mut slots = Vec::new();
        let mut n_features = 0;
        for (i, op) in ops.iter().enumerate() {
            let probe = match op.binding {
                Binding::Fixed(angle) => angle,
                Binding::Param(_) | Binding::Feature(_) => {
                    if !op.kind.is_rotation() {
                        return Err(Error::input(format!(
                            "op {i}: {} cannot take a variable angle",
                            op.kind
                        )));
                    }
                    Some(0.0)
                }
            };
            validate_gate(n_qubits, op.kind, &op.targets, probe)
                .map_err(|e| Error::input(format!("op {i}: {e}")))?;
            match op.binding {
                Binding::Param(slot) => slots.push(slot),
                Binding::Feature(c) => n_features = n_features.max(c + 1),
                Binding::Fixed(_) => {}
            }
        }
        slots.sort_unstable();
        for (expected, &slot) in slots.iter().enumerate() {
            if slot != expected {
                let msg = if expected > 0 && slots[expected - 1] == slot {
                    format!("parameter slot {slot} is bound twice")
                } else {
                    format!("parameter slots are not contiguous: missing {expected}")
                };
                return Err(Error::input(msg));
            }
        }
        Ok(Self {
            n_qubits,
            ops,
            n_params: slots.len(),
            n_features,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    /// Applies the ops to `initial` with bindings resolved from `params` and
    /// `features`.
    pub fn bind_and_run(
        &self,
        params: &[f64],
        features: Option<&[f64]>,
        initial: &Statevector,
    ) -> Result<Statevector> {
        if params.len() != self.n_params {
            return Err(Error::input(format!(
                "expected {} parameters, got {}",
                self.n_params,
                params.len()
            )));
        }
        match (self.n_features, features) {
            (0, Some(_)) => {
                return Err(Error::input("circuit has no feature bindings"));
            }
            (0, None) => {}
            (need, None) => {
                return Err(Error::input(format!(
                    "circuit needs a feature vector of length {need}"
                )));
            }
            (need, Some(x)) if x.len() < need => {
                return Err(Error::input(format!(
                    "feature vector has length {}, circuit reads component {}",
                    x.len(),
                    need - 1
                )));
            }
            _ => {}
        }
        if initial.n_qubits() != self.n_qubits {
            return Err(Error::input(format!(
                "initial state has {} qubits, circuit has {}",
                initial.n_qubits(),
                self.n_qubits
            )));
        }
        let mut state = initial.clone();
        for op in &self.ops {
            let angle = match op.binding {
                Binding::Fixed(a) => a,
                Binding::Param(slot) => Some(params[slot]),
                Binding::Feature(c) => Some(features.expect("checked above")[c]),
            };
            state.apply(op.kind, &op.targets, angle)?;
        }
        Ok(state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzFamily {
    HardwareEfficient,
    IrisQnn,
    MnistQnn,
    VqeCustom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub family: AnsatzFamily,
    pub n_qubits: usize,
    pub n_layers: usize,
}

impl AnsatzSpec {
    pub fn build(&self) -> Result<ParamCircuit> {
        if self.n_layers == 0 {
            return Err(Error::input("ansatz needs at least one layer"));
        }
        match self.family {
            AnsatzFamily::HardwareEfficient => {
                build_hardware_efficient(self.n_qubits, self.n_layers)
            }
            AnsatzFamily::IrisQnn => {
                if self.n_qubits != 4 {
                    return Err(Error::input("the Iris QNN uses exactly 4 qubits"));
                }
                build_iris_qnn(self.n_layers)
            }
            AnsatzFamily::MnistQnn => {
                if self.n_qubits != 4 {
                    return Err(Error::input("the MNIST QNN uses exactly 4 qubits"));
                }
                build_mnist_qnn(self.n_layers)
            }
            AnsatzFamily::VqeCustom => build_vqe_custom(self.n_qubits, self.n_layers),
        }
    }
}

/// Per layer: RX then RY (both trainable) on every qubit, then a CZ chain
/// (0,1), (1,2), …, (n-2,n-1). `2·n·L` slots.
pub fn build_hardware_efficient(n_qubits: usize, n_layers: usize) -> Result<ParamCircuit> {
    if n_qubits < 2 {
        return Err(Error::input(
            "hardware-efficient ansatz needs at least 2 qubits",
        ));
    }
    if n_layers == 0 {
        return Err(Error::input("ansatz needs at least one layer"));
    }
    let mut ops = Vec::with_capacity(n_layers * (3 * n_qubits - 1));
    let mut slot = 0;
    for _ in 0..n_layers {
        for q in 0..n_qubits {
            ops.push(CircuitOp::param(GateKind::RX, &[q], slot));
            ops.push(CircuitOp::param(GateKind::RY, &[q], slot + 1));
            slot += 2;
        }
        for q in 0..n_qubits - 1 {
            ops.push(CircuitOp::fixed(GateKind::CZ, &[q, q + 1]));
        }
    }
    ParamCircuit::new(n_qubits, ops)
}

/// Angle embedding RX(x_j) on qubit j, then per layer a trainable RY on each
/// qubit followed by a CNOT chain. `4·L` slots.
///
/// The layer layout is a stand-in: the reference figure for this ansatz gives
/// no gate-level description.
pub fn build_iris_qnn(n_layers: usize) -> Result<ParamCircuit> {
    const N: usize = 4;
    if !(1..=16).contains(&n_layers) {
        return Err(Error::input(format!(
            "Iris QNN supports 1..=16 layers, got {n_layers}"
        )));
    }
    let mut ops: Vec<CircuitOp> = (0..N)
        .map(|q| CircuitOp::feature(GateKind::RX, &[q], q))
        .collect();
    let mut slot = 0;
    for _ in 0..n_layers {
        for q in 0..N {
            ops.push(CircuitOp::param(GateKind::RY, &[q], slot));
            slot += 1;
        }
        for q in 0..N - 1 {
            ops.push(CircuitOp::fixed(GateKind::CNOT, &[q, q + 1]));
        }
    }
    ParamCircuit::new(N, ops)
}

/// 4×4 image classifier. Qubit q encodes pixel row q (row-major features
/// 4q..4q+3) through RY, RX, RZ, RY; each layer is an RZZ chain followed by
/// RY on every qubit. `7·L` slots.
pub fn build_mnist_qnn(n_layers: usize) -> Result<ParamCircuit> {
    const N: usize = 4;
    if n_layers == 0 {
        return Err(Error::input("ansatz needs at least one layer"));
    }
    let mut ops = Vec::new();
    for q in 0..N {
        for (j, kind) in [GateKind::RY, GateKind::RX, GateKind::RZ, GateKind::RY]
            .into_iter()
            .enumerate()
        {
            ops.push(CircuitOp::feature(kind, &[q], 4 * q + j));
        }
    }
    let mut slot = 0;
    for _ in 0..n_layers {
        for q in 0..N - 1 {
            ops.push(CircuitOp::param(GateKind::RZZ, &[q, q + 1], slot));
            slot += 1;
        }
        for q in 0..N {
            ops.push(CircuitOp::param(GateKind::RY, &[q], slot));
            slot += 1;
        }
    }
    ParamCircuit::new(N, ops)
}

/// Custom VQE ansatz: hardware-efficient layers, meant to act on the
/// Hartree-Fock reference `|1100⟩`.
pub fn build_vqe_custom(n_qubits: usize, n_layers: usize) -> Result<ParamCircuit> {
    build_hardware_efficient(n_qubits, n_layers)
}
