//! Dense statevector simulation.
//!
//! Qubit 0 is the most significant bit of the amplitude index: on `n` qubits,
//! qubit `q` is bit `n - 1 - q`. The dense backend is practical up to about
//! 20 qubits.

mod pauli;
mod sampling;

pub use pauli::{expectation, Observable, PauliString, PauliSum};
pub use sampling::{sampled_expectation, sampled_expectations};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest register the dense backend accepts.
pub const MAX_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    RZZ,
    CZ,
    /// `targets[0]` is the control, `targets[1]` the target.
    CNOT,
    X,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::X => 1,
            GateKind::RZZ | GateKind::CZ | GateKind::CNOT => 2,
        }
    }

    /// Rotations `exp(-i·angle·G/2)` with `G` in {X, Y, Z, Z⊗Z}.
    pub fn is_rotation(self) -> bool {
        matches!(
            self,
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::RZZ
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes. The vector must have length `2^n` and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::input(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::input(format!("state norm² is {norm}, expected 1")));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    #[inline]
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// In-place gate application. Arguments are validated exactly as in
    /// [`apply_gate`].
    pub fn apply(&mut self, kind: GateKind, targets: &[usize], angle: Option<f64>) -> Result<()> {
        validate_gate(self.n_qubits, kind, targets, angle)?;
        let theta = angle.unwrap_or(0.0);
        match kind {
            GateKind::RX => {
                let (s, c) = (theta / 2.0).sin_cos();
                let m = [
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ];
                self.apply_1q(targets[0], m);
            }
            GateKind::RY => {
                let (s, c) = (theta / 2.0).sin_cos();
                let m = [
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ];
                self.apply_1q(targets[0], m);
            }
            GateKind::RZ => {
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                let mask = self.mask(targets[0]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= if i & mask == 0 { lo } else { hi };
                }
            }
            GateKind::RZZ => {
                let even = Complex64::from_polar(1.0, -theta / 2.0);
                let odd = Complex64::from_polar(1.0, theta / 2.0);
                let (ma, mb) = (self.mask(targets[0]), self.mask(targets[1]));
                for (i, a) in self.amps.iter_mut().enumerate() {
                    let parity = ((i & ma) != 0) ^ ((i & mb) != 0);
                    *a *= if parity { odd } else { even };
                }
            }
            GateKind::CZ => {
                let both = self.mask(targets[0]) | self.mask(targets[1]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & both == both {
                        *a = -*a;
                    }
                }
            }
            GateKind::CNOT => {
                let (mc, mt) = (self.mask(targets[0]), self.mask(targets[1]));
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            GateKind::X => {
                let mask = self.mask(targets[0]);
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
        }
        Ok(())
    }

    fn apply_1q(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let mask = self.mask(qubit);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::input("register must have at least one qubit"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capability(format!(
            "{n_qubits} qubits exceeds the dense backend limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub(crate) fn validate_gate(
    n_qubits: usize,
    kind: GateKind,
    targets: &[usize],
    angle: Option<f64>,
) -> Result<()> {
    if targets.len() != kind.arity() {
        return Err(Error::input(format!(
            "{kind} acts on {} qubit(s), got {} target(s)",
            kind.arity(),
            targets.len()
        )));
    }
    if let Some(&q) = targets.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::input(format!(
            "target qubit {q} out of range for {n_qubits} qubits"
        )));
    }
    if targets.len() == 2 && targets[0] == targets[1] {
        return Err(Error::input(format!(
            "{kind} targets must be distinct, got {targets:?}"
        )));
    }
    match (kind.is_rotation(), angle) {
        (true, None) => Err(Error::input(format!("{kind} requires an angle"))),
        (false, Some(_)) => Err(Error::input(format!("{kind} takes no angle"))),
        _ => Ok(()),
    }
}

/// Computational basis state `|bits⟩`; `bits[0]` is qubit 0 (the most
/// significant bit of the index). Accepts `'0'`/`'1'` characters.
pub fn init_basis_state(n_qubits: usize, bits: &str) -> Result<Statevector> {
    if bits.chars().count() != n_qubits {
        return Err(Error::input(format!(
            "bitstring {bits:?} has length {}, expected {n_qubits}",
            bits.chars().count()
        )));
    }
    let mut index = 0usize;
    for ch in bits.chars() {
        index <<= 1;
        match ch {
            '0' => {}
            '1' => index |= 1,
            other => {
                return Err(Error::input(format!(
                    "bitstring {bits:?} contains {other:?}"
                )))
            }
        }
    }
    let mut state = Statevector::zero(n_qubits)?;
    state.amps[0] = Complex64::new(0.0, 0.0);
    state.amps[index] = Complex64::new(1.0, 0.0);
    Ok(state)
}

/// Returns the state after applying one gate; the input is left untouched.
pub fn apply_gate(
    state: &Statevector,
    kind: GateKind,
    targets: &[usize],
    angle: Option<f64>,
) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply(kind, targets, angle)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(state: &Statevector, expected: &[Complex64]) {
        assert_eq!(state.amplitudes().len(), expected.len());
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, e.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, e.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn basis_states_follow_msb_convention() {
        assert_amps(
            &init_basis_state(1, "0").unwrap(),
            &[c(1.0, 0.0), c(0.0, 0.0)],
        );
        let hf = init_basis_state(4, "1100").unwrap();
        for (i, a) in hf.amplitudes().iter().enumerate() {
            assert_eq!(a.re, if i == 12 { 1.0 } else { 0.0 });
        }
        assert_amps(
            &init_basis_state(2, "01").unwrap(),
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
    }

    #[test]
    fn basis_state_rejects_bad_bits() {
        assert!(matches!(init_basis_state(3, "01"), Err(Error::Input(_))));
        assert!(matches!(init_basis_state(2, "0a"), Err(Error::Input(_))));
        assert!(matches!(init_basis_state(0, ""), Err(Error::Input(_))));
        assert!(matches!(
            Statevector::zero(MAX_QUBITS + 1),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn rx_pi_flips_with_phase() {
        let s = apply_gate(&Statevector::zero(1).unwrap(), GateKind::RX, &[0], Some(PI)).unwrap();
        assert_amps(&s, &[c(0.0, 0.0), c(0.0, -1.0)]);
    }

    #[test]
    fn cz_phases_11() {
        let s = init_basis_state(2, "11").unwrap();
        let s = apply_gate(&s, GateKind::CZ, &[0, 1], None).unwrap();
        assert_amps(&s, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn rzz_on_00_is_global_phase() {
        let theta = 0.7;
        let s = apply_gate(
            &Statevector::zero(2).unwrap(),
            GateKind::RZZ,
            &[0, 1],
            Some(theta),
        )
        .unwrap();
        let phase = Complex64::from_polar(1.0, -theta / 2.0);
        assert_amps(&s, &[phase, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn cnot_control_is_first_target() {
        let s = init_basis_state(2, "10").unwrap();
        let s = apply_gate(&s, GateKind::CNOT, &[0, 1], None).unwrap();
        assert_eq!(s, init_basis_state(2, "11").unwrap());
        let s = init_basis_state(2, "01").unwrap();
        let s = apply_gate(&s, GateKind::CNOT, &[0, 1], None).unwrap();
        assert_eq!(s, init_basis_state(2, "01").unwrap());
    }

    #[test]
    fn ry_and_rz_match_closed_forms() {
        let s = apply_gate(
            &Statevector::zero(1).unwrap(),
            GateKind::RY,
            &[0],
            Some(PI / 2.0),
        )
        .unwrap();
        assert_amps(&s, &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]);
        let s = apply_gate(&s, GateKind::RZ, &[0], Some(PI)).unwrap();
        assert_amps(&s, &[c(0.0, -FRAC_1_SQRT_2), c(0.0, FRAC_1_SQRT_2)]);
    }

    #[test]
    fn gate_argument_validation() {
        let s = Statevector::zero(2).unwrap();
        assert!(apply_gate(&s, GateKind::RX, &[2], Some(0.1)).is_err());
        assert!(apply_gate(&s, GateKind::CZ, &[1, 1], None).is_err());
        assert!(apply_gate(&s, GateKind::RX, &[0], None).is_err());
        assert!(apply_gate(&s, GateKind::CZ, &[0, 1], Some(0.3)).is_err());
        assert!(apply_gate(&s, GateKind::RZZ, &[0], Some(0.3)).is_err());
        assert!(apply_gate(&s, GateKind::X, &[0, 1], None).is_err());
    }

    #[test]
    fn from_amplitudes_checks_shape_and_norm() {
        assert!(Statevector::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        assert!(Statevector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        let s = Statevector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert_eq!(s.n_qubits(), 1);
    }

    fn gate_strategy(n: usize) -> impl Strategy<Value = (GateKind, Vec<usize>, Option<f64>)> {
        let kinds = prop_oneof![
            Just(GateKind::RX),
            Just(GateKind::RY),
            Just(GateKind::RZ),
            Just(GateKind::RZZ),
            Just(GateKind::CZ),
            Just(GateKind::CNOT),
            Just(GateKind::X),
        ];
        (kinds, 0..n, 1..n, -PI..PI).prop_map(move |(kind, a, off, angle)| {
            let targets = if kind.arity() == 1 {
                vec![a]
            } else {
                vec![a, (a + off) % n]
            };
            (kind, targets, kind.is_rotation().then_some(angle))
        })
    }

    proptest! {
        #[test]
        fn gates_preserve_norm(gates in prop::collection::vec(gate_strategy(4), 1..40)) {
            let mut s = Statevector::zero(4).unwrap();
            for (kind, targets, angle) in &gates {
                s.apply(*kind, targets, *angle).unwrap();
                prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn inverse_angle_round_trips(
            prep in prop::collection::vec(gate_strategy(3), 0..12),
            (kind, targets, angle) in gate_strategy(3),
        ) {
            let mut s = Statevector::zero(3).unwrap();
            for (k, t, a) in &prep {
                s.apply(*k, t, *a).unwrap();
            }
            let forward = apply_gate(&s, kind, &targets, angle).unwrap();
            // Fixed gates here are all self-inverse.
            let back = apply_gate(&forward, kind, &targets, angle.map(|a| -a)).unwrap();
            for (x, y) in back.amplitudes().iter().zip(s.amplitudes()) {
                prop_assert!((x - y).norm() < 1e-10);
            }
        }
    }
}
