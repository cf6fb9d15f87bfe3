use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::Statevector;
use crate::{Error, Result};

/// A tensor product of single-qubit Paulis, stored as bit masks over the
/// amplitude index (same MSB-first convention as [`Statevector`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    label: String,
    /// Qubits carrying X or Y (bit flips).
    x_mask: usize,
    /// Qubits carrying Z or Y (phase flips).
    z_mask: usize,
    n_y: u32,
}

impl PauliString {
    pub fn new(label: &str) -> Result<Self> {
        let n = label.len();
        if n == 0 {
            return Err(Error::input("empty Pauli string"));
        }
        let (mut x_mask, mut z_mask, mut n_y) = (0usize, 0usize, 0u32);
        for (q, ch) in label.chars().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match ch {
                'I' => {}
                'X' => x_mask |= bit,
                'Z' => z_mask |= bit,
                'Y' => {
                    x_mask |= bit;
                    z_mask |= bit;
                    n_y += 1;
                }
                other => {
                    return Err(Error::input(format!(
                        "Pauli string {label:?} contains {other:?}"
                    )))
                }
            }
        }
        Ok(Self {
            label: label.to_string(),
            x_mask,
            z_mask,
            n_y,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.label.len()
    }

    pub fn as_str(&self) -> &str {
        &self.label
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// True when the string only contains I and Z.
    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// Qubits with a non-identity factor.
    pub(crate) fn support_mask(&self) -> usize {
        self.x_mask | self.z_mask
    }

    /// Letter acting on `qubit`.
    pub fn letter(&self, qubit: usize) -> char {
        self.label.as_bytes()[qubit] as char
    }

    /// ⟨ψ|P|ψ⟩ via `P|i⟩ = phase(i)·|i ⊕ x⟩`.
    fn expectation(&self, amps: &[Complex64]) -> f64 {
        // i^{n_y}
        let y_phase = match self.n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in amps.iter().enumerate() {
            let sign = if (i & self.z_mask).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            acc += amps[i ^ self.x_mask].conj() * a * sign;
        }
        (acc * y_phase).re
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Weighted sum of Pauli strings with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::input("observable must act on at least one qubit"));
        }
        for (coeff, p) in &terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::input(format!(
                    "Pauli string {p} has length {}, expected {n_qubits}",
                    p.n_qubits()
                )));
            }
            if !coeff.is_finite() {
                return Err(Error::input(format!("coefficient of {p} is not finite")));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    /// Builds a sum from `(coefficient, label)` pairs.
    pub fn from_labels<S: AsRef<str>>(terms: &[(f64, S)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::input("observable has no terms"))?;
        let n = first.1.as_ref().len();
        let parsed = terms
            .iter()
            .map(|(c, s)| Ok((*c, PauliString::new(s.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, parsed)
    }

    /// Single unit-weight term.
    pub fn single(label: &str) -> Result<Self> {
        Self::from_labels(&[(1.0, label)])
    }

    /// `Z` on `qubit` of an `n_qubits` register.
    pub fn z(n_qubits: usize, qubit: usize) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::input(format!(
                "qubit {qubit} out of range for {n_qubits} qubits"
            )));
        }
        let label: String = (0..n_qubits)
            .map(|q| if q == qubit { 'Z' } else { 'I' })
            .collect();
        Self::single(&label)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Sum of coefficients of diagonal terms evaluated on basis index `index`.
    pub fn diagonal_element(&self, index: usize) -> f64 {
        self.terms
            .iter()
            .filter(|(_, p)| p.is_diagonal())
            .map(|(c, p)| {
                if (index & p.z_mask).count_ones().is_multiple_of(2) {
                    *c
                } else {
                    -*c
                }
            })
            .sum()
    }
}

/// Exact expectation `Σ_t c_t ⟨ψ|P_t|ψ⟩`.
pub fn expectation(state: &Statevector, obs: &PauliSum) -> Result<f64> {
    if obs.n_qubits() != state.n_qubits() {
        return Err(Error::input(format!(
            "observable acts on {} qubits, state has {}",
            obs.n_qubits(),
            state.n_qubits()
        )));
    }
    Ok(obs
        .terms()
        .iter()
        .map(|(c, p)| c * p.expectation(state.amplitudes()))
        .sum())
}

/// Anything the gradient engine can measure on a prepared state.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    Pauli(PauliSum),
    /// `|0…0⟩⟨0…0|`, the global observable behind the identity-learning cost.
    ZeroProjector {
        n_qubits: usize,
    },
}

impl Observable {
    pub fn n_qubits(&self) -> usize {
        match self {
            Observable::Pauli(p) => p.n_qubits(),
            Observable::ZeroProjector { n_qubits } => *n_qubits,
        }
    }

    pub fn expectation(&self, state: &Statevector) -> Result<f64> {
        match self {
            Observable::Pauli(p) => expectation(state, p),
            Observable::ZeroProjector { n_qubits } => {
                if *n_qubits != state.n_qubits() {
                    return Err(Error::input(format!(
                        "projector acts on {n_qubits} qubits, state has {}",
                        state.n_qubits()
                    )));
                }
                Ok(state.amplitudes()[0].norm_sqr())
            }
        }
    }
}

impl From<PauliSum> for Observable {
    fn from(p: PauliSum) -> Self {
        Observable::Pauli(p)
    }
}
