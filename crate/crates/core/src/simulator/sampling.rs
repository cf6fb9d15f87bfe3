//! Finite-shot estimation.
//!
//! Terms are grouped by measurement basis (identity factors are measured in
//! Z). Each group rotates a copy of the state so every factor becomes Z,
//! draws one multinomial histogram of `shots` outcomes, and every term in the
//! group reads its ±1 parity average from that histogram. Identity terms are
//! added exactly.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::{GateKind, Observable, PauliSum, Statevector};
use crate::seed::{self, stream};
use crate::{Error, Result};

/// One measurement setting: per qubit, the axis it is read out along.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Basis(Vec<u8>);

impl Basis {
    fn of(label: &str) -> Self {
        Basis(
            label
                .bytes()
                .map(|b| if b == b'I' { b'Z' } else { b })
                .collect(),
        )
    }

    fn all_z(n: usize) -> Self {
        Basis(vec![b'Z'; n])
    }

    /// Copy of `state` rotated so that measuring Z reads out this basis.
    fn rotate(&self, state: &Statevector) -> Result<Statevector> {
        let mut s = state.clone();
        for (q, axis) in self.0.iter().enumerate() {
            match axis {
                b'X' => s.apply(GateKind::RY, &[q], Some(-FRAC_PI_2))?,
                b'Y' => s.apply(GateKind::RX, &[q], Some(FRAC_PI_2))?,
                _ => {}
            }
        }
        Ok(s)
    }
}

/// Multinomial draw by sequential conditional binomials.
fn histogram<R: Rng>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().sum();
    let last = probs.len() - 1;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == last {
            counts[i] = remaining;
            break;
        }
        let q = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q)
                .expect("binomial parameters are in range")
                .sample(rng)
        };
        counts[i] = k;
        remaining -= k;
        mass -= p;
    }
    counts
}

fn parity_mean(counts: &[u64], support: usize, shots: u64) -> f64 {
    let signed: i64 = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if (i & support).count_ones().is_multiple_of(2) {
                c as i64
            } else {
                -(c as i64)
            }
        })
        .sum();
    signed as f64 / shots as f64
}

/// Shot-based estimates of several observables on one state.
///
/// Observables that share a measurement basis share one histogram, as on
/// hardware where one shot yields all Z outcomes at once. Deterministic for a
/// fixed `seed`.
pub fn sampled_expectations(
    state: &Statevector,
    observables: &[Observable],
    shots: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    if shots == 0 {
        return Err(Error::input("shots must be at least 1"));
    }
    let n = state.n_qubits();
    for obs in observables {
        if obs.n_qubits() != n {
            return Err(Error::input(format!(
                "observable acts on {} qubits, state has {n}",
                obs.n_qubits()
            )));
        }
    }

    // Bases in order of first appearance keep the seed assignment stable.
    let mut bases: Vec<Basis> = Vec::new();
    let mut basis_index = |b: Basis| -> usize {
        match bases.iter().position(|x| *x == b) {
            Some(i) => i,
            None => {
                bases.push(b);
                bases.len() - 1
            }
        }
    };
    enum Plan {
        Projector(usize),
        Terms(Vec<(f64, Option<(usize, usize)>)>),
    }
    let plans: Vec<Plan> = observables
        .iter()
        .map(|obs| match obs {
            Observable::ZeroProjector { .. } => Plan::Projector(basis_index(Basis::all_z(n))),
            Observable::Pauli(sum) => Plan::Terms(
                sum.terms()
                    .iter()
                    .map(|(c, p)| {
                        if p.is_identity() {
                            (*c, None)
                        } else {
                            (
                                *c,
                                Some((basis_index(Basis::of(p.as_str())), p.support_mask())),
                            )
                        }
                    })
                    .collect(),
            ),
        })
        .collect();

    let histograms = bases
        .iter()
        .enumerate()
        .map(|(g, basis)| {
            let rotated = basis.rotate(state)?;
            let mut rng = seed::rng(seed, &[stream::MEASURE_GROUP, g as u64]);
            Ok(histogram(&rotated.probabilities(), shots, &mut rng))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(plans
        .into_iter()
        .map(|plan| match plan {
            Plan::Projector(g) => histograms[g][0] as f64 / shots as f64,
            Plan::Terms(terms) => terms
                .into_iter()
                .map(|(c, m)| match m {
                    None => c,
                    Some((g, support)) => c * parity_mean(&histograms[g], support, shots),
                })
                .sum(),
        })
        .collect())
}

/// Shot-based estimate of `⟨ψ|obs|ψ⟩`; unbiased for [`super::expectation`].
pub fn sampled_expectation(
    state: &Statevector,
    obs: &PauliSum,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    let v = sampled_expectations(state, &[Observable::Pauli(obs.clone())], shots, seed)?;
    Ok(v[0])
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::simulator::{apply_gate, expectation};

    fn plus() -> Statevector {
        apply_gate(
            &Statevector::zero(1).unwrap(),
            GateKind::RY,
            &[0],
            Some(PI / 2.0),
        )
        .unwrap()
    }

    #[test]
    fn eigenstate_has_zero_variance() {
        let s = Statevector::zero(1).unwrap();
        let z = PauliSum::single("Z").unwrap();
        for seed in 0..5 {
            assert_eq!(sampled_expectation(&s, &z, 100, seed).unwrap(), 1.0);
        }
    }

    #[test]
    fn plus_state_z_within_five_standard_errors() {
        // Standard error at 10_000 shots is 0.01; the band is 5σ.
        let z = PauliSum::single("Z").unwrap();
        let s = plus();
        for seed in 0..100 {
            let v = sampled_expectation(&s, &z, 10_000, seed).unwrap();
            assert!(v.abs() <= 0.05, "seed {seed}: {v}");
        }
    }

    #[test]
    fn same_seed_same_estimate() {
        let z = PauliSum::single("Z").unwrap();
        let a = sampled_expectation(&plus(), &z, 500, 42).unwrap();
        let b = sampled_expectation(&plus(), &z, 500, 42).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn x_and_y_eigenstates_read_out_deterministically() {
        // |+⟩ is the +1 eigenstate of X.
        let x = PauliSum::single("X").unwrap();
        assert_eq!(sampled_expectation(&plus(), &x, 50, 3).unwrap(), 1.0);
        // RX(-π/2)|0⟩ = (|0⟩ + i|1⟩)/√2 is the +1 eigenstate of Y.
        let plus_i = apply_gate(
            &Statevector::zero(1).unwrap(),
            GateKind::RX,
            &[0],
            Some(-PI / 2.0),
        )
        .unwrap();
        let y = PauliSum::single("Y").unwrap();
        assert!((expectation(&plus_i, &y).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(sampled_expectation(&plus_i, &y, 50, 3).unwrap(), 1.0);
    }

    #[test]
    fn identity_terms_are_exact_and_shots_must_be_positive() {
        let s = plus();
        let h = PauliSum::from_labels(&[(0.75, "I")]).unwrap();
        assert_eq!(sampled_expectation(&s, &h, 1, 0).unwrap(), 0.75);
        assert!(sampled_expectation(&s, &h, 0, 0).is_err());
        let two = PauliSum::single("ZZ").unwrap();
        assert!(sampled_expectation(&s, &two, 10, 0).is_err());
    }

    #[test]
    fn histogram_conserves_shots() {
        let mut rng = seed::rng(5, &[]);
        let counts = histogram(&[0.1, 0.0, 0.6, 0.3], 1234, &mut rng);
        assert_eq!(counts.iter().sum::<u64>(), 1234);
        assert_eq!(counts[1], 0);
    }

    #[test]
    fn seed_average_converges_to_exact_value() {
        // Mixed-basis Hamiltonian on an entangled state.
        let mut s = Statevector::zero(2).unwrap();
        s.apply(GateKind::RY, &[0], Some(0.9)).unwrap();
        s.apply(GateKind::CNOT, &[0, 1], None).unwrap();
        s.apply(GateKind::RX, &[1], Some(-0.4)).unwrap();
        s.apply(GateKind::RZ, &[0], Some(0.3)).unwrap();
        let h = PauliSum::from_labels(&[
            (0.3, "ZI"),
            (-0.7, "XX"),
            (0.45, "YY"),
            (0.2, "IZ"),
            (-0.1, "II"),
            (0.35, "XY"),
        ])
        .unwrap();
        let exact = expectation(&s, &h).unwrap();
        let shots = 1000u64;
        let runs = 400;
        let mean = (0..runs)
            .map(|seed| sampled_expectation(&s, &h, shots, seed).unwrap())
            .sum::<f64>()
            / runs as f64;
        // |c|-weighted bound on the per-shot standard deviation.
        let sigma: f64 = h.terms().iter().map(|(c, _)| c.abs()).sum();
        let bound = 4.0 * sigma / ((shots * runs) as f64).sqrt();
        assert!(
            (mean - exact).abs() < bound,
            "{mean} vs {exact} (bound {bound})"
        );
    }
}
