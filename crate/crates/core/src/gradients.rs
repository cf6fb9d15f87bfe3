//! Parameter-shift gradients with a central-difference oracle.
//!
//! A [`CostFn`] is a batch of circuit executions (one per data item), a list
//! of observables measured on each output state, and a [`SampleLoss`] that
//! turns those expectations into a scalar. The shift rule differentiates the
//! expectations; the loss layer is chained analytically on top.

use std::f64::consts::FRAC_PI_2;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::circuits::ParamCircuit;
use crate::seed::{self, stream};
use crate::simulator::{sampled_expectations, Observable, Statevector};
use crate::{Error, Result};

/// `∂f/∂θ = multiplier · (f(θ + shift) − f(θ − shift))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftRule {
    pub shift: f64,
    pub multiplier: f64,
}

impl Default for ShiftRule {
    /// Exact for every rotation in the gate set (generators with eigenvalues ±1/2).
    fn default() -> Self {
        Self {
            shift: FRAC_PI_2,
            multiplier: 0.5,
        }
    }
}

/// Maps the expectations measured for one data item to that item's loss.
pub trait SampleLoss: Sync {
    fn value(&self, expectations: &[f64], label: f64) -> f64;

    /// `∂loss/∂expectation_q` for every observable `q`.
    fn derivative(&self, expectations: &[f64], label: f64) -> Vec<f64>;

    /// Factor applied to the sum of per-item losses.
    fn batch_weight(&self, _batch_len: usize) -> f64 {
        1.0
    }
}

/// `offset + weight · ⟨O_0⟩`: plain expectation costs (VQE energy, the
/// identity-learning cost `1 − ⟨P_0⟩`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearLoss {
    pub offset: f64,
    pub weight: f64,
}

impl LinearLoss {
    pub const IDENTITY: LinearLoss = LinearLoss {
        offset: 0.0,
        weight: 1.0,
    };
}

impl SampleLoss for LinearLoss {
    fn value(&self, e: &[f64], _label: f64) -> f64 {
        self.offset + self.weight * e[0]
    }

    fn derivative(&self, e: &[f64], _label: f64) -> Vec<f64> {
        let mut d = vec![0.0; e.len()];
        d[0] = self.weight;
        d
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BatchItem<'a> {
    pub features: Option<&'a [f64]>,
    pub label: f64,
}

impl BatchItem<'_> {
    pub const NONE: BatchItem<'static> = BatchItem {
        features: None,
        label: 0.0,
    };
}

/// Seed coordinates for one optimizer step. Every circuit execution inside
/// the step derives its own seed from these plus (item, slot, shift sign).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SeedContext {
    pub master: u64,
    pub step: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradResult {
    pub grad: Vec<f64>,
    /// Circuit executions spent on shifted evaluations:
    /// `2 · unfrozen · batch_len`.
    pub evals_used: u64,
}

impl GradResult {
    /// L2 norm over all components (frozen ones are zero).
    pub fn norm(&self) -> f64 {
        self.grad.iter().map(|g| g * g).sum::<f64>().sqrt()
    }
}

pub struct CostFn<'a> {
    circuit: &'a ParamCircuit,
    initial: &'a Statevector,
    observables: &'a [Observable],
    batch: Vec<BatchItem<'a>>,
    loss: &'a dyn SampleLoss,
    /// 0 means exact expectations.
    shots: u64,
    rule: ShiftRule,
    evals: AtomicU64,
}

// Slot coordinate used for unshifted executions.
const CENTER: u64 = u64::MAX;

impl<'a> CostFn<'a> {
    pub fn new(
        circuit: &'a ParamCircuit,
        initial: &'a Statevector,
        observables: &'a [Observable],
        batch: Vec<BatchItem<'a>>,
        loss: &'a dyn SampleLoss,
        shots: u64,
    ) -> Result<Self> {
        if observables.is_empty() {
            return Err(Error::input("cost needs at least one observable"));
        }
        if batch.is_empty() {
            return Err(Error::input("cost needs at least one batch item"));
        }
        if let Some(o) = observables
            .iter()
            .find(|o| o.n_qubits() != circuit.n_qubits())
        {
            return Err(Error::input(format!(
                "observable acts on {} qubits, circuit has {}",
                o.n_qubits(),
                circuit.n_qubits()
            )));
        }
        Ok(Self {
            circuit,
            initial,
            observables,
            batch,
            loss,
            shots,
            rule: ShiftRule::default(),
            evals: AtomicU64::new(0),
        })
    }

    /// Single-execution expectation cost (no data).
    pub fn expectation(
        circuit: &'a ParamCircuit,
        initial: &'a Statevector,
        observables: &'a [Observable],
        loss: &'a dyn SampleLoss,
        shots: u64,
    ) -> Result<Self> {
        Self::new(
            circuit,
            initial,
            observables,
            vec![BatchItem::NONE],
            loss,
            shots,
        )
    }

    pub fn with_rule(mut self, rule: ShiftRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn n_params(&self) -> usize {
        self.circuit.n_params()
    }

    pub fn batch_len(&self) -> usize {
        self.batch.len()
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Circuit executions performed so far through this cost.
    pub fn circuit_evals(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    fn run(
        &self,
        params: &[f64],
        item: usize,
        seeds: SeedContext,
        slot: u64,
        sign: u64,
    ) -> Result<Vec<f64>> {
        let state = self
            .circuit
            .bind_and_run(params, self.batch[item].features, self.initial)?;
        self.evals.fetch_add(1, Ordering::Relaxed);
        if self.shots == 0 {
            self.observables
                .iter()
                .map(|o| o.expectation(&state))
                .collect()
        } else {
            let tag = if slot == CENTER {
                stream::COST
            } else {
                stream::SHIFT
            };
            let s = seed::derive(seeds.master, &[tag, seeds.step, item as u64, slot, sign]);
            sampled_expectations(&state, self.observables, self.shots, s)
        }
    }

    fn center(&self, params: &[f64], seeds: SeedContext) -> Result<Vec<Vec<f64>>> {
        (0..self.batch.len())
            .into_par_iter()
            .map(|i| self.run(params, i, seeds, CENTER, 0))
            .collect()
    }

    fn reduce(&self, expectations: &[Vec<f64>]) -> Result<f64> {
        let total: f64 = expectations
            .iter()
            .zip(&self.batch)
            .map(|(e, item)| self.loss.value(e, item.label))
            .sum();
        let cost = total * self.loss.batch_weight(self.batch.len());
        if cost.is_finite() {
            Ok(cost)
        } else {
            Err(Error::Numeric {
                slot: None,
                value: cost,
            })
        }
    }

    pub fn evaluate(&self, params: &[f64], seeds: SeedContext) -> Result<f64> {
        let e = self.center(params, seeds)?;
        self.reduce(&e)
    }

    /// Cost at `params` and its shift-rule gradient. Frozen slots get an
    /// exact zero and cost no executions.
    pub fn value_and_grad(
        &self,
        params: &[f64],
        frozen: &[bool],
        seeds: SeedContext,
    ) -> Result<(f64, GradResult)> {
        if frozen.len() != params.len() {
            return Err(Error::input(format!(
                "freeze mask has length {}, parameters {}",
                frozen.len(),
                params.len()
            )));
        }
        if params.len() != self.n_params() {
            return Err(Error::input(format!(
                "expected {} parameters, got {}",
                self.n_params(),
                params.len()
            )));
        }
        let center = self.center(params, seeds)?;
        let cost = self.reduce(&center)?;
        let dloss: Vec<Vec<f64>> = center
            .iter()
            .zip(&self.batch)
            .map(|(e, item)| self.loss.derivative(e, item.label))
            .collect();
        let weight = self.loss.batch_weight(self.batch.len());

        let grad = (0..params.len())
            .into_par_iter()
            .map(|k| -> Result<f64> {
                if frozen[k] {
                    return Ok(0.0);
                }
                let mut plus = params.to_vec();
                let mut minus = params.to_vec();
                plus[k] += self.rule.shift;
                minus[k] -= self.rule.shift;
                let mut g = 0.0;
                for (i, dl) in dloss.iter().enumerate() {
                    let ep = self.run(&plus, i, seeds, k as u64, 1)?;
                    let em = self.run(&minus, i, seeds, k as u64, 2)?;
                    for ((p, m), d) in ep.iter().zip(&em).zip(dl) {
                        g += d * self.rule.multiplier * (p - m);
                    }
                }
                let g = g * weight;
                if g.is_finite() {
                    Ok(g)
                } else {
                    Err(Error::Numeric {
                        slot: Some(k),
                        value: g,
                    })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        let unfrozen = frozen.iter().filter(|f| !**f).count() as u64;
        Ok((
            cost,
            GradResult {
                grad,
                evals_used: 2 * unfrozen * self.batch.len() as u64,
            },
        ))
    }
}

/// Shift-rule gradient of `cost` at `params`.
pub fn param_shift_grad(
    cost: &CostFn<'_>,
    params: &[f64],
    frozen: &[bool],
    seeds: SeedContext,
) -> Result<GradResult> {
    cost.value_and_grad(params, frozen, seeds).map(|(_, g)| g)
}

/// Central differences `(C(θ + h e_k) − C(θ − h e_k)) / 2h`.
pub fn finite_diff_grad(cost: &CostFn<'_>, params: &[f64], h: f64) -> Result<Vec<f64>> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::input(format!("step h must be positive, got {h}")));
    }
    let seeds = SeedContext::default();
    (0..params.len())
        .map(|k| {
            let mut p = params.to_vec();
            p[k] = params[k] + h;
            let up = cost.evaluate(&p, seeds)?;
            p[k] = params[k] - h;
            let down = cost.evaluate(&p, seeds)?;
            let g = (up - down) / (2.0 * h);
            if g.is_finite() {
                Ok(g)
            } else {
                Err(Error::Numeric {
                    slot: Some(k),
                    value: g,
                })
            }
        })
        .collect()
}

/// Default oracle step.
pub const FINITE_DIFF_STEP: f64 = 1e-5;
