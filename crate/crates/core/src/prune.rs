//! Adaptive per-parameter pruning.
//!
//! Every slot `j` carries its own threshold `τ_j`, initialized to `1/n` and
//! shrunk each step by `τ_j ← max(0, τ_j · (1 − |g_j|))`, so slots with large
//! gradients lose their threshold fastest. Between pruning events the state
//! accumulates `Σ |g_j(t+1) − g_j(t)|`, a cheap curvature proxy. Every `w`
//! steps the slots whose accumulated difference is still below their
//! threshold form the saliency list; all of them (or `k` drawn uniformly
//! without replacement) are frozen at their current value, permanently.
//!
//! The state machine runs alongside any optimizer loop:
//!
//! ```text
//! grad  = ∇C(θ)   (frozen slots skipped)
//! event = prune.observe(&grad, &θ, seed)
//! θ     = optimizer.step(θ, grad, prune.frozen())
//! θ     = prune.apply_freeze(θ)
//! ```

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::seed::{self, stream};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruneConfig {
    #[serde(default = "default_enabled")]
    pub enabled: bool,
    /// Steps between pruning events.
    pub window: usize,
    /// Most slots frozen per event; `None` freezes the whole saliency list.
    #[serde(default)]
    pub k: Option<usize>,
}

fn default_enabled() -> bool {
    true
}

impl PruneConfig {
    pub fn new(window: usize) -> Self {
        Self {
            enabled: true,
            window,
            k: None,
        }
    }

    pub fn disabled() -> Self {
        Self {
            enabled: false,
            window: 1,
            k: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window == 0 {
            return Err(Error::Config("prune window must be at least 1".into()));
        }
        if self.k == Some(0) {
            return Err(Error::Config("prune k must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PruneEvent {
    pub step: u64,
    /// Pruning-event index, starting at 1.
    pub kappa: u64,
    pub saliency: Vec<usize>,
    pub frozen_now: Vec<usize>,
    pub tau: Vec<f64>,
    pub accum: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PruneState {
    config: PruneConfig,
    tau: Vec<f64>,
    accum: Vec<f64>,
    last_grad: Vec<f64>,
    frozen: Vec<bool>,
    frozen_values: Vec<f64>,
    kappa: u64,
    t: u64,
}

impl PruneState {
    pub fn new(n_params: usize, config: PruneConfig) -> Result<Self> {
        if n_params == 0 {
            return Err(Error::input("pruning needs at least one parameter"));
        }
        config.validate()?;
        Ok(Self {
            config,
            tau: vec![1.0 / n_params as f64; n_params],
            accum: vec![0.0; n_params],
            last_grad: vec![0.0; n_params],
            frozen: vec![false; n_params],
            frozen_values: vec![0.0; n_params],
            kappa: 0,
            t: 0,
        })
    }

    pub fn config(&self) -> &PruneConfig {
        &self.config
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn accum(&self) -> &[f64] {
        &self.accum
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn frozen_values(&self) -> &[f64] {
        &self.frozen_values
    }

    pub fn n_frozen(&self) -> usize {
        self.frozen.iter().filter(|f| **f).count()
    }

    pub fn all_frozen(&self) -> bool {
        self.frozen.iter().all(|f| *f)
    }

    pub fn kappa(&self) -> u64 {
        self.kappa
    }

    pub fn step(&self) -> u64 {
        self.t
    }

    /// Fraction of slots frozen.
    pub fn pruning_ratio(&self) -> f64 {
        self.n_frozen() as f64 / self.frozen.len() as f64
    }

    /// `τ_j ← max(0, τ_j · (1 − |g_j|))` on unfrozen slots.
    pub fn update_thresholds(&mut self, grad: &[f64]) -> Result<()> {
        self.check_grad(grad)?;
        for ((tau, g), frozen) in self.tau.iter_mut().zip(grad).zip(&self.frozen) {
            if !frozen {
                *tau = (*tau - *tau * g.abs()).max(0.0);
            }
        }
        Ok(())
    }

    fn check_grad(&self, grad: &[f64]) -> Result<()> {
        if grad.len() != self.tau.len() {
            return Err(Error::input(format!(
                "gradient has length {}, pruning state tracks {}",
                grad.len(),
                self.tau.len()
            )));
        }
        if let Some(k) = grad.iter().position(|g| !g.is_finite()) {
            return Err(Error::Numeric {
                slot: Some(k),
                value: grad[k],
            });
        }
        Ok(())
    }

    /// Feeds one optimizer step's gradient. Call once per step, after the
    /// gradient is computed and before the optimizer consumes it. Returns the
    /// event when this step closes a window.
    ///
    /// `seed` is the run's master seed; k-selection draws from a stream
    /// derived from it and the event index.
    pub fn observe(
        &mut self,
        grad: &[f64],
        params: &[f64],
        seed: u64,
    ) -> Result<Option<PruneEvent>> {
        if !self.config.enabled {
            return Ok(None);
        }
        self.check_grad(grad)?;
        if params.len() != self.tau.len() {
            return Err(Error::input(format!(
                "parameter vector has length {}, pruning state tracks {}",
                params.len(),
                self.tau.len()
            )));
        }

        if self.t > 0 {
            for (j, acc) in self.accum.iter_mut().enumerate() {
                if !self.frozen[j] {
                    *acc += (grad[j] - self.last_grad[j]).abs();
                }
            }
        }
        self.last_grad.copy_from_slice(grad);
        self.update_thresholds(grad)?;

        let mut event = None;
        let w = self.config.window as u64;
        if self.t > 0 && self.t.is_multiple_of(w) && !self.all_frozen() {
            let saliency: Vec<usize> = (0..grad.len())
                .filter(|&j| !self.frozen[j] && self.accum[j] < self.tau[j])
                .collect();
            self.kappa += 1;
            let frozen_now = match self.config.k {
                Some(k) if k < saliency.len() => {
                    let mut rng = seed::rng(seed, &[stream::PRUNE, self.kappa]);
                    let mut picked: Vec<usize> = index::sample(&mut rng, saliency.len(), k)
                        .into_iter()
                        .map(|i| saliency[i])
                        .collect();
                    picked.sort_unstable();
                    picked
                }
                _ => saliency.clone(),
            };
            for &j in &frozen_now {
                self.frozen[j] = true;
                self.frozen_values[j] = params[j];
            }
            event = Some(PruneEvent {
                step: self.t,
                kappa: self.kappa,
                saliency,
                frozen_now,
                tau: self.tau.clone(),
                accum: self.accum.clone(),
            });
            self.accum.iter_mut().for_each(|a| *a = 0.0);
            self.last_grad.copy_from_slice(grad);
        }
        self.t += 1;
        Ok(event)
    }

    /// Re-pins frozen slots to their freeze-time values.
    pub fn apply_freeze(&self, params: &mut [f64]) {
        for ((p, frozen), v) in params.iter_mut().zip(&self.frozen).zip(&self.frozen_values) {
            if *frozen {
                *p = *v;
            }
        }
    }
}
