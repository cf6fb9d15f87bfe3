//! Coordinate-wise first-order optimizers with freeze masks.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Gd,
    Rmsprop,
    Adam,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub kind: OptimizerKind,
    pub learning_rate: f64,
    #[serde(default = "defaults::rmsprop_decay")]
    pub rmsprop_decay: f64,
    #[serde(default = "defaults::beta1")]
    pub adam_beta1: f64,
    #[serde(default = "defaults::beta2")]
    pub adam_beta2: f64,
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
}

mod defaults {
    pub fn rmsprop_decay() -> f64 {
        0.9
    }
    pub fn beta1() -> f64 {
        0.9
    }
    pub fn beta2() -> f64 {
        0.999
    }
    pub fn epsilon() -> f64 {
        1e-8
    }
}

impl OptimizerConfig {
    pub fn new(kind: OptimizerKind, learning_rate: f64) -> Self {
        Self {
            kind,
            learning_rate,
            rmsprop_decay: defaults::rmsprop_decay(),
            adam_beta1: defaults::beta1(),
            adam_beta2: defaults::beta2(),
            epsilon: defaults::epsilon(),
        }
    }

    pub fn gd(learning_rate: f64) -> Self {
        Self::new(OptimizerKind::Gd, learning_rate)
    }

    pub fn rmsprop(learning_rate: f64) -> Self {
        Self::new(OptimizerKind::Rmsprop, learning_rate)
    }

    pub fn adam(learning_rate: f64) -> Self {
        Self::new(OptimizerKind::Adam, learning_rate)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        let unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        unit("rmsprop_decay", self.rmsprop_decay)?;
        unit("adam_beta1", self.adam_beta1)?;
        unit("adam_beta2", self.adam_beta2)?;
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::Config("epsilon must be non-negative".into()));
        }
        Ok(())
    }
}

/// Per-slot accumulators plus the step counter.
#[derive(Clone, Debug, PartialEq)]
pub struct Optimizer {
    config: OptimizerConfig,
    /// Adam first moment.
    m: Vec<f64>,
    /// Adam second moment / RMSProp mean square.
    v: Vec<f64>,
    t: u64,
}

impl Optimizer {
    pub fn new(config: OptimizerConfig, n_params: usize) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            t: 0,
        })
    }

    pub fn config(&self) -> &OptimizerConfig {
        &self.config
    }

    pub fn steps_taken(&self) -> u64 {
        self.t
    }

    /// One update. Frozen slots are copied bit-for-bit and their accumulators
    /// are left untouched.
    pub fn step(&mut self, params: &[f64], grad: &[f64], frozen: &[bool]) -> Result<Vec<f64>> {
        let n = self.m.len();
        if params.len() != n || grad.len() != n || frozen.len() != n {
            return Err(Error::input(format!(
                "optimizer holds {n} slots; got params {}, grad {}, mask {}",
                params.len(),
                grad.len(),
                frozen.len()
            )));
        }
        if let Some(k) = grad.iter().position(|g| !g.is_finite()) {
            return Err(Error::Numeric {
                slot: Some(k),
                value: grad[k],
            });
        }
        self.t += 1;
        let c = self.config;
        let mut out = params.to_vec();
        match c.kind {
            OptimizerKind::Gd => {
                for k in (0..n).filter(|&k| !frozen[k]) {
                    out[k] -= c.learning_rate * grad[k];
                }
            }
            OptimizerKind::Rmsprop => {
                for k in (0..n).filter(|&k| !frozen[k]) {
                    let g = grad[k];
                    self.v[k] = c.rmsprop_decay * self.v[k] + (1.0 - c.rmsprop_decay) * g * g;
                    out[k] -= c.learning_rate * g / (self.v[k].sqrt() + c.epsilon);
                }
            }
            OptimizerKind::Adam => {
                let t = self.t as i32;
                let bias1 = 1.0 - c.adam_beta1.powi(t);
                let bias2 = 1.0 - c.adam_beta2.powi(t);
                for k in (0..n).filter(|&k| !frozen[k]) {
                    let g = grad[k];
                    self.m[k] = c.adam_beta1 * self.m[k] + (1.0 - c.adam_beta1) * g;
                    self.v[k] = c.adam_beta2 * self.v[k] + (1.0 - c.adam_beta2) * g * g;
                    let m_hat = self.m[k] / bias1;
                    let v_hat = self.v[k] / bias2;
                    out[k] -= c.learning_rate * m_hat / (v_hat.sqrt() + c.epsilon);
                }
            }
        }
        Ok(out)
    }
}
