use alloc::format;

use serde::{Deserialize, Serialize};

use super::param::Parameter;
use crate::error::{Error, Result};
use crate::math;

/// Adam hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && self.learning_rate.is_finite()
            && self.beta1 > 0.0
            && self.beta1 < 1.0
            && self.beta2 > 0.0
            && self.beta2 < 1.0
            && self.epsilon > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!("invalid Adam configuration {self:?}")))
        }
    }
}

/// One bias-corrected Adam update over `params`.
///
/// Gradients are left in place; the caller zeroes them. Nothing is modified
/// if any gradient is non-finite.
pub fn adam_step(params: &mut [&mut Parameter], config: &AdamConfig) -> Result<()> {
    config.validate()?;
    if let Some(first) = params.first() {
        let step = first.step_count;
        if params.iter().any(|p| p.step_count != step) {
            return Err(Error::Usage(
                "parameters disagree on the optimizer step count".into(),
            ));
        }
    }
    if let Some(i) = params.iter().position(|p| !p.grad.is_finite()) {
        return Err(Error::Numerical(format!(
            "non-finite gradient in parameter {i}; optimizer step aborted"
        )));
    }
    for p in params.iter_mut() {
        p.step_count += 1;
        let t = p.step_count as f64;
        let bias1 = 1.0 - math::powf(config.beta1, t);
        let bias2 = 1.0 - math::powf(config.beta2, t);
        let grads = p.grad.data();
        let m = p.adam_m.data_mut();
        for (mv, &g) in m.iter_mut().zip(grads) {
            *mv = config.beta1 * *mv + (1.0 - config.beta1) * g;
        }
        let v = p.adam_v.data_mut();
        for (vv, &g) in v.iter_mut().zip(grads) {
            *vv = config.beta2 * *vv + (1.0 - config.beta2) * g * g;
        }
        let m = p.adam_m.data();
        let v = p.adam_v.data();
        for ((x, &mv), &vv) in p.value.data_mut().iter_mut().zip(m).zip(v) {
            let m_hat = mv / bias1;
            let v_hat = vv / bias2;
            *x -= config.learning_rate * m_hat / (math::sqrt(v_hat) + config.epsilon);
        }
    }
    Ok(())
}
