use alloc::vec::Vec;

use rand::Rng;

use super::tensor::Tensor;
use crate::math;

/// A trainable tensor with its gradient accumulator and Adam state.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub value: Tensor,
    pub grad: Tensor,
    pub(crate) adam_m: Tensor,
    pub(crate) adam_v: Tensor,
    pub(crate) step_count: u64,
}

impl Parameter {
    pub fn new(value: Tensor) -> Self {
        let shape = value.shape().to_vec();
        Self {
            grad: Tensor::zeros(&shape),
            adam_m: Tensor::zeros(&shape),
            adam_v: Tensor::zeros(&shape),
            value,
            step_count: 0,
        }
    }

    pub fn zeros(shape: &[usize]) -> Self {
        Self::new(Tensor::zeros(shape))
    }

    /// Uniform in `±sqrt(6 / (fan_in + fan_out))`.
    pub fn glorot<R: Rng + ?Sized>(shape: &[usize], fan_in: usize, fan_out: usize, rng: &mut R) -> Self {
        let limit = math::sqrt(6.0 / (fan_in + fan_out) as f64);
        let len: usize = shape.iter().product();
        let data: Vec<f64> = (0..len).map(|_| rng.gen_range(-limit..limit)).collect();
        Self::new(Tensor::from_vec(shape, data).expect("glorot shape is consistent"))
    }

    pub fn shape(&self) -> &[usize] {
        self.value.shape()
    }

    pub fn zero_grad(&mut self) {
        self.grad.fill(0.0);
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// First and second Adam moment estimates.
    pub fn moments(&self) -> (&Tensor, &Tensor) {
        (&self.adam_m, &self.adam_v)
    }

    /// Replace the value, resetting gradient and optimizer state.
    pub fn reset_value(&mut self, value: Tensor) {
        *self = Self::new(value);
    }
}
