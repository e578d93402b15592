//! Stateful wrappers pairing parameters with the forward cache backward needs.

use rand::Rng;

use super::ops;
use super::param::Parameter;
use super::tensor::Tensor;
use crate::error::{Error, Result};

/// 1-D convolution over time with `filters` kernels of `width` frames.
#[derive(Debug, Clone)]
pub struct Conv1d {
    pub kernels: Parameter,
    pub bias: Parameter,
    pub stride: usize,
    cache: Option<Tensor>,
}

impl Conv1d {
    pub fn new<R: Rng + ?Sized>(width: usize, in_channels: usize, filters: usize, rng: &mut R) -> Self {
        Self {
            kernels: Parameter::glorot(
                &[width, in_channels, filters],
                width * in_channels,
                width * filters,
                rng,
            ),
            bias: Parameter::zeros(&[filters]),
            stride: 1,
            cache: None,
        }
    }

    pub fn width(&self) -> usize {
        self.kernels.shape()[0]
    }

    pub fn filters(&self) -> usize {
        self.kernels.shape()[2]
    }

    /// Forward without touching the cache.
    pub fn infer(&self, input: &Tensor) -> Result<Tensor> {
        ops::conv1d_forward(input, &self.kernels.value, &self.bias.value, self.stride)
    }

    pub fn forward(&mut self, input: &Tensor) -> Result<Tensor> {
        let out = self.infer(input)?;
        self.cache = Some(input.clone());
        Ok(out)
    }

    /// Accumulate parameter gradients and return the input gradient.
    pub fn backward(&mut self, upstream: &Tensor) -> Result<Tensor> {
        let input = self
            .cache
            .take()
            .ok_or_else(|| Error::Usage("conv1d backward called without a forward pass".into()))?;
        let g = ops::conv1d_backward(upstream, &input, &self.kernels.value, self.stride)?;
        self.kernels.grad.add_assign(&g.kernels)?;
        self.bias.grad.add_assign(&g.bias)?;
        Ok(g.input)
    }

    pub fn parameters_mut(&mut self) -> [&mut Parameter; 2] {
        [&mut self.kernels, &mut self.bias]
    }

    pub fn parameters(&self) -> [&Parameter; 2] {
        [&self.kernels, &self.bias]
    }
}

/// Fully connected layer on a `1 x N` row.
#[derive(Debug, Clone)]
pub struct Dense {
    pub weights: Parameter,
    pub bias: Parameter,
    cache: Option<Tensor>,
}

impl Dense {
    pub fn new<R: Rng + ?Sized>(inputs: usize, outputs: usize, rng: &mut R) -> Self {
        Self {
            weights: Parameter::glorot(&[inputs, outputs], inputs, outputs, rng),
            bias: Parameter::zeros(&[outputs]),
            cache: None,
        }
    }

    pub fn outputs(&self) -> usize {
        self.weights.shape()[1]
    }

    pub fn infer(&self, input: &Tensor) -> Result<Tensor> {
        ops::dense_forward(input, &self.weights.value, &self.bias.value)
    }

    pub fn forward(&mut self, input: &Tensor) -> Result<Tensor> {
        let out = self.infer(input)?;
        self.cache = Some(input.clone());
        Ok(out)
    }

    pub fn backward(&mut self, upstream: &Tensor) -> Result<Tensor> {
        let input = self
            .cache
            .take()
            .ok_or_else(|| Error::Usage("dense backward called without a forward pass".into()))?;
        let g = ops::dense_backward(upstream, &input, &self.weights.value)?;
        self.weights.grad.add_assign(&g.weights)?;
        self.bias.grad.add_assign(&g.bias)?;
        Ok(g.input)
    }

    pub fn parameters_mut(&mut self) -> [&mut Parameter; 2] {
        [&mut self.weights, &mut self.bias]
    }

    pub fn parameters(&self) -> [&Parameter; 2] {
        [&self.weights, &self.bias]
    }
}
