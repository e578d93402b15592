//! Central-difference gradient checking.

use alloc::vec::Vec;

use super::layers::{Conv1d, Dense};
use super::ops;
use super::param::Parameter;
use super::tensor::Tensor;
use crate::error::Result;

/// A computation ending in a scalar whose parameters can be perturbed.
pub trait GradFragment {
    fn param_count(&self) -> usize;
    fn param_mut(&mut self, index: usize) -> &mut Parameter;
    /// Scalar output at the current parameter values.
    fn loss(&self) -> Result<f64>;
    /// Zero all gradients, then compute the scalar and fill in gradients.
    fn loss_and_grad(&mut self) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamCheck {
    pub index: usize,
    pub len: usize,
    pub max_abs_diff: f64,
    /// `max|analytic - numeric| / max(max|analytic|, max|numeric|)`, zero when
    /// both gradients vanish.
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradCheckReport {
    pub params: Vec<ParamCheck>,
    pub max_rel_error: f64,
}

impl GradCheckReport {
    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_rel_error < tolerance
    }
}

/// Compare analytic gradients against central differences with step `h`.
///
/// Relative error is normwise per parameter tensor, which stays meaningful
/// when individual entries are many orders of magnitude below the rest.
pub fn grad_check<F: GradFragment + ?Sized>(fragment: &mut F, h: f64) -> Result<GradCheckReport> {
    let count = fragment.param_count();
    if count == 0 {
        return Ok(GradCheckReport::default());
    }
    fragment.loss_and_grad()?;
    let analytic: Vec<Vec<f64>> = (0..count)
        .map(|i| fragment.param_mut(i).grad.data().to_vec())
        .collect();

    let mut report = GradCheckReport::default();
    for (pi, analytic) in analytic.iter().enumerate() {
        let mut max_diff = 0.0f64;
        let mut max_a = 0.0f64;
        let mut max_n = 0.0f64;
        for (j, &a) in analytic.iter().enumerate() {
            let orig = fragment.param_mut(pi).value.data()[j];
            fragment.param_mut(pi).value.data_mut()[j] = orig + h;
            let plus = fragment.loss()?;
            fragment.param_mut(pi).value.data_mut()[j] = orig - h;
            let minus = fragment.loss()?;
            fragment.param_mut(pi).value.data_mut()[j] = orig;
            let numeric = (plus - minus) / (2.0 * h);
            max_diff = max_diff.max((a - numeric).abs());
            max_a = max_a.max(a.abs());
            max_n = max_n.max(numeric.abs());
        }
        let scale = max_a.max(max_n);
        let rel = if scale == 0.0 { 0.0 } else { max_diff / scale };
        report.max_rel_error = report.max_rel_error.max(rel);
        report.params.push(ParamCheck {
            index: pi,
            len: analytic.len(),
            max_abs_diff: max_diff,
            rel_error: rel,
        });
    }
    Ok(report)
}

/// The single layer under test in a [`LayerFragment`].
#[derive(Debug, Clone)]
pub enum LayerKind {
    Conv(Conv1d),
    MaxPool(usize),
    GlobalMaxPool,
    Dense(Dense),
    Relu,
    Sigmoid,
}

/// One layer followed by a fixed linear projection to a scalar. The input is
/// itself a parameter so parameter-free layers can be checked too.
#[derive(Debug, Clone)]
pub struct LayerFragment {
    pub layer: LayerKind,
    pub input: Parameter,
    pub head: Tensor,
}

impl LayerFragment {
    /// Build a fragment whose head weights are drawn uniformly from `[-1, 1)`.
    pub fn with_random_head<R: rand::Rng + ?Sized>(
        layer: LayerKind,
        input: Tensor,
        rng: &mut R,
    ) -> Result<Self> {
        let mut fragment = Self {
            layer,
            input: Parameter::new(input),
            head: Tensor::zeros(&[1]),
        };
        let n = fragment.output_len()?;
        let head = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        fragment.head = Tensor::from_vec(&[n], head)?;
        Ok(fragment)
    }

    fn forward(&self) -> Result<(Tensor, Option<Vec<usize>>)> {
        let x = &self.input.value;
        Ok(match &self.layer {
            LayerKind::Conv(c) => (c.infer(x)?, None),
            LayerKind::MaxPool(w) => {
                let (y, arg) = ops::maxpool1d(x, *w)?;
                (y, Some(arg))
            }
            LayerKind::GlobalMaxPool => {
                let (y, arg) = ops::global_maxpool_time(x)?;
                (y, Some(arg))
            }
            LayerKind::Dense(d) => (d.infer(x)?, None),
            LayerKind::Relu => (ops::relu(x), None),
            LayerKind::Sigmoid => (ops::sigmoid(x), None),
        })
    }

    fn project(&self, y: &Tensor) -> f64 {
        y.data().iter().zip(self.head.data()).map(|(a, b)| a * b).sum()
    }

    /// Output shape of the layer for the current input, to size the head.
    pub fn output_len(&self) -> Result<usize> {
        Ok(self.forward()?.0.len())
    }
}

impl GradFragment for LayerFragment {
    fn param_count(&self) -> usize {
        match self.layer {
            LayerKind::Conv(_) | LayerKind::Dense(_) => 3,
            _ => 1,
        }
    }

    fn param_mut(&mut self, index: usize) -> &mut Parameter {
        match (index, &mut self.layer) {
            (0, _) => &mut self.input,
            (1, LayerKind::Conv(c)) => &mut c.kernels,
            (2, LayerKind::Conv(c)) => &mut c.bias,
            (1, LayerKind::Dense(d)) => &mut d.weights,
            (2, LayerKind::Dense(d)) => &mut d.bias,
            _ => panic!("parameter index {index} out of range"),
        }
    }

    fn loss(&self) -> Result<f64> {
        let (y, _) = self.forward()?;
        Ok(self.project(&y))
    }

    fn loss_and_grad(&mut self) -> Result<f64> {
        for i in 0..self.param_count() {
            self.param_mut(i).zero_grad();
        }
        let (y, argmax) = self.forward()?;
        let value = self.project(&y);
        let upstream = Tensor::from_vec(y.shape(), self.head.data().to_vec())?;
        let frames = self.input.value.shape()[0];
        let d_in = match &mut self.layer {
            LayerKind::Conv(c) => {
                c.forward(&self.input.value)?;
                c.backward(&upstream)?
            }
            LayerKind::Dense(d) => {
                d.forward(&self.input.value)?;
                d.backward(&upstream)?
            }
            LayerKind::MaxPool(_) | LayerKind::GlobalMaxPool => {
                ops::maxpool_backward(&upstream, argmax.as_deref().unwrap_or(&[]), frames)?
            }
            LayerKind::Relu => ops::relu_backward(&upstream, &y)?,
            LayerKind::Sigmoid => {
                let mut g = upstream;
                g.data_mut()
                    .iter_mut()
                    .zip(y.data())
                    .for_each(|(gv, &s)| *gv *= s * (1.0 - s));
                g
            }
        };
        self.input.grad = d_in;
        Ok(value)
    }
}

/// A fragment with no parameters at all.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantFragment(pub f64);

impl GradFragment for ConstantFragment {
    fn param_count(&self) -> usize {
        0
    }

    fn param_mut(&mut self, index: usize) -> &mut Parameter {
        panic!("constant fragment has no parameter {index}")
    }

    fn loss(&self) -> Result<f64> {
        Ok(self.0)
    }

    fn loss_and_grad(&mut self) -> Result<f64> {
        Ok(self.0)
    }
}
