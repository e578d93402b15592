use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{ModelConfig, Pooling};
use super::loss::{loss_gradient_logits, summed_cross_entropy};
use crate::error::{Error, Result};
use crate::features::{pad_or_truncate, FeatureMatrix};
use crate::nn::{ops, Conv1d, Dense, GradFragment, Parameter, Tensor};

/// CNN mapping a feature sequence to `W` independent keyword probabilities:
/// ReLU convolutions with max pooling, global max pooling over time, a ReLU
/// fully connected layer, an optional linear bottleneck and a sigmoid output.
#[derive(Debug, Clone)]
pub struct SpeechModel {
    config: ModelConfig,
    convs: Vec<Conv1d>,
    fc: Dense,
    bottleneck: Option<Dense>,
    output: Dense,
}

/// Activations kept from a training forward pass.
#[derive(Debug)]
struct Trace {
    conv_relu: Vec<Tensor>,
    pool_argmax: Vec<Vec<usize>>,
    fc_relu: Tensor,
    probs: Vec<f64>,
}

impl SpeechModel {
    /// Fresh model with Glorot-uniform weights drawn from `config.seed`.
    pub fn new(config: ModelConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut in_ch = config.input_dim;
        let convs = config
            .conv
            .iter()
            .map(|spec| {
                let layer = Conv1d::new(spec.width, in_ch, spec.filters, &mut rng);
                in_ch = spec.filters;
                layer
            })
            .collect();
        let fc = Dense::new(in_ch, config.fc_dim, &mut rng);
        let bottleneck = config
            .bottleneck_dim
            .map(|b| Dense::new(config.fc_dim, b, &mut rng));
        let output = Dense::new(config.penultimate_dim(), config.vocab_size, &mut rng);
        Ok(Self {
            config,
            convs,
            fc,
            bottleneck,
            output,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn vocab_size(&self) -> usize {
        self.config.vocab_size
    }

    fn check_input(&self, x: &Tensor) -> Result<()> {
        let (frames, dim) = x.dims2("features")?;
        if dim != self.config.input_dim {
            return Err(Error::dim(
                "features",
                format!("expected {} feature columns, got {dim}", self.config.input_dim),
            ));
        }
        let need = self.config.min_frames();
        if frames < need {
            return Err(Error::dim(
                "time",
                format!("{frames} frames is too short; pad the input to at least {need} frames"),
            ));
        }
        Ok(())
    }

    fn pool(&self, i: usize, h: &Tensor) -> Result<(Tensor, Vec<usize>)> {
        match self.config.conv[i].pool {
            Pooling::Window(p) => ops::maxpool1d(h, p),
            Pooling::Global => ops::global_maxpool_time(h),
        }
    }

    /// Fully connected (post-ReLU) and penultimate activations.
    fn hidden(&self, x: &Tensor) -> Result<(Tensor, Option<Tensor>)> {
        self.check_input(x)?;
        let mut h = x.clone();
        for (i, conv) in self.convs.iter().enumerate() {
            let r = ops::relu(&conv.infer(&h)?);
            h = self.pool(i, &r)?.0;
        }
        let fc = ops::relu(&self.fc.infer(&h)?);
        let bn = match &self.bottleneck {
            Some(layer) => Some(layer.infer(&fc)?),
            None => None,
        };
        Ok((fc, bn))
    }

    /// Keyword probabilities `f(X)`, each strictly inside `(0, 1)`.
    pub fn forward(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        let (fc, bn) = self.hidden(x.tensor())?;
        let logits = self.output.infer(bn.as_ref().unwrap_or(&fc))?;
        Ok(ops::sigmoid(&logits).into_data())
    }

    /// Pad or truncate to `max_frames`, then [`forward`](Self::forward).
    pub fn score(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        self.forward(&pad_or_truncate(x, self.config.max_frames))
    }

    /// Bottleneck activation, for inspecting learned word representations.
    pub fn bottleneck_embed(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        if self.bottleneck.is_none() {
            return Err(Error::Usage("model was built without a bottleneck layer".into()));
        }
        let (_, bn) = self.hidden(x.tensor())?;
        Ok(bn.map(Tensor::into_data).unwrap_or_default())
    }

    fn forward_train(&mut self, x: &Tensor) -> Result<Trace> {
        self.check_input(x)?;
        let mut conv_relu = Vec::with_capacity(self.convs.len());
        let mut pool_argmax = Vec::with_capacity(self.convs.len());
        let mut h = x.clone();
        for i in 0..self.convs.len() {
            let r = ops::relu(&self.convs[i].forward(&h)?);
            let (p, arg) = self.pool(i, &r)?;
            conv_relu.push(r);
            pool_argmax.push(arg);
            h = p;
        }
        let fc_relu = ops::relu(&self.fc.forward(&h)?);
        let pen = match &mut self.bottleneck {
            Some(layer) => layer.forward(&fc_relu)?,
            None => fc_relu.clone(),
        };
        let probs = ops::sigmoid(&self.output.forward(&pen)?).into_data();
        Ok(Trace {
            conv_relu,
            pool_argmax,
            fc_relu,
            probs,
        })
    }

    fn backward(&mut self, trace: Trace, d_logits: Vec<f64>) -> Result<()> {
        let mut g = self.output.backward(&Tensor::row_vector(d_logits))?;
        if let Some(layer) = &mut self.bottleneck {
            g = layer.backward(&g)?;
        }
        g = ops::relu_backward(&g, &trace.fc_relu)?;
        g = self.fc.backward(&g)?;
        for i in (0..self.convs.len()).rev() {
            let relu_out = &trace.conv_relu[i];
            let pooled_rows = trace.pool_argmax[i].len() / relu_out.shape()[1];
            let g_pooled = Tensor::from_vec(&[pooled_rows, relu_out.shape()[1]], g.into_data())?;
            g = ops::maxpool_backward(&g_pooled, &trace.pool_argmax[i], relu_out.shape()[0])?;
            g = ops::relu_backward(&g, relu_out)?;
            g = self.convs[i].backward(&g)?;
        }
        Ok(())
    }

    /// Add the gradient of the summed cross-entropy for one example to the
    /// parameter gradients and return that example's loss.
    pub fn accumulate_gradients(&mut self, x: &FeatureMatrix, target: &[f64]) -> Result<f64> {
        if target.len() != self.config.vocab_size {
            return Err(Error::dim(
                "vocabulary",
                format!(
                    "target has {} entries, model outputs {}",
                    target.len(),
                    self.config.vocab_size
                ),
            ));
        }
        let trace = self.forward_train(x.tensor())?;
        let loss = summed_cross_entropy(&trace.probs, target)?;
        let d_logits = loss_gradient_logits(&trace.probs, target)?;
        self.backward(trace, d_logits)?;
        Ok(loss)
    }

    /// Add the gradient of `sum_w head_w * f_w(X)` (no loss) and return that sum.
    pub fn accumulate_head_gradients(&mut self, x: &FeatureMatrix, head: &[f64]) -> Result<f64> {
        let trace = self.forward_train(x.tensor())?;
        let value = trace.probs.iter().zip(head).map(|(p, h)| p * h).sum();
        let d_logits = trace
            .probs
            .iter()
            .zip(head)
            .map(|(p, h)| h * p * (1.0 - p))
            .collect();
        self.backward(trace, d_logits)?;
        Ok(value)
    }

    pub fn zero_grad(&mut self) {
        self.parameters_mut().into_iter().for_each(Parameter::zero_grad);
    }

    /// Parameters in layer order: each convolution's kernels and bias, then
    /// the fully connected, bottleneck and output weights and biases.
    pub fn parameters(&self) -> Vec<&Parameter> {
        let mut out: Vec<&Parameter> = Vec::new();
        for c in &self.convs {
            out.extend(c.parameters());
        }
        out.extend(self.fc.parameters());
        if let Some(b) = &self.bottleneck {
            out.extend(b.parameters());
        }
        out.extend(self.output.parameters());
        out
    }

    pub fn parameters_mut(&mut self) -> Vec<&mut Parameter> {
        let mut out: Vec<&mut Parameter> = Vec::new();
        for c in &mut self.convs {
            out.extend(c.parameters_mut());
        }
        out.extend(self.fc.parameters_mut());
        if let Some(b) = &mut self.bottleneck {
            out.extend(b.parameters_mut());
        }
        out.extend(self.output.parameters_mut());
        out
    }

    pub fn parameter_count(&self) -> usize {
        self.parameters().iter().map(|p| p.value.len()).sum()
    }

    /// Overwrite every parameter value, in [`parameters`](Self::parameters)
    /// order. Optimizer state is reset.
    pub fn set_parameter_values(&mut self, values: Vec<Vec<f64>>) -> Result<()> {
        let mut params = self.parameters_mut();
        if params.len() != values.len() {
            return Err(Error::dim(
                "parameters",
                format!("model has {} tensors, got {}", params.len(), values.len()),
            ));
        }
        for (i, (p, v)) in params.iter().zip(&values).enumerate() {
            if p.value.len() != v.len() {
                return Err(Error::dim(
                    "parameters",
                    format!("tensor {i} needs {} values, got {}", p.value.len(), v.len()),
                ));
            }
        }
        for (p, v) in params.iter_mut().zip(values) {
            let shape = p.value.shape().to_vec();
            p.reset_value(Tensor::from_vec(&shape, v)?);
        }
        Ok(())
    }

    fn parameter_mut(&mut self, index: usize) -> &mut Parameter {
        self.parameters_mut().swap_remove(index)
    }
}

/// Scalar placed on top of the model for gradient checking.
#[derive(Debug, Clone)]
pub enum Head {
    /// Summed cross-entropy against this target.
    CrossEntropy(Vec<f64>),
    /// Weighted sum of the output probabilities.
    WeightedSum(Vec<f64>),
}

/// A model, one input and a scalar head, exposed to the gradient checker.
#[derive(Debug, Clone)]
pub struct ModelFragment {
    pub model: SpeechModel,
    pub input: FeatureMatrix,
    pub head: Head,
}

impl GradFragment for ModelFragment {
    fn param_count(&self) -> usize {
        self.model.parameters().len()
    }

    fn param_mut(&mut self, index: usize) -> &mut Parameter {
        self.model.parameter_mut(index)
    }

    fn loss(&self) -> Result<f64> {
        let f = self.model.forward(&self.input)?;
        match &self.head {
            Head::CrossEntropy(y) => summed_cross_entropy(&f, y),
            Head::WeightedSum(w) => Ok(f.iter().zip(w).map(|(a, b)| a * b).sum()),
        }
    }

    fn loss_and_grad(&mut self) -> Result<f64> {
        self.model.zero_grad();
        match &self.head {
            Head::CrossEntropy(y) => self.model.accumulate_gradients(&self.input, y),
            Head::WeightedSum(w) => self.model.accumulate_head_gradients(&self.input, w),
        }
    }
}
