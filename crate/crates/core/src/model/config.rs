use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::AdamConfig;

/// Pooling after a convolution: non-overlapping windows, or max over all
/// remaining time steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    Window(usize),
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvSpec {
    pub filters: usize,
    pub width: usize,
    pub pool: Pooling,
}

impl ConvSpec {
    pub const fn new(filters: usize, width: usize, pool: Pooling) -> Self {
        Self { filters, width, pool }
    }
}

fn default_patience() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Feature dimension D.
    pub input_dim: usize,
    /// Output vocabulary size W.
    pub vocab_size: usize,
    pub conv: Vec<ConvSpec>,
    pub fc_dim: usize,
    #[serde(default)]
    pub bottleneck_dim: Option<usize>,
    pub max_frames: usize,
    pub seed: u64,
    pub epochs: usize,
    pub batch_size: usize,
    #[serde(default = "default_patience")]
    pub patience: usize,
    pub adam: AdamConfig,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self::full()
    }
}

impl ModelConfig {
    /// Full-size network: 39-dim input, 1000 keywords, 800 frames.
    pub fn full() -> Self {
        Self {
            input_dim: 39,
            vocab_size: 1000,
            conv: vec![
                ConvSpec::new(64, 9, Pooling::Window(3)),
                ConvSpec::new(256, 10, Pooling::Window(3)),
                ConvSpec::new(1024, 11, Pooling::Global),
            ],
            fc_dim: 3000,
            bottleneck_dim: None,
            max_frames: 800,
            seed: 0,
            epochs: 25,
            batch_size: 8,
            patience: default_patience(),
            adam: AdamConfig::default(),
        }
    }

    /// Small network for synthetic corpora and CI.
    pub fn desk() -> Self {
        Self {
            input_dim: 13,
            vocab_size: 20,
            conv: vec![
                ConvSpec::new(8, 8, Pooling::Window(3)),
                ConvSpec::new(16, 5, Pooling::Window(3)),
                ConvSpec::new(32, 3, Pooling::Global),
            ],
            fc_dim: 64,
            bottleneck_dim: None,
            max_frames: 100,
            seed: 0,
            epochs: 25,
            batch_size: 8,
            patience: default_patience(),
            adam: AdamConfig::default(),
        }
    }

    /// Feature-dimension of the layer feeding the output: the bottleneck when
    /// present, else the fully connected layer.
    pub fn penultimate_dim(&self) -> usize {
        self.bottleneck_dim.unwrap_or(self.fc_dim)
    }

    /// Fewest input frames for which every convolution has a full window.
    pub fn min_frames(&self) -> usize {
        let mut needed = 1usize;
        for spec in self.conv.iter().rev() {
            if let Pooling::Window(p) = spec.pool {
                needed *= p;
            }
            needed += spec.width - 1;
        }
        needed
    }

    /// Frames of input seen by a single unit of the last convolution.
    pub fn receptive_field(&self) -> usize {
        let mut span = 1usize;
        for spec in self.conv.iter().rev() {
            if let Pooling::Window(p) = spec.pool {
                span *= p;
            }
            span += spec.width - 1;
        }
        span
    }

    /// Product of all windowed pool sizes.
    pub fn pool_stride(&self) -> usize {
        self.conv
            .iter()
            .map(|s| match s.pool {
                Pooling::Window(p) => p,
                Pooling::Global => 1,
            })
            .product()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::Usage(msg));
        if self.input_dim == 0 || self.vocab_size == 0 || self.fc_dim == 0 || self.max_frames == 0 {
            return bad(format!("model dimensions must be positive: {self:?}"));
        }
        if self.bottleneck_dim == Some(0) {
            return bad("bottleneck_dim must be positive when set".into());
        }
        if self.batch_size == 0 {
            return bad("batch_size must be positive".into());
        }
        let Some((last, rest)) = self.conv.split_last() else {
            return bad("at least one convolution is required".into());
        };
        if last.pool != Pooling::Global {
            return bad("the last convolution must use global pooling".into());
        }
        let mut frames = self.max_frames;
        for (i, spec) in self.conv.iter().enumerate() {
            if spec.filters == 0 || spec.width == 0 {
                return bad(format!("convolution {i} has zero filters or width"));
            }
            if spec.width > frames {
                return bad(format!(
                    "convolution {i} width {} exceeds the {frames} frames left at max_frames={}",
                    spec.width, self.max_frames
                ));
            }
            frames = frames - spec.width + 1;
            match spec.pool {
                Pooling::Window(0) => return bad(format!("convolution {i} has a zero pool width")),
                Pooling::Window(p) => {
                    if p > frames {
                        return bad(format!("pool {p} after convolution {i} exceeds {frames} frames"));
                    }
                    frames /= p;
                }
                Pooling::Global => {
                    if i != rest.len() {
                        return bad(format!("global pooling at convolution {i} is not last"));
                    }
                }
            }
        }
        self.adam.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        ModelConfig::full().validate().unwrap();
        ModelConfig::desk().validate().unwrap();
        assert_eq!(ModelConfig::full().adam.learning_rate, 1e-4);
        assert_eq!(ModelConfig::full().batch_size, 8);
    }

    #[test]
    fn min_frames_is_tight() {
        let cfg = ModelConfig::desk();
        // 46 -> conv 39 -> pool 13 -> conv 9 -> pool 3 -> conv 1
        assert_eq!(cfg.min_frames(), 46);
        // 11 -> x3 + 9 = 42 -> x3 + 8 = 134
        assert_eq!(ModelConfig::full().min_frames(), 134);
    }

    #[test]
    fn rejects_bad_layouts() {
        let mut cfg = ModelConfig::desk();
        cfg.conv[2].pool = Pooling::Window(2);
        assert!(cfg.validate().is_err());
        let mut cfg = ModelConfig::desk();
        cfg.conv[2].width = 50;
        assert!(cfg.validate().is_err());
        let mut cfg = ModelConfig::desk();
        cfg.conv[0].pool = Pooling::Global;
        assert!(cfg.validate().is_err());
    }
}
