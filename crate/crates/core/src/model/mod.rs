//! The convolutional keyword model and its training.
//!
//! One architecture serves both supervision variants: soft visual tag
//! targets and hard bag-of-words targets differ only in the target vectors
//! handed to [`fit`].

mod config;
mod loss;
mod net;
mod train;

pub use config::{ConvSpec, ModelConfig, Pooling};
pub use loss::{loss_gradient_logits, summed_cross_entropy, LOG_CLAMP};
pub use net::{Head, ModelFragment, SpeechModel};
pub use train::{fit, mean_loss, EpochRecord, Example, TrainLog};
