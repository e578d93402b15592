//! Minimal deterministic neural-network primitives.
//!
//! Everything is 64-bit and row-major. Forward ops are pure functions; the
//! backward ops take whatever the forward pass cached (input, argmax
//! indices, activations) explicitly, so the same functions serve the layer
//! structs in [`layers`] and the gradient checker.

pub mod adam;
pub mod gradcheck;
pub mod layers;
pub mod ops;
pub mod param;
pub mod tensor;

pub use adam::{adam_step, AdamConfig};
pub use gradcheck::{grad_check, GradCheckReport, GradFragment, ParamCheck};
pub use layers::{Conv1d, Dense};
pub use ops::{
    conv1d_backward, conv1d_forward, dense_backward, dense_forward, global_maxpool_time, maxpool1d,
    maxpool_backward, relu, relu_backward, sigmoid, Conv1dGrads, DenseGrads,
};
pub use param::Parameter;
pub use tensor::Tensor;
