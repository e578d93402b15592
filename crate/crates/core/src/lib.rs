//! Keyword prediction from untranscribed speech with soft visual supervision,
//! and the semantic speech retrieval evaluation toolkit built around it.
//!
//! The crate is `no_std` (with `alloc`) and holds every algorithmic piece:
//!
//! - [`nn`]: tensors, the handful of layers the acoustic CNN needs, Adam and
//!   a finite-difference gradient checker.
//! - [`model`]: the convolutional keyword model, summed cross-entropy loss,
//!   minibatch training with early stopping, bottleneck embeddings.
//! - [`features`]: MFCCs, regression deltas and fixed-length padding.
//! - [`corpus`]: utterance records, vocabulary, bag-of-words targets,
//!   annotator counts and a seeded synthetic corpus generator.
//! - [`retrieval`]: score matrices, rankings and every evaluation metric.
//! - [`baselines`]: unigram/tag priors, Wu-Palmer and embedding text
//!   retrieval, simulated ASR errors and word error rate.
//!
//! File formats, audio IO and the command line live in the `vgsr` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod baselines;
pub mod corpus;
pub mod error;
pub mod features;
pub(crate) mod math;
pub mod model;
pub mod nn;
pub mod retrieval;

pub use error::{Error, Result};
