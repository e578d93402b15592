//! File formats, pipeline glue and the `vgsr` command-line tool on top of
//! [`vgsr_core`].
//!
//! - [`io`] reads and writes every on-disk artifact: WAV audio, VGSF feature
//!   files, VGSR checkpoints, JSONL manifests, annotation CSVs, vocabulary,
//!   taxonomy and embedding text files, score and report JSON.
//! - [`pipeline`] holds the steps shared by the CLI and the tests.
//! - [`cli`] is the argument parser and command dispatch.

#![warn(missing_debug_implementations)]

pub mod cli;
pub mod error;
pub mod io;
pub mod pipeline;

pub use error::{Error, Result};
pub use vgsr_core as core;
