//! Acoustic front end: MFCCs, regression deltas and fixed-length padding.

mod deltas;
mod fft;
mod mfcc;

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use deltas::{add_deltas, deltas, DELTA_WINDOW};
pub use fft::magnitude_spectrum;
pub use mfcc::{mfcc, Mfcc, MfccConfig};

use crate::error::{Error, Result};
use crate::nn::Tensor;

/// Mono audio with samples nominally in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Input("waveform has no samples".into()));
        }
        if sample_rate == 0 {
            return Err(Error::Input("sample rate must be positive".into()));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Default spacing between feature frames, in seconds.
pub const FRAME_SHIFT: f64 = 0.010;

/// A `T x D` sequence of acoustic frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    frames: Tensor,
    frame_shift: f64,
}

impl FeatureMatrix {
    pub fn new(n_frames: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        let frames = Tensor::from_vec(&[n_frames, dim], data)?;
        Self::from_tensor(frames)
    }

    pub fn from_tensor(frames: Tensor) -> Result<Self> {
        frames.dims2("frames")?;
        if !frames.is_finite() {
            return Err(Error::Numerical(
                "feature matrix contains non-finite values".into(),
            ));
        }
        Ok(Self {
            frames,
            frame_shift: FRAME_SHIFT,
        })
    }

    pub fn with_frame_shift(mut self, seconds: f64) -> Self {
        self.frame_shift = seconds;
        self
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::dim(
                "features",
                format!("row {bad} has {} values, expected {dim}", rows[bad].len()),
            ));
        }
        Self::new(rows.len(), dim, rows.concat())
    }

    pub fn n_frames(&self) -> usize {
        self.frames.shape()[0]
    }

    pub fn dim(&self) -> usize {
        self.frames.shape()[1]
    }

    pub fn frame_shift(&self) -> f64 {
        self.frame_shift
    }

    pub fn row(&self, t: usize) -> &[f64] {
        self.frames.row(t)
    }

    pub fn data(&self) -> &[f64] {
        self.frames.data()
    }

    pub fn tensor(&self) -> &Tensor {
        &self.frames
    }

    pub fn into_tensor(self) -> Tensor {
        self.frames
    }
}

/// Truncate to, or zero-pad up to, exactly `max_frames` rows.
pub fn pad_or_truncate(features: &FeatureMatrix, max_frames: usize) -> FeatureMatrix {
    let dim = features.dim();
    let keep = features.n_frames().min(max_frames);
    let mut data = Vec::with_capacity(max_frames * dim);
    data.extend_from_slice(&features.data()[..keep * dim]);
    data.resize(max_frames * dim, 0.0);
    FeatureMatrix {
        frames: Tensor::from_vec(&[max_frames, dim], data).expect("padded shape is consistent"),
        frame_shift: features.frame_shift,
    }
}

/// Subtract the per-dimension mean over time.
pub fn cepstral_mean_normalize(features: &FeatureMatrix) -> FeatureMatrix {
    let (t, d) = (features.n_frames(), features.dim());
    let mut mean = alloc::vec![0.0; d];
    for r in 0..t {
        for (m, v) in mean.iter_mut().zip(features.row(r)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= t as f64);
    let mut data = features.data().to_vec();
    for (i, v) in data.iter_mut().enumerate() {
        *v -= mean[i % d];
    }
    FeatureMatrix {
        frames: Tensor::from_vec(&[t, d], data).expect("same shape"),
        frame_shift: features.frame_shift,
    }
}
