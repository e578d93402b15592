use alloc::vec::Vec;

use super::FeatureMatrix;

/// Half-width of the regression window used by [`add_deltas`].
pub const DELTA_WINDOW: usize = 2;

/// Regression deltas over `±window` frames, replicating edge frames.
pub fn deltas(features: &FeatureMatrix, window: usize) -> FeatureMatrix {
    let (t, d) = (features.n_frames(), features.dim());
    let denom: f64 = 2.0 * (1..=window).map(|n| (n * n) as f64).sum::<f64>();
    let clamp = |i: isize| i.clamp(0, t as isize - 1) as usize;
    let mut data = Vec::with_capacity(t * d);
    for i in 0..t as isize {
        for c in 0..d {
            let num: f64 = (1..=window as isize)
                .map(|n| n as f64 * (features.row(clamp(i + n))[c] - features.row(clamp(i - n))[c]))
                .sum();
            data.push(if denom == 0.0 { 0.0 } else { num / denom });
        }
    }
    FeatureMatrix::new(t, d, data)
        .expect("delta shape matches input")
        .with_frame_shift(features.frame_shift())
}

/// `[static | delta | delta-delta]`, tripling the feature dimension.
pub fn add_deltas(features: &FeatureMatrix) -> FeatureMatrix {
    let d1 = deltas(features, DELTA_WINDOW);
    let d2 = deltas(&d1, DELTA_WINDOW);
    let (t, d) = (features.n_frames(), features.dim());
    let mut data = Vec::with_capacity(t * 3 * d);
    for r in 0..t {
        data.extend_from_slice(features.row(r));
        data.extend_from_slice(d1.row(r));
        data.extend_from_slice(d2.row(r));
    }
    FeatureMatrix::new(t, 3 * d, data)
        .expect("stacked shape is consistent")
        .with_frame_shift(features.frame_shift())
}
