use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// In-place iterative radix-2 FFT over `(re, im)` pairs. `len` must be a
/// power of two.
fn fft_in_place(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let angle = -core::f64::consts::TAU / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let (wr, wi) = (math::cos(angle * k as f64), math::sin(angle * k as f64));
                let (a, b) = (start + k, start + k + len / 2);
                let tr = re[b] * wr - im[b] * wi;
                let ti = re[b] * wi + im[b] * wr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
            }
        }
        len <<= 1;
    }
}

/// `|X_k|` for `k = 0..=n/2` of the zero-padded real `frame`.
pub fn magnitude_spectrum(frame: &[f64], fft_size: usize) -> Vec<f64> {
    assert!(fft_size.is_power_of_two() && fft_size >= frame.len());
    let mut re = vec![0.0; fft_size];
    re[..frame.len()].copy_from_slice(frame);
    let mut im = vec![0.0; fft_size];
    fft_in_place(&mut re, &mut im);
    (0..=fft_size / 2)
        .map(|k| math::sqrt(re[k] * re[k] + im[k] * im[k]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_direct_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let frame: Vec<f64> = (0..100).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = 128;
        let fast = magnitude_spectrum(&frame, n);
        for (k, &m) in fast.iter().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &x) in frame.iter().enumerate() {
                let a = -core::f64::consts::TAU * (k * t) as f64 / n as f64;
                re += x * math::cos(a);
                im += x * math::sin(a);
            }
            assert!((m - math::sqrt(re * re + im * im)).abs() < 1e-9);
        }
    }
}
