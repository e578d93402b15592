use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Probabilities are clamped to `[LOG_CLAMP, 1 - LOG_CLAMP]` before logs.
pub const LOG_CLAMP: f64 = 1e-7;

fn check_lengths(f: &[f64], y: &[f64]) -> Result<()> {
    if f.len() != y.len() {
        return Err(Error::dim(
            "vocabulary",
            format!("{} scores vs {} targets", f.len(), y.len()),
        ));
    }
    Ok(())
}

/// `-sum_w [ y_w ln f_w + (1 - y_w) ln(1 - f_w) ]` for one example.
pub fn summed_cross_entropy(f: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(f, y)?;
    Ok(f.iter()
        .zip(y)
        .map(|(&p, &t)| {
            let p = p.clamp(LOG_CLAMP, 1.0 - LOG_CLAMP);
            -(t * math::ln(p) + (1.0 - t) * math::ln(1.0 - p))
        })
        .sum())
}

/// Gradient of [`summed_cross_entropy`] with respect to the pre-sigmoid
/// logits: `f - y`, or zero where the clamp is active.
pub fn loss_gradient_logits(f: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_lengths(f, y)?;
    Ok(f.iter()
        .zip(y)
        .map(|(&p, &t)| {
            if (LOG_CLAMP..=1.0 - LOG_CLAMP).contains(&p) {
                p - t
            } else {
                0.0
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hand_value() {
        let l = summed_cross_entropy(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert!((l - 2.0 * core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn perfect_hard_prediction_is_near_zero() {
        let y = vec![1.0, 0.0, 0.0, 1.0, 1.0];
        let l = summed_cross_entropy(&y, &y).unwrap();
        assert!(l >= 0.0 && l <= y.len() as f64 * 1e-6);
    }

    #[test]
    fn soft_targets_minimised_at_target() {
        let l = summed_cross_entropy(&[0.5; 4], &[0.5; 4]).unwrap();
        assert!((l - 4.0 * core::f64::consts::LN_2).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let y: Vec<f64> = (0..6).map(|_| rng.gen_range(0.02..0.98)).collect();
            let at = summed_cross_entropy(&y, &y).unwrap();
            for d in [0.01, -0.01] {
                let moved: Vec<f64> = y.iter().map(|v| v + d).collect();
                assert!(at <= summed_cross_entropy(&moved, &y).unwrap());
            }
        }
    }

    #[test]
    fn binary_targets_reduce_to_per_dimension_log_loss() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f: Vec<f64> = (0..10).map(|_| rng.gen_range(0.01..0.99)).collect();
        let y: Vec<f64> = (0..10)
            .map(|_| if rng.gen_bool(0.3) { 1.0 } else { 0.0 })
            .collect();
        let oracle: f64 = f
            .iter()
            .zip(&y)
            .map(|(&p, &t)| {
                if t == 1.0 {
                    -math::ln(p)
                } else {
                    -math::ln(1.0 - p)
                }
            })
            .sum();
        assert!((summed_cross_entropy(&f, &y).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            summed_cross_entropy(&[0.5], &[0.5, 0.5]),
            Err(Error::Dimension { .. })
        ));
    }
}
