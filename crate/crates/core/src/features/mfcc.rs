use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::fft::magnitude_spectrum;
use super::{cepstral_mean_normalize, FeatureMatrix, Waveform};
use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfccConfig {
    pub n_coeffs: usize,
    /// Analysis window length in seconds.
    pub window: f64,
    /// Hop between frames in seconds.
    pub hop: f64,
    pub n_mels: usize,
    pub pre_emphasis: f64,
    pub low_freq: f64,
    /// Upper filterbank edge; `None` means Nyquist.
    pub high_freq: Option<f64>,
    pub log_floor: f64,
    pub cmn: bool,
}

impl Default for MfccConfig {
    fn default() -> Self {
        Self {
            n_coeffs: 13,
            window: 0.025,
            hop: 0.010,
            n_mels: 26,
            pre_emphasis: 0.97,
            low_freq: 0.0,
            high_freq: None,
            log_floor: 1e-10,
            cmn: false,
        }
    }
}

fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * math::log10(1.0 + hz / 700.0)
}

fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (math::powf(10.0, mel / 2595.0) - 1.0)
}

/// MFCC extractor with the window, filterbank and DCT precomputed for one
/// sample rate.
#[derive(Debug, Clone)]
pub struct Mfcc {
    config: MfccConfig,
    sample_rate: u32,
    win_samples: usize,
    hop_samples: usize,
    fft_size: usize,
    window: Vec<f64>,
    /// `n_mels` rows of `fft_size / 2 + 1` weights.
    filterbank: Vec<Vec<f64>>,
    /// `n_coeffs` rows of `n_mels` orthonormal DCT-II weights.
    dct: Vec<Vec<f64>>,
}

impl Mfcc {
    pub fn new(config: MfccConfig, sample_rate: u32) -> Result<Self> {
        let sr = sample_rate as f64;
        let win_samples = math::round(config.window * sr) as usize;
        let hop_samples = math::round(config.hop * sr) as usize;
        if win_samples < 2 || hop_samples == 0 {
            return Err(Error::Input(format!(
                "window {}s / hop {}s too short at {sample_rate} Hz",
                config.window, config.hop
            )));
        }
        if config.n_mels == 0 || config.n_coeffs == 0 || config.n_coeffs > config.n_mels {
            return Err(Error::Input(format!(
                "need 0 < n_coeffs ({}) <= n_mels ({})",
                config.n_coeffs, config.n_mels
            )));
        }
        let high = config.high_freq.unwrap_or(sr / 2.0);
        if !(0.0..high).contains(&config.low_freq) || high > sr / 2.0 {
            return Err(Error::Input(format!(
                "filterbank edges {}..{high} Hz invalid at {sample_rate} Hz",
                config.low_freq
            )));
        }
        let fft_size = win_samples.next_power_of_two();
        let window = (0..win_samples)
            .map(|n| 0.54 - 0.46 * math::cos(core::f64::consts::TAU * n as f64 / (win_samples - 1) as f64))
            .collect();

        let (mel_lo, mel_hi) = (hz_to_mel(config.low_freq), hz_to_mel(high));
        let edges: Vec<f64> = (0..config.n_mels + 2)
            .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (config.n_mels + 1) as f64))
            .collect();
        let n_bins = fft_size / 2 + 1;
        let filterbank = (0..config.n_mels)
            .map(|j| {
                let (l, c, r) = (edges[j], edges[j + 1], edges[j + 2]);
                (0..n_bins)
                    .map(|k| {
                        let f = k as f64 * sr / fft_size as f64;
                        if f > l && f <= c {
                            (f - l) / (c - l)
                        } else if f > c && f < r {
                            (r - f) / (r - c)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();

        let m = config.n_mels as f64;
        let dct = (0..config.n_coeffs)
            .map(|k| {
                let scale = if k == 0 {
                    math::sqrt(1.0 / m)
                } else {
                    math::sqrt(2.0 / m)
                };
                (0..config.n_mels)
                    .map(|n| {
                        scale * math::cos(core::f64::consts::PI * k as f64 * (2 * n + 1) as f64 / (2.0 * m))
                    })
                    .collect()
            })
            .collect();

        Ok(Self {
            config,
            sample_rate,
            win_samples,
            hop_samples,
            fft_size,
            window,
            filterbank,
            dct,
        })
    }

    pub fn config(&self) -> &MfccConfig {
        &self.config
    }

    pub fn window_samples(&self) -> usize {
        self.win_samples
    }

    pub fn hop_samples(&self) -> usize {
        self.hop_samples
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn filterbank(&self) -> &[Vec<f64>] {
        &self.filterbank
    }

    /// Number of frames produced for `n_samples` of audio.
    pub fn frame_count(&self, n_samples: usize) -> usize {
        if n_samples < self.win_samples {
            0
        } else {
            (n_samples - self.win_samples) / self.hop_samples + 1
        }
    }

    /// Windowed frame `t` of an already pre-emphasised signal.
    pub fn windowed_frame(&self, emphasised: &[f64], t: usize) -> Vec<f64> {
        let start = t * self.hop_samples;
        emphasised[start..start + self.win_samples]
            .iter()
            .zip(&self.window)
            .map(|(x, w)| x * w)
            .collect()
    }

    pub fn pre_emphasise(&self, samples: &[f64]) -> Vec<f64> {
        let a = self.config.pre_emphasis;
        let mut out = Vec::with_capacity(samples.len());
        let mut prev = 0.0;
        for &x in samples {
            out.push(x - a * prev);
            prev = x;
        }
        out
    }

    /// Mel filterbank energies (linear magnitude) of one windowed frame.
    pub fn mel_energies(&self, windowed: &[f64]) -> Vec<f64> {
        let spectrum = magnitude_spectrum(windowed, self.fft_size);
        self.filterbank
            .iter()
            .map(|row| row.iter().zip(&spectrum).map(|(w, s)| w * s).sum())
            .collect()
    }

    fn cepstrum(&self, energies: &[f64]) -> Vec<f64> {
        let logs: Vec<f64> = energies
            .iter()
            .map(|&e| math::ln(e.max(self.config.log_floor)))
            .collect();
        self.dct
            .iter()
            .map(|row| row.iter().zip(&logs).map(|(w, l)| w * l).sum())
            .collect()
    }

    pub fn compute(&self, wave: &Waveform) -> Result<FeatureMatrix> {
        if wave.sample_rate() != self.sample_rate {
            return Err(Error::Input(format!(
                "extractor built for {} Hz, audio is {} Hz",
                self.sample_rate,
                wave.sample_rate()
            )));
        }
        let n = wave.samples().len();
        if n < self.win_samples {
            return Err(Error::Input(format!(
                "{n} samples is shorter than one {}-sample analysis window",
                self.win_samples
            )));
        }
        let emphasised = self.pre_emphasise(wave.samples());
        let frames = self.frame_count(n);
        let mut data = Vec::with_capacity(frames * self.config.n_coeffs);
        for t in 0..frames {
            let energies = self.mel_energies(&self.windowed_frame(&emphasised, t));
            data.extend(self.cepstrum(&energies));
        }
        let features = FeatureMatrix::new(frames, self.config.n_coeffs, data)?
            .with_frame_shift(self.hop_samples as f64 / self.sample_rate as f64);
        Ok(if self.config.cmn {
            cepstral_mean_normalize(&features)
        } else {
            features
        })
    }
}

/// Static MFCCs of `wave` (one row per frame).
pub fn mfcc(wave: &Waveform, config: &MfccConfig) -> Result<FeatureMatrix> {
    Mfcc::new(config.clone(), wave.sample_rate())?.compute(wave)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect()
    }

    #[test]
    fn one_second_gives_98_frames() {
        let wave = Waveform::new(noise(16000, 1), 16000).unwrap();
        let f = mfcc(&wave, &MfccConfig::default()).unwrap();
        assert_eq!(f.n_frames(), 98);
        assert_eq!(f.dim(), 13);
        assert!((f.frame_shift() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn too_short_audio_is_rejected() {
        let wave = Waveform::new(noise(399, 2), 16000).unwrap();
        assert!(matches!(
            mfcc(&wave, &MfccConfig::default()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn tone_energy_peaks_in_bands_covering_its_frequency() {
        let ex = Mfcc::new(MfccConfig::default(), 16000).unwrap();
        let tone: Vec<f64> = (0..400)
            .map(|n| math::sin(core::f64::consts::TAU * 1000.0 * n as f64 / 16000.0))
            .collect();
        let windowed: Vec<f64> = tone.iter().zip(&ex.window).map(|(x, w)| x * w).collect();
        let energies = ex.mel_energies(&windowed);

        // Oracle: direct DFT magnitudes through the same triangles.
        let n = ex.fft_size();
        let mags: Vec<f64> = (0..=n / 2)
            .map(|k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (t, &x) in windowed.iter().enumerate() {
                    let a = -core::f64::consts::TAU * (k * t) as f64 / n as f64;
                    re += x * math::cos(a);
                    im += x * math::sin(a);
                }
                math::sqrt(re * re + im * im)
            })
            .collect();
        for (row, &e) in ex.filterbank().iter().zip(&energies) {
            let oracle: f64 = row.iter().zip(&mags).map(|(w, m)| w * m).sum();
            assert!((oracle - e).abs() < 1e-9 * (1.0 + oracle));
        }

        let peak = energies
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let bin_1k = (1000.0 * n as f64 / 16000.0) as usize;
        assert!(
            ex.filterbank()[peak][bin_1k] > 0.0,
            "peak band {peak} does not cover 1 kHz"
        );
        let total: f64 = energies.iter().sum();
        let covering: f64 = energies
            .iter()
            .zip(ex.filterbank())
            .filter(|(_, row)| row[bin_1k] > 0.0)
            .map(|(e, _)| e)
            .sum();
        assert!(covering / total > 0.5);
    }

    #[test]
    fn doubling_amplitude_only_moves_c0() {
        let base = noise(4000, 3);
        let loud: Vec<f64> = base.iter().map(|x| 2.0 * x).collect();
        let cfg = MfccConfig::default();
        let a = mfcc(&Waveform::new(base, 16000).unwrap(), &cfg).unwrap();
        let b = mfcc(&Waveform::new(loud, 16000).unwrap(), &cfg).unwrap();
        let shift = math::sqrt(26.0) * math::ln(2.0);
        for t in 0..a.n_frames() {
            assert!((b.row(t)[0] - a.row(t)[0] - shift).abs() < 1e-9);
            for k in 1..13 {
                assert!((b.row(t)[k] - a.row(t)[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn delay_by_one_hop_shifts_one_frame() {
        let base = noise(3200, 4);
        let mut delayed = vec![0.0; 160];
        delayed.extend_from_slice(&base);
        let cfg = MfccConfig::default();
        let a = mfcc(&Waveform::new(base, 16000).unwrap(), &cfg).unwrap();
        let b = mfcc(&Waveform::new(delayed, 16000).unwrap(), &cfg).unwrap();
        assert_eq!(b.n_frames(), a.n_frames() + 1);
        for t in 0..a.n_frames() {
            for k in 0..13 {
                assert!((a.row(t)[k] - b.row(t + 1)[k]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn deterministic() {
        let wave = Waveform::new(noise(2000, 5), 16000).unwrap();
        let cfg = MfccConfig::default();
        assert_eq!(mfcc(&wave, &cfg).unwrap(), mfcc(&wave, &cfg).unwrap());
    }
}
