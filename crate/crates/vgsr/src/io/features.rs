use std::path::Path;

use vgsr_core::features::FeatureMatrix;

use super::{read_bytes, write_bytes};
use crate::error::{Error, Result};

pub const FEATURE_MAGIC: &[u8; 4] = b"VGSF";
pub const FEATURE_VERSION: u32 = 1;

/// `VGSF`, version, frames, dim (all u32 LE), then frames x dim f32 LE.
pub fn encode_features(features: &FeatureMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 4 * features.n_frames() * features.dim());
    out.extend_from_slice(FEATURE_MAGIC);
    out.extend_from_slice(&FEATURE_VERSION.to_le_bytes());
    out.extend_from_slice(&(features.n_frames() as u32).to_le_bytes());
    out.extend_from_slice(&(features.dim() as u32).to_le_bytes());
    for &v in features.data() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

pub fn decode_features(bytes: &[u8], path: &Path) -> Result<FeatureMatrix> {
    if bytes.len() < 16 {
        return Err(Error::corrupt(
            path,
            format!("{} bytes is shorter than the header", bytes.len()),
        ));
    }
    if &bytes[..4] != FEATURE_MAGIC {
        return Err(Error::format(path, "not a VGSF feature file (bad magic)"));
    }
    let version = u32_at(bytes, 4);
    if version != FEATURE_VERSION {
        return Err(Error::format(path, format!("unsupported VGSF version {version}")));
    }
    let (t, d) = (u32_at(bytes, 8) as usize, u32_at(bytes, 12) as usize);
    let expected = 16 + 4 * t * d;
    if bytes.len() != expected {
        return Err(Error::corrupt(
            path,
            format!(
                "header declares {t}x{d} frames ({expected} bytes) but file has {}",
                bytes.len()
            ),
        ));
    }
    let data = bytes[16..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    FeatureMatrix::new(t, d, data).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_features(path: &Path, features: &FeatureMatrix) -> Result<()> {
    write_bytes(path, &encode_features(features))
}

pub fn read_features(path: &Path) -> Result<FeatureMatrix> {
    decode_features(&read_bytes(path)?, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_at_f32() {
        let f = FeatureMatrix::new(2, 3, vec![0.1, -2.0, 3.5, 1e-3, 0.0, 7.25]).unwrap();
        let bytes = encode_features(&f);
        assert_eq!(bytes.len(), 16 + 24);
        let g = decode_features(&bytes, Path::new("x")).unwrap();
        for (a, b) in f.data().iter().zip(g.data()) {
            assert_eq!(*a as f32, *b as f32);
        }
        assert_eq!(encode_features(&g), bytes);
    }

    #[test]
    fn rejects_damage() {
        let f = FeatureMatrix::new(1, 2, vec![1.0, 2.0]).unwrap();
        let mut bytes = encode_features(&f);
        assert!(matches!(
            decode_features(&bytes[..20], Path::new("x")),
            Err(Error::Corrupt { .. })
        ));
        bytes[0] = b'X';
        assert!(matches!(
            decode_features(&bytes, Path::new("x")),
            Err(Error::Format { .. })
        ));
    }
}
