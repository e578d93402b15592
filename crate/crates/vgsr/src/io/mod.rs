//! On-disk formats.

mod annotations;
mod checkpoint;
mod features;
mod lexicon;
mod manifest;
mod scores;
mod wav;

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use annotations::{read_annotations, write_annotations};
pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, Checkpoint, CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
};
pub use features::{
    decode_features, encode_features, read_features, write_features, FEATURE_MAGIC, FEATURE_VERSION,
};
pub use lexicon::{
    read_embeddings, read_taxonomy, read_vocabulary, write_embeddings, write_taxonomy, write_vocabulary,
};
pub use manifest::{read_manifest, write_manifest, Manifest, ManifestEntry, TagsField};
pub use scores::{
    read_scores, write_report, write_report_csv, write_scores, Provenance, ReportFile, ScoresFile,
};
pub use wav::{read_wav, write_wav};

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Write `bytes`, creating parent directories as needed.
pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// First 16 hex digits of the SHA-256 of `bytes`.
pub fn short_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

/// Hash of a value's JSON serialization.
pub fn config_hash<T: serde::Serialize>(value: &T) -> String {
    short_hash(&serde_json::to_vec(value).expect("config types serialize"))
}
