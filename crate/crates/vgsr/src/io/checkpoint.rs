use std::path::Path;

use serde::{Deserialize, Serialize};
use vgsr_core::model::{ModelConfig, SpeechModel};

use super::{read_bytes, write_bytes};
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"VGSR";
pub const CHECKPOINT_VERSION: u32 = 1;

/// JSON header stored ahead of the parameter blobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    config: ModelConfig,
    /// Keyword for each output unit.
    vocabulary: Vec<String>,
}

/// A model together with the keyword of each output unit.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub model: SpeechModel,
    pub vocabulary: Vec<String>,
}

/// `VGSR`, version (u32 LE), JSON header length (u32 LE), JSON header, then
/// every parameter tensor as f32 LE in layer order.
pub fn encode_checkpoint(model: &SpeechModel, vocabulary: &[String]) -> Result<Vec<u8>> {
    if vocabulary.len() != model.vocab_size() {
        return Err(Error::Usage(format!(
            "{} keywords for a model with {} outputs",
            vocabulary.len(),
            model.vocab_size()
        )));
    }
    let header = serde_json::to_vec(&Header {
        config: model.config().clone(),
        vocabulary: vocabulary.to_vec(),
    })
    .expect("header serializes");
    let mut out = Vec::new();
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u32).to_le_bytes());
    out.extend_from_slice(&header);
    for p in model.parameters() {
        for &v in p.value.data() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_checkpoint(bytes: &[u8], path: &Path) -> Result<Checkpoint> {
    if bytes.len() < 12 {
        return Err(Error::corrupt(path, "file ends inside the header"));
    }
    if &bytes[..4] != CHECKPOINT_MAGIC {
        return Err(Error::format(path, "not a VGSR checkpoint (bad magic)"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != CHECKPOINT_VERSION {
        return Err(Error::format(
            path,
            format!("unsupported checkpoint version {version}"),
        ));
    }
    let len = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let body = bytes
        .get(12..12 + len)
        .ok_or_else(|| Error::corrupt(path, "file ends inside the JSON config"))?;
    let header: Header =
        serde_json::from_slice(body).map_err(|e| Error::format(path, format!("checkpoint config: {e}")))?;
    let mut model = SpeechModel::new(header.config).map_err(|e| Error::format(path, e.to_string()))?;
    if header.vocabulary.len() != model.vocab_size() {
        return Err(Error::format(
            path,
            "vocabulary length differs from the output size",
        ));
    }

    let mut blobs = &bytes[12 + len..];
    let mut values = Vec::new();
    for (i, p) in model.parameters().iter().enumerate() {
        let n = p.value.len();
        if blobs.len() < 4 * n {
            return Err(Error::corrupt(path, format!("truncated in parameter tensor {i}")));
        }
        let (head, rest) = blobs.split_at(4 * n);
        values.push(
            head.chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
                .collect(),
        );
        blobs = rest;
    }
    if !blobs.is_empty() {
        return Err(Error::corrupt(
            path,
            format!("{} trailing bytes after the parameters", blobs.len()),
        ));
    }
    model.set_parameter_values(values)?;
    Ok(Checkpoint {
        model,
        vocabulary: header.vocabulary,
    })
}

pub fn save_checkpoint(path: &Path, model: &SpeechModel, vocabulary: &[String]) -> Result<()> {
    write_bytes(path, &encode_checkpoint(model, vocabulary)?)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    decode_checkpoint(&read_bytes(path)?, path)
}
