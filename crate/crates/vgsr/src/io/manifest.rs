use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vgsr_core::corpus::{Corpus, FeatureSource, Split, UtteranceRecord};

use super::{read_text, write_bytes};
use crate::error::{Error, Result};

/// Tags inline or in a whitespace-separated text file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TagsField {
    Values(Vec<f64>),
    Path(String),
}

/// One JSONL line. Relative paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub utt_id: String,
    pub features: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcription: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<TagsField>,
    pub split: Split,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wer_target: Option<f64>,
}

impl ManifestEntry {
    /// Entry for `record` in a manifest stored in `dir`. Feature paths under
    /// `dir` are written relative to it.
    pub fn from_record(record: &UtteranceRecord, dir: &Path) -> Result<Self> {
        let FeatureSource::Path(p) = &record.features else {
            return Err(Error::Usage(format!(
                "utterance {} has in-memory features; write them to a file first",
                record.utt_id
            )));
        };
        Ok(Self {
            utt_id: record.utt_id.clone(),
            features: relative_to(Path::new(p), dir),
            transcription: record.transcription.clone(),
            tags: record.tags.clone().map(TagsField::Values),
            split: record.split,
            wer_target: None,
        })
    }
}

fn absolute(path: &Path) -> PathBuf {
    std::path::absolute(path).unwrap_or_else(|_| path.to_path_buf())
}

fn relative_to(path: &Path, dir: &Path) -> String {
    let abs = absolute(path);
    match abs.strip_prefix(absolute(dir)) {
        Ok(rel) => rel.to_string_lossy().into_owned(),
        Err(_) => abs.to_string_lossy().into_owned(),
    }
}

/// A parsed manifest: raw entries plus the validated corpus, with feature
/// paths made absolute.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub path: PathBuf,
    pub entries: Vec<ManifestEntry>,
    pub corpus: Corpus,
}

fn parse_tag_file(path: &Path) -> Result<Vec<f64>> {
    read_text(path)?
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|e| Error::format(path, format!("tag value {t:?}: {e}")))
        })
        .collect()
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = read_text(path)?;
    let dir = absolute(path.parent().unwrap_or(Path::new(".")));
    let mut entries = Vec::new();
    let mut corpus = Corpus::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = |detail: String| Error::format(path, format!("line {}: {detail}", i + 1));
        let entry: ManifestEntry = serde_json::from_str(line).map_err(|e| at(e.to_string()))?;
        let tags = match &entry.tags {
            None => None,
            Some(TagsField::Values(v)) => Some(v.clone()),
            Some(TagsField::Path(p)) => Some(parse_tag_file(&dir.join(p)).map_err(|e| at(e.to_string()))?),
        };
        corpus
            .push(UtteranceRecord {
                utt_id: entry.utt_id.clone(),
                features: FeatureSource::Path(dir.join(&entry.features).to_string_lossy().into_owned()),
                transcription: entry.transcription.clone(),
                tags,
                split: entry.split,
            })
            .map_err(|e| at(e.to_string()))?;
        entries.push(entry);
    }
    Ok(Manifest {
        path: path.to_path_buf(),
        entries,
        corpus,
    })
}

pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<()> {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e).expect("manifest entries serialize"));
        out.push('\n');
    }
    write_bytes(path, out.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_paths() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("t.txt"), "0.5 1 0").unwrap();
        let m = dir.path().join("m.jsonl");
        std::fs::write(
            &m,
            concat!(
                r#"{"utt_id":"a","features":"f/a.vgsf","transcription":"a dog","tags":[0.1,0.2,0.3],"split":"train"}"#,
                "\n\n",
                r#"{"utt_id":"b","features":"f/b.vgsf","tags":"t.txt","split":"test"}"#,
                "\n"
            ),
        )
        .unwrap();
        let man = read_manifest(&m).unwrap();
        assert_eq!(man.corpus.len(), 2);
        assert_eq!(
            man.corpus.get("b").unwrap().tags.as_deref(),
            Some(&[0.5, 1.0, 0.0][..])
        );
        let rec = man.corpus.get("a").unwrap();
        let FeatureSource::Path(p) = &rec.features else {
            panic!()
        };
        assert!(Path::new(p).is_absolute());
        let e = ManifestEntry::from_record(rec, dir.path()).unwrap();
        assert_eq!(e.features, "f/a.vgsf");
        assert_eq!(e, man.entries[0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.jsonl");
        std::fs::write(
            &m,
            concat!(
                r#"{"utt_id":"a","features":"a","split":"train"}"#,
                "\n",
                r#"{"utt_id":"a","features":"b","split":"train"}"#,
                "\n"
            ),
        )
        .unwrap();
        let err = read_manifest(&m).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        std::fs::write(&m, r#"{"utt_id":"a","split":"train"}"#).unwrap();
        assert!(read_manifest(&m).unwrap_err().to_string().contains("line 1"));
        std::fs::write(&m, r#"{"utt_id":"a","features":"a","split":"val"}"#).unwrap();
        assert!(read_manifest(&m).is_err());
    }
}
