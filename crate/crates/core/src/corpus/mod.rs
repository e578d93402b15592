//! Utterances, vocabularies, target vectors and annotator judgements.

mod annotations;
mod synth;
mod text;
mod vocab;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

pub use annotations::{
    aggregate_annotations, annotator_agreement, count_distribution, AnnotationSet, RelevanceLabels,
    DEFAULT_ANNOTATORS, DEFAULT_THRESHOLD,
};
pub use synth::{synth_corpus, SynthConfig, SynthCorpus};
pub use text::{contains_word, tokenize, DEFAULT_STOPWORDS};
pub use vocab::{bow_targets, build_vocabulary, Vocabulary};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(Error::Input(format!(
                "unknown split {other:?} (expected train, dev or test)"
            ))),
        }
    }
}

/// Where an utterance's features come from.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureSource {
    Path(String),
    Inline(FeatureMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtteranceRecord {
    pub utt_id: String,
    pub features: FeatureSource,
    pub transcription: Option<String>,
    /// Soft visual tags, one per vocabulary word.
    pub tags: Option<Vec<f64>>,
    pub split: Split,
}

/// Validated collection of utterances with unique ids and consistent tag
/// lengths.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    records: Vec<UtteranceRecord>,
    index: BTreeMap<String, usize>,
    tag_dim: Option<usize>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Corpus whose tag vectors must all have `w` entries.
    pub fn with_tag_dim(w: usize) -> Self {
        Self {
            tag_dim: Some(w),
            ..Self::default()
        }
    }

    pub fn from_records(records: impl IntoIterator<Item = UtteranceRecord>) -> Result<Self> {
        let mut corpus = Self::new();
        for r in records {
            corpus.push(r)?;
        }
        Ok(corpus)
    }

    pub fn push(&mut self, record: UtteranceRecord) -> Result<()> {
        if record.utt_id.is_empty() {
            return Err(Error::Input("empty utt_id".into()));
        }
        if self.index.contains_key(&record.utt_id) {
            return Err(Error::Input(format!("duplicate utt_id {:?}", record.utt_id)));
        }
        if let Some(tags) = &record.tags {
            if let Some(bad) = tags.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::Input(format!(
                    "tag value {bad} for {:?} is outside [0, 1]",
                    record.utt_id
                )));
            }
            match self.tag_dim {
                Some(w) if w != tags.len() => {
                    return Err(Error::Input(format!(
                        "tags for {:?} have length {}, expected {w}",
                        record.utt_id,
                        tags.len()
                    )));
                }
                None => self.tag_dim = Some(tags.len()),
                _ => {}
            }
        }
        self.index.insert(record.utt_id.clone(), self.records.len());
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[UtteranceRecord] {
        &self.records
    }

    pub fn records_mut(&mut self) -> impl Iterator<Item = &mut UtteranceRecord> {
        self.records.iter_mut()
    }

    pub fn get(&self, utt_id: &str) -> Option<&UtteranceRecord> {
        self.index.get(utt_id).map(|&i| &self.records[i])
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &UtteranceRecord> {
        self.records.iter().filter(move |r| r.split == split)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn tag_dim(&self) -> Option<usize> {
        self.tag_dim
    }

    /// `utt_id -> transcription` for every record that has one.
    pub fn transcriptions(&self) -> BTreeMap<String, String> {
        self.records
            .iter()
            .filter_map(|r| r.transcription.clone().map(|t| (r.utt_id.clone(), t)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn record(id: &str, tags: Option<Vec<f64>>) -> UtteranceRecord {
        UtteranceRecord {
            utt_id: id.to_string(),
            features: FeatureSource::Path(format!("{id}.vgsf")),
            transcription: None,
            tags,
            split: Split::Train,
        }
    }

    #[test]
    fn rejects_duplicates_and_bad_tags() {
        let mut c = Corpus::with_tag_dim(2);
        c.push(record("a", Some(vec![0.0, 1.0]))).unwrap();
        assert!(c.push(record("a", None)).is_err());
        assert!(c.push(record("b", Some(vec![0.5]))).is_err());
        assert!(c.push(record("c", Some(vec![0.5, 1.5]))).is_err());
        assert_eq!(c.len(), 1);
        assert!(Corpus::new().is_empty());
    }

    #[test]
    fn split_parsing() {
        assert_eq!("dev".parse::<Split>().unwrap(), Split::Dev);
        assert!("validation".parse::<Split>().is_err());
        assert_eq!(Split::Test.to_string(), "test");
    }
}
