use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::text::tokenize;
use crate::error::{Error, Result};

/// Ordered keyword list; position defines the target-vector index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    stopwords: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new(words: Vec<String>, stopwords: Vec<String>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, w) in words.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::Input(format!("empty vocabulary entry at index {i}")));
            }
            if stopwords.contains(w) {
                return Err(Error::Input(format!("stop word {w:?} in vocabulary")));
            }
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate vocabulary word {w:?}")));
            }
        }
        Ok(Self {
            words,
            stopwords,
            index,
        })
    }

    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        Self::new(words.iter().map(|w| w.as_ref().to_string()).collect(), Vec::new())
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn stopwords(&self) -> &[String] {
        &self.stopwords
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }
}

/// The `w` most frequent non-stop-word tokens; ties broken alphabetically.
pub fn build_vocabulary<'a>(
    transcriptions: impl IntoIterator<Item = &'a str>,
    w: usize,
    stopwords: &[&str],
) -> Result<Vocabulary> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for text in transcriptions {
        for tok in tokenize(text) {
            if !stopwords.contains(&tok.as_str()) {
                *counts.entry(tok).or_default() += 1;
            }
        }
    }
    if w == 0 || counts.len() < w {
        return Err(Error::Usage(format!(
            "asked for {w} vocabulary words but only {} distinct content words exist",
            counts.len()
        )));
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(w);
    Vocabulary::new(
        ranked.into_iter().map(|(word, _)| word).collect(),
        stopwords.iter().map(|s| s.to_string()).collect(),
    )
}

/// Multi-hot indicator of which vocabulary words occur in `transcription`.
pub fn bow_targets(transcription: &str, vocab: &Vocabulary) -> Vec<f64> {
    let mut y = vec![0.0; vocab.len()];
    for tok in tokenize(transcription) {
        if let Some(i) = vocab.index_of(&tok) {
            y[i] = 1.0;
        }
    }
    y
}
