use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::tokenize;
use crate::error::{Error, Result};
use crate::math;

/// Unit-normalised word vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct WordEmbeddings {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl WordEmbeddings {
    pub fn new(vectors: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let dim = match vectors.values().next() {
            Some(v) if !v.is_empty() => v.len(),
            _ => {
                return Err(Error::Input(
                    "embeddings need at least one non-empty vector".into(),
                ))
            }
        };
        let mut out = BTreeMap::new();
        for (word, mut v) in vectors {
            if v.len() != dim {
                return Err(Error::dim(
                    "embedding",
                    format!("{word:?} has {} values, expected {dim}", v.len()),
                ));
            }
            let norm = math::sqrt(v.iter().map(|x| x * x).sum());
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::Numerical(format!(
                    "embedding for {word:?} has norm {norm}"
                )));
            }
            v.iter_mut().for_each(|x| *x /= norm);
            out.insert(word, v);
        }
        Ok(Self { dim, vectors: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vectors.iter().map(|(w, v)| (w.as_str(), v.as_slice()))
    }

    /// Mean of the known tokens' vectors; `None` when no token is known.
    pub fn sentence_vector(&self, text: &str) -> Option<Vec<f64>> {
        let mut sum = alloc::vec![0.0; self.dim];
        let mut n = 0;
        for tok in tokenize(text) {
            if let Some(v) = self.vectors.get(&tok) {
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
                n += 1;
            }
        }
        (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
    }

    /// Cosine between the sentence vector and the keyword vector; 0 when the
    /// text has no known token.
    pub fn sentence_score(&self, text: &str, keyword: &str) -> Result<f64> {
        let k = self
            .get(keyword)
            .ok_or_else(|| Error::lookup("embedding", keyword))?;
        Ok(match self.sentence_vector(text) {
            Some(s) => cosine(&s, k),
            None => 0.0,
        })
    }
}

pub(crate) fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = math::sqrt(a.iter().map(|x| x * x).sum());
    let nb = math::sqrt(b.iter().map(|x| x * x).sum());
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}
