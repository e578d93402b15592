use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::corpus::tokenize;
use crate::error::{Error, Result};
use crate::retrieval::ScoreMatrix;

/// Word frequencies estimated from a set of transcriptions.
#[derive(Debug, Clone, PartialEq)]
pub struct UnigramModel {
    counts: BTreeMap<String, u64>,
    total: u64,
    // Cumulative counts in key order, for sampling.
    cumulative: Vec<(u64, String)>,
}

impl UnigramModel {
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for text in texts {
            for tok in tokenize(text) {
                *counts.entry(tok).or_insert(0u64) += 1;
            }
        }
        Self::from_counts(counts)
    }

    pub fn from_counts(mut counts: BTreeMap<String, u64>) -> Result<Self> {
        counts.retain(|_, c| *c > 0);
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::Input("unigram model needs at least one token".into()));
        }
        let mut acc = 0;
        let cumulative = counts
            .iter()
            .map(|(w, c)| {
                acc += c;
                (acc, w.clone())
            })
            .collect();
        Ok(Self {
            counts,
            total,
            cumulative,
        })
    }

    pub fn probability(&self, word: &str) -> f64 {
        self.counts.get(word).copied().unwrap_or(0) as f64 / self.total as f64
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn types(&self) -> usize {
        self.counts.len()
    }

    /// Draw a word with probability proportional to its count.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &str {
        let r = rng.gen_range(0..self.total);
        let i = self.cumulative.partition_point(|(c, _)| *c <= r);
        &self.cumulative[i].1
    }
}

/// Every utterance gets the keyword's unigram probability.
pub fn text_prior_scores<S: AsRef<str>>(
    utt_ids: &[String],
    keywords: &[S],
    unigram: &UnigramModel,
) -> Result<ScoreMatrix> {
    let row: Vec<f64> = keywords.iter().map(|k| unigram.probability(k.as_ref())).collect();
    constant_rows(utt_ids, keywords, row)
}

/// Every utterance gets the keyword's mean training tag value.
pub fn vision_tag_prior_scores<S: AsRef<str>>(
    utt_ids: &[String],
    keywords: &[S],
    train_tags: &[&[f64]],
) -> Result<ScoreMatrix> {
    if train_tags.is_empty() {
        return Err(Error::Input(
            "tag prior needs at least one training tag vector".into(),
        ));
    }
    let mut mean = alloc::vec![0.0; keywords.len()];
    for (i, tags) in train_tags.iter().enumerate() {
        if tags.len() != keywords.len() {
            return Err(Error::dim(
                "vocabulary",
                format!(
                    "tag vector {i} has {} values for {} keywords",
                    tags.len(),
                    keywords.len()
                ),
            ));
        }
        for (m, t) in mean.iter_mut().zip(tags.iter()) {
            *m += t;
        }
    }
    let n = train_tags.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    constant_rows(utt_ids, keywords, mean)
}

fn constant_rows<S: AsRef<str>>(utt_ids: &[String], keywords: &[S], row: Vec<f64>) -> Result<ScoreMatrix> {
    let scores = utt_ids.iter().flat_map(|_| row.iter().copied()).collect();
    ScoreMatrix::new(
        utt_ids.to_vec(),
        keywords.iter().map(|k| k.as_ref().into()).collect(),
        scores,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn probabilities() {
        let u = UnigramModel::from_texts(["a dog", "a cat a"]).unwrap();
        assert_eq!(u.probability("a"), 0.6);
        assert_eq!(u.probability("zebra"), 0.0);
        assert!(UnigramModel::from_texts([""]).is_err());
    }

    #[test]
    fn sampling_follows_counts() {
        let u = UnigramModel::from_texts(["a a a b"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20_000;
        let a = (0..n).filter(|_| u.sample(&mut rng) == "a").count();
        assert!((a as f64 / n as f64 - 0.75).abs() < 0.02);
    }

    #[test]
    fn priors_are_constant_per_keyword() {
        let ids = vec!["u0".into(), "u1".into()];
        let t1 = [1.0, 0.0];
        let t2 = [0.0, 0.0];
        let s = vision_tag_prior_scores(&ids, &["x", "y"], &[&t1, &t2]).unwrap();
        assert_eq!(s.row(0), &[0.5, 0.0]);
        assert_eq!(s.row(1), s.row(0));
    }
}
