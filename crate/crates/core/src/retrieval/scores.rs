use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relevance scores for `utterances x keywords`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    utt_ids: Vec<String>,
    keywords: Vec<String>,
    scores: Vec<f64>,
}

fn check_unique(items: &[String], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for item in items {
        if !seen.insert(item) {
            return Err(Error::Input(format!("duplicate {what} {item:?} in score matrix")));
        }
    }
    Ok(())
}

impl ScoreMatrix {
    pub fn new(utt_ids: Vec<String>, keywords: Vec<String>, scores: Vec<f64>) -> Result<Self> {
        check_unique(&utt_ids, "utterance")?;
        check_unique(&keywords, "keyword")?;
        if scores.len() != utt_ids.len() * keywords.len() {
            return Err(Error::dim(
                "scores",
                format!(
                    "{} values for {} utterances x {} keywords",
                    scores.len(),
                    utt_ids.len(),
                    keywords.len()
                ),
            ));
        }
        if let Some(i) = scores.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite score for ({}, {})",
                utt_ids[i / keywords.len()],
                keywords[i % keywords.len()]
            )));
        }
        Ok(Self {
            utt_ids,
            keywords,
            scores,
        })
    }

    pub fn from_rows(utt_ids: Vec<String>, keywords: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != keywords.len()) {
            return Err(Error::dim(
                "scores",
                format!("row {i} has {} values for {} keywords", r.len(), keywords.len()),
            ));
        }
        if rows.len() != utt_ids.len() {
            return Err(Error::dim(
                "scores",
                format!("{} rows for {} utterances", rows.len(), utt_ids.len()),
            ));
        }
        Self::new(utt_ids, keywords, rows.concat())
    }

    pub fn utt_ids(&self) -> &[String] {
        &self.utt_ids
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    pub fn n_utts(&self) -> usize {
        self.utt_ids.len()
    }

    pub fn n_keywords(&self) -> usize {
        self.keywords.len()
    }

    pub fn get(&self, utt: usize, kw: usize) -> f64 {
        self.scores[utt * self.keywords.len() + kw]
    }

    pub fn row(&self, utt: usize) -> &[f64] {
        let k = self.keywords.len();
        &self.scores[utt * k..(utt + 1) * k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n_utts()).map(|u| self.row(u))
    }

    pub fn column(&self, kw: usize) -> Vec<f64> {
        (0..self.n_utts()).map(|u| self.get(u, kw)).collect()
    }

    pub fn keyword_index(&self, keyword: &str) -> Result<usize> {
        self.keywords
            .iter()
            .position(|k| k == keyword)
            .ok_or_else(|| Error::lookup("keyword", keyword))
    }

    /// Apply `f` to every score.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.utt_ids.clone(),
            self.keywords.clone(),
            self.scores.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Keep only the utterances for which `keep` holds, in the same order.
    pub fn filter_utterances(&self, keep: impl Fn(&str) -> bool) -> Self {
        let mut ids = Vec::new();
        let mut scores = Vec::new();
        for (u, id) in self.utt_ids.iter().enumerate() {
            if keep(id) {
                ids.push(id.clone());
                scores.extend_from_slice(self.row(u));
            }
        }
        Self {
            utt_ids: ids,
            keywords: self.keywords.clone(),
            scores,
        }
    }

    /// Restrict (and reorder) columns to `keywords`.
    pub fn select_keywords<S: AsRef<str>>(&self, keywords: &[S]) -> Result<Self> {
        let idx: Vec<usize> = keywords
            .iter()
            .map(|k| self.keyword_index(k.as_ref()))
            .collect::<Result<_>>()?;
        let scores = (0..self.n_utts())
            .flat_map(|u| idx.iter().map(move |&k| (u, k)))
            .map(|(u, k)| self.get(u, k))
            .collect();
        Self::new(
            self.utt_ids.clone(),
            keywords.iter().map(|k| k.as_ref().into()).collect(),
            scores,
        )
    }
}
