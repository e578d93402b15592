use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const DEFAULT_ANNOTATORS: u8 = 5;
/// Minimum number of annotators that must select a keyword for the pair to
/// count as relevant.
pub const DEFAULT_THRESHOLD: u8 = 3;

/// Number of annotators (out of `annotators`) that selected each
/// `(utterance, keyword)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSet {
    annotators: u8,
    keywords: Vec<String>,
    counts: BTreeMap<(String, String), u8>,
}

impl AnnotationSet {
    pub fn new(annotators: u8, keywords: Vec<String>) -> Result<Self> {
        if annotators == 0 {
            return Err(Error::Input("at least one annotator is required".into()));
        }
        let unique: BTreeSet<&String> = keywords.iter().collect();
        if unique.len() != keywords.len() {
            return Err(Error::Input("duplicate keywords in annotation set".into()));
        }
        Ok(Self {
            annotators,
            keywords,
            counts: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, utt_id: &str, keyword: &str, count: u8) -> Result<()> {
        if count > self.annotators {
            return Err(Error::Input(format!(
                "count {count} for ({utt_id}, {keyword}) exceeds {} annotators",
                self.annotators
            )));
        }
        if !self.keywords.iter().any(|k| k == keyword) {
            return Err(Error::lookup("keyword", keyword));
        }
        self.counts.insert((utt_id.into(), keyword.into()), count);
        Ok(())
    }

    pub fn annotators(&self) -> u8 {
        self.annotators
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    pub fn count(&self, utt_id: &str, keyword: &str) -> Option<u8> {
        self.counts.get(&(utt_id.into(), keyword.into())).copied()
    }

    /// `((utt_id, keyword), count)` in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = (&(String, String), u8)> {
        self.counts.iter().map(|(k, &c)| (k, c))
    }

    pub fn utterances(&self) -> BTreeSet<&str> {
        self.counts.keys().map(|(u, _)| u.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Drop keywords (and their counts), e.g. those with poor agreement.
    pub fn exclude_keywords<S: AsRef<str>>(&mut self, excluded: &[S]) {
        let drop = |k: &str| excluded.iter().any(|e| e.as_ref() == k);
        self.keywords.retain(|k| !drop(k));
        self.counts.retain(|(_, k), _| !drop(k));
    }
}

/// Hard relevance decisions per `(utterance, keyword)`; absent pairs are
/// irrelevant.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelevanceLabels {
    /// Annotator threshold used, when derived from counts.
    pub threshold: Option<u8>,
    labels: BTreeMap<(String, String), bool>,
}

impl RelevanceLabels {
    pub fn new(threshold: Option<u8>) -> Self {
        Self {
            threshold,
            labels: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, utt_id: &str, keyword: &str, relevant: bool) {
        self.labels.insert((utt_id.into(), keyword.into()), relevant);
    }

    pub fn is_relevant(&self, utt_id: &str, keyword: &str) -> bool {
        self.labels
            .get(&(utt_id.into(), keyword.into()))
            .copied()
            .unwrap_or(false)
    }

    pub fn get(&self, utt_id: &str, keyword: &str) -> Option<bool> {
        self.labels.get(&(utt_id.into(), keyword.into())).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(String, String), bool)> {
        self.labels.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Verbatim-occurrence labels: relevant when the keyword is a token of
    /// the transcription.
    pub fn exact_from_transcriptions<S: AsRef<str>>(
        transcriptions: &BTreeMap<String, String>,
        keywords: &[S],
    ) -> Self {
        let mut out = Self::new(None);
        for (utt, text) in transcriptions {
            let tokens = super::text::tokenize(text);
            for kw in keywords {
                let kw = kw.as_ref();
                out.set(utt, kw, tokens.iter().any(|t| t == kw));
            }
        }
        out
    }
}

/// Majority labelling: relevant iff `count >= threshold`.
pub fn aggregate_annotations(annotations: &AnnotationSet, threshold: u8) -> RelevanceLabels {
    let mut out = RelevanceLabels::new(Some(threshold));
    for ((utt, kw), count) in annotations.iter() {
        out.set(utt, kw, count >= threshold);
    }
    out
}

/// Mean fraction of annotators agreeing with the hard label, over all
/// annotated pairs.
pub fn annotator_agreement(annotations: &AnnotationSet, labels: &RelevanceLabels) -> Result<f64> {
    if annotations.is_empty() {
        return Err(Error::Undefined("agreement over an empty annotation set".into()));
    }
    let a = annotations.annotators() as f64;
    let total: f64 = annotations
        .iter()
        .map(|((utt, kw), count)| {
            let agreeing = if labels.is_relevant(utt, kw) {
                count as f64
            } else {
                a - count as f64
            };
            agreeing / a
        })
        .sum();
    Ok(total / annotations.len() as f64)
}

/// Proportion of pairs selected by exactly `0..=A` annotators.
pub fn count_distribution(annotations: &AnnotationSet) -> Vec<f64> {
    let mut hist = vec![0usize; annotations.annotators() as usize + 1];
    for (_, c) in annotations.iter() {
        hist[c as usize] += 1;
    }
    let n = annotations.len().max(1) as f64;
    hist.into_iter().map(|h| h as f64 / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn uniform(count: u8, n: usize) -> AnnotationSet {
        let mut a = AnnotationSet::new(5, vec!["kw".to_string()]).unwrap();
        for i in 0..n {
            a.insert(&format!("u{i}"), "kw", count).unwrap();
        }
        a
    }

    #[test]
    fn majority_threshold() {
        let mut a = AnnotationSet::new(5, vec!["dog".into()]).unwrap();
        a.insert("u0", "dog", 3).unwrap();
        a.insert("u1", "dog", 2).unwrap();
        a.insert("u2", "dog", 0).unwrap();
        let l = aggregate_annotations(&a, 3);
        assert!(l.is_relevant("u0", "dog"));
        assert!(!l.is_relevant("u1", "dog"));
        assert!(!l.is_relevant("u2", "dog"));
        assert!(!l.is_relevant("missing", "dog"));
    }

    #[test]
    fn agreement_edge_cases() {
        let all5 = uniform(5, 10);
        assert_eq!(
            annotator_agreement(&all5, &aggregate_annotations(&all5, 3)).unwrap(),
            1.0
        );
        let all2 = uniform(2, 10);
        let ag = annotator_agreement(&all2, &aggregate_annotations(&all2, 3)).unwrap();
        assert!((ag - 0.6).abs() < 1e-12);
    }

    #[test]
    fn insert_validation() {
        let mut a = AnnotationSet::new(5, vec!["dog".into()]).unwrap();
        assert!(a.insert("u", "dog", 6).is_err());
        assert!(matches!(a.insert("u", "cat", 1), Err(Error::Lookup { .. })));
        assert!(AnnotationSet::new(5, vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn distribution_sums_to_one() {
        let mut a = AnnotationSet::new(5, vec!["k".into()]).unwrap();
        for c in 0..=5u8 {
            for j in 0..3 {
                a.insert(&format!("u{c}_{j}"), "k", c).unwrap();
            }
        }
        let d = count_distribution(&a);
        assert!(d.iter().all(|&p| (p - 1.0 / 6.0).abs() < 1e-12));
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exclusion_drops_counts() {
        let mut a = AnnotationSet::new(5, vec!["a".into(), "b".into()]).unwrap();
        a.insert("u", "a", 1).unwrap();
        a.insert("u", "b", 1).unwrap();
        a.exclude_keywords(&["b"]);
        assert_eq!(a.keywords(), ["a"]);
        assert_eq!(a.len(), 1);
    }
}
