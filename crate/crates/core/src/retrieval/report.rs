use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::metrics::{column_eer, positives, precision_at, relevance_grid};
use super::{average_precision, p_at_n_star, spearman_rho, ScoreMatrix};
use crate::corpus::{AnnotationSet, RelevanceLabels};
use crate::error::{Error, Result};

/// Which hard labels define relevance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Keyword occurs verbatim in the transcription.
    Exact,
    /// Majority of annotators marked the pair relevant.
    Semantic,
}

/// Ground truth available for an evaluation run.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalInputs<'a> {
    pub semantic_labels: Option<&'a RelevanceLabels>,
    pub counts: Option<&'a AnnotationSet>,
    pub transcriptions: Option<&'a BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordMetrics {
    pub keyword: String,
    pub n_relevant: usize,
    pub p_at_10: Option<f64>,
    pub p_at_n: Option<f64>,
    pub eer: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mode: EvalMode,
    pub n_utterances: usize,
    pub n_keywords: usize,
    pub p_at_10: Option<f64>,
    pub p_at_n: f64,
    pub eer: Option<f64>,
    pub average_precision: f64,
    pub spearman_rho: Option<f64>,
    pub p_at_n_star: Option<f64>,
    pub p_at_n_star_exact: Option<f64>,
    pub p_at_n_star_semantic: Option<f64>,
    pub per_keyword: Vec<KeywordMetrics>,
    /// Keywords without a relevant utterance, left out of every mean.
    pub excluded_keywords: Vec<String>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Every metric for `scores` under `mode`. Spearman's rho needs counts and
/// P@N* needs transcriptions; each is left out when its input is absent.
pub fn evaluate_all(scores: &ScoreMatrix, inputs: EvalInputs<'_>, mode: EvalMode) -> Result<MetricReport> {
    let exact = inputs
        .transcriptions
        .map(|t| RelevanceLabels::exact_from_transcriptions(t, scores.keywords()));
    let labels = match mode {
        EvalMode::Exact => exact
            .as_ref()
            .ok_or_else(|| Error::Usage("exact evaluation needs transcriptions".into()))?,
        EvalMode::Semantic => inputs
            .semantic_labels
            .ok_or_else(|| Error::Usage("semantic evaluation needs relevance labels".into()))?,
    };

    let grid = relevance_grid(scores, labels);
    let n_kw = scores.n_keywords();
    let enough_for_p10 = scores.n_utts() >= 10;
    let mut per_keyword = Vec::with_capacity(n_kw);
    let mut excluded = Vec::new();
    for (kw, keyword) in scores.keywords().iter().enumerate() {
        let n = positives(&grid, n_kw, kw);
        if n == 0 {
            excluded.push(keyword.clone());
        }
        per_keyword.push(KeywordMetrics {
            keyword: keyword.clone(),
            n_relevant: n,
            p_at_10: (n > 0 && enough_for_p10).then(|| precision_at(scores, &grid, kw, 10)),
            p_at_n: (n > 0).then(|| precision_at(scores, &grid, kw, n)),
            eer: column_eer(scores, &grid, kw),
        });
    }
    let p_at_n = mean(per_keyword.iter().filter_map(|k| k.p_at_n))
        .ok_or_else(|| Error::Undefined("no keyword has a relevant utterance".into()))?;

    let star = exact
        .as_ref()
        .map(|ex| p_at_n_star(scores, labels, ex))
        .transpose()?;

    Ok(MetricReport {
        mode,
        n_utterances: scores.n_utts(),
        n_keywords: n_kw,
        p_at_10: mean(per_keyword.iter().filter_map(|k| k.p_at_10)),
        p_at_n,
        eer: mean(per_keyword.iter().filter_map(|k| k.eer)),
        average_precision: average_precision(scores, labels)?,
        spearman_rho: inputs.counts.map(|c| spearman_rho(scores, c)).transpose()?,
        p_at_n_star: star.map(|b| b.total),
        p_at_n_star_exact: star.map(|b| b.exact),
        p_at_n_star_semantic: star.map(|b| b.semantic),
        per_keyword,
        excluded_keywords: excluded,
    })
}
