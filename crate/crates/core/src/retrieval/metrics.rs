use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::ScoreMatrix;
use crate::corpus::{AnnotationSet, RelevanceLabels};
use crate::error::{Error, Result};
use crate::math;

/// Utterance indices for keyword column `kw`, best first; ties by utt_id.
pub fn rank_utterances(scores: &ScoreMatrix, kw: usize) -> Vec<usize> {
    let ids = scores.utt_ids();
    let mut order: Vec<usize> = (0..scores.n_utts()).collect();
    order.sort_by(|&a, &b| {
        scores
            .get(b, kw)
            .total_cmp(&scores.get(a, kw))
            .then_with(|| ids[a].cmp(&ids[b]))
    });
    order
}

/// All `(utt, kw)` index pairs, best first; ties by utt_id then keyword.
pub fn rank_pairs(scores: &ScoreMatrix) -> Vec<(usize, usize)> {
    let ids = scores.utt_ids();
    let kws = scores.keywords();
    let mut pairs: Vec<(usize, usize)> = (0..scores.n_utts())
        .flat_map(|u| (0..scores.n_keywords()).map(move |k| (u, k)))
        .collect();
    pairs.sort_by(|&(ua, ka), &(ub, kb)| {
        scores
            .get(ub, kb)
            .total_cmp(&scores.get(ua, ka))
            .then_with(|| ids[ua].cmp(&ids[ub]))
            .then_with(|| kws[ka].cmp(&kws[kb]))
    });
    pairs
}

/// Dense relevance aligned with `scores`, row-major.
pub(super) fn relevance_grid(scores: &ScoreMatrix, labels: &RelevanceLabels) -> Vec<bool> {
    let mut grid = Vec::with_capacity(scores.n_utts() * scores.n_keywords());
    for u in scores.utt_ids() {
        for k in scores.keywords() {
            grid.push(labels.is_relevant(u, k));
        }
    }
    grid
}

pub(super) fn positives(grid: &[bool], n_kw: usize, kw: usize) -> usize {
    grid.iter().skip(kw).step_by(n_kw).filter(|&&r| r).count()
}

pub(super) fn precision_at(scores: &ScoreMatrix, grid: &[bool], kw: usize, k: usize) -> f64 {
    let n_kw = scores.n_keywords();
    let hits = rank_utterances(scores, kw)
        .into_iter()
        .take(k)
        .filter(|&u| grid[u * n_kw + kw])
        .count();
    hits as f64 / k as f64
}

/// Equal error rate for one keyword column; `None` without both classes.
pub(super) fn column_eer(scores: &ScoreMatrix, grid: &[bool], kw: usize) -> Option<f64> {
    let n_kw = scores.n_keywords();
    let pos = positives(grid, n_kw, kw);
    let neg = scores.n_utts() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    let order = rank_utterances(scores, kw);
    let (mut tp, mut fp) = (0usize, 0usize);
    let (mut fa0, mut fr0) = (0.0, 1.0);
    let mut i = 0;
    while i < order.len() {
        let s = scores.get(order[i], kw);
        while i < order.len() && scores.get(order[i], kw) == s {
            if grid[order[i] * n_kw + kw] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let fa = fp as f64 / neg as f64;
        let fr = (pos - tp) as f64 / pos as f64;
        if fa >= fr {
            let denom = (fa - fa0) - (fr - fr0);
            let t = (fr0 - fa0) / denom;
            return Some(fa0 + t * (fa - fa0));
        }
        fa0 = fa;
        fr0 = fr;
    }
    unreachable!("the last operating point accepts everything")
}

/// Equal error rate for a single keyword.
pub fn keyword_eer(scores: &ScoreMatrix, labels: &RelevanceLabels, keyword: &str) -> Result<f64> {
    let kw = scores.keyword_index(keyword)?;
    column_eer(scores, &relevance_grid(scores, labels), kw).ok_or_else(|| {
        Error::Undefined(format!(
            "keyword {keyword:?} needs relevant and irrelevant utterances"
        ))
    })
}

fn mean_over_keywords(
    scores: &ScoreMatrix,
    labels: &RelevanceLabels,
    metric: &str,
    f: impl Fn(&[bool], usize, usize) -> Option<f64>,
) -> Result<f64> {
    let grid = relevance_grid(scores, labels);
    let n_kw = scores.n_keywords();
    let values: Vec<f64> = (0..n_kw)
        .filter_map(|kw| {
            let pos = positives(&grid, n_kw, kw);
            if pos == 0 {
                None
            } else {
                f(&grid, kw, pos)
            }
        })
        .collect();
    if values.is_empty() {
        return Err(Error::Undefined(format!(
            "{metric}: no keyword has a relevant utterance"
        )));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Mean precision of the ten highest-scoring utterances per keyword.
pub fn p_at_10(scores: &ScoreMatrix, labels: &RelevanceLabels) -> Result<f64> {
    if scores.n_utts() < 10 {
        return Err(Error::Usage(format!(
            "P@10 needs at least 10 utterances, got {}",
            scores.n_utts()
        )));
    }
    mean_over_keywords(scores, labels, "P@10", |g, kw, _| {
        Some(precision_at(scores, g, kw, 10))
    })
}

/// Mean precision at N, N being each keyword's number of relevant utterances.
pub fn p_at_n(scores: &ScoreMatrix, labels: &RelevanceLabels) -> Result<f64> {
    mean_over_keywords(scores, labels, "P@N", |g, kw, n| {
        Some(precision_at(scores, g, kw, n))
    })
}

/// Mean per-keyword equal error rate. Keywords for which every utterance
/// is relevant are skipped along with those without any.
pub fn eer(scores: &ScoreMatrix, labels: &RelevanceLabels) -> Result<f64> {
    mean_over_keywords(scores, labels, "EER", |g, kw, _| column_eer(scores, g, kw))
}

/// Average precision over the pooled ranking of all pairs.
pub fn average_precision(scores: &ScoreMatrix, labels: &RelevanceLabels) -> Result<f64> {
    let grid = relevance_grid(scores, labels);
    let n_kw = scores.n_keywords();
    let total = grid.iter().filter(|&&r| r).count();
    if total == 0 {
        return Err(Error::Undefined(
            "average precision without relevant pairs".into(),
        ));
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (rank, (u, k)) in rank_pairs(scores).into_iter().enumerate() {
        if grid[u * n_kw + k] {
            hits += 1;
            sum += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(sum / total as f64)
}

/// 1-based ranks with ties sharing their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / math::sqrt(sxx * syy))
    }
}

/// Spearman correlation between scores and annotator counts over all pairs.
pub fn spearman_rho(scores: &ScoreMatrix, counts: &AnnotationSet) -> Result<f64> {
    let mut s = Vec::with_capacity(scores.n_utts() * scores.n_keywords());
    let mut c = Vec::with_capacity(s.capacity());
    for (u, utt) in scores.utt_ids().iter().enumerate() {
        for (k, kw) in scores.keywords().iter().enumerate() {
            let count = counts
                .count(utt, kw)
                .ok_or_else(|| Error::Usage(format!("no annotator count for ({utt}, {kw})")))?;
            s.push(scores.get(u, k));
            c.push(count as f64);
        }
    }
    if s.len() < 2 {
        return Err(Error::Undefined("Spearman's rho needs at least two pairs".into()));
    }
    pearson(&average_ranks(&s), &average_ranks(&c))
        .ok_or_else(|| Error::Undefined("Spearman's rho with constant scores or counts".into()))
}

/// Split of P@N hits into verbatim and purely semantic matches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionBreakdown {
    pub total: f64,
    pub exact: f64,
    pub semantic: f64,
}

/// P@N pooled over keywords, with every correct hit attributed either to a
/// verbatim occurrence (`exact` labels) or to semantic relevance only.
pub fn p_at_n_star(
    scores: &ScoreMatrix,
    labels: &RelevanceLabels,
    exact: &RelevanceLabels,
) -> Result<PrecisionBreakdown> {
    let grid = relevance_grid(scores, labels);
    let n_kw = scores.n_keywords();
    let (mut n_total, mut c_exact, mut c_sem) = (0usize, 0usize, 0usize);
    for kw in 0..n_kw {
        let n = positives(&grid, n_kw, kw);
        n_total += n;
        for u in rank_utterances(scores, kw).into_iter().take(n) {
            if !grid[u * n_kw + kw] {
                continue;
            }
            let utt = &scores.utt_ids()[u];
            let keyword = &scores.keywords()[kw];
            match exact.get(utt, keyword) {
                Some(true) => c_exact += 1,
                Some(false) => c_sem += 1,
                None => {
                    return Err(Error::Usage(format!(
                        "no transcription-based label for ({utt}, {keyword})"
                    )))
                }
            }
        }
    }
    if n_total == 0 {
        return Err(Error::Undefined("P@N* without relevant pairs".into()));
    }
    let n = n_total as f64;
    Ok(PrecisionBreakdown {
        total: (c_exact + c_sem) as f64 / n,
        exact: c_exact as f64 / n,
        semantic: c_sem as f64 / n,
    })
}
