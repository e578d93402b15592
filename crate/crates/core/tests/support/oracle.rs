//! Brute-force reference implementations of the retrieval metrics, written
//! independently of the library: every rank is recomputed by counting.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use vgsr_core::corpus::{AnnotationSet, RelevanceLabels};
use vgsr_core::retrieval::ScoreMatrix;

/// A random evaluation problem.
pub struct Instance {
    pub scores: ScoreMatrix,
    /// `relevant[u][k]`.
    pub relevant: Vec<Vec<bool>>,
    /// Verbatim occurrence, `exact[u][k]`.
    pub exact: Vec<Vec<bool>>,
    pub counts: Vec<Vec<u8>>,
}

impl Instance {
    pub fn random<R: Rng>(rng: &mut R, min_utts: usize, max_utts: usize, max_kws: usize) -> Self {
        let n = rng.gen_range(min_utts..=max_utts);
        let k = rng.gen_range(1..=max_kws);
        // Coarse grids make ties common; multiples of 1/1024 keep affine
        // transforms exact.
        let levels = if rng.gen_bool(0.5) { 5 } else { 4096 };
        // Shuffled ids so that row order and tie-break order differ.
        let mut ids: Vec<String> = (0..n).map(|i| format!("utt{i:02}")).collect();
        ids.shuffle(rng);
        let mut kws: Vec<String> = (0..k).map(|i| format!("kw{i}")).collect();
        kws.shuffle(rng);
        let mut rows = Vec::new();
        let mut counts = Vec::new();
        let mut exact = Vec::new();
        for _ in 0..n {
            rows.push(
                (0..k)
                    .map(|_| rng.gen_range(0..levels) as f64 / 1024.0 - 1.0)
                    .collect::<Vec<f64>>(),
            );
            let c: Vec<u8> = (0..k).map(|_| rng.gen_range(0..=5)).collect();
            exact.push(
                c.iter()
                    .map(|&c| c >= 3 && rng.gen_bool(0.6) || c == 0 && rng.gen_bool(0.05))
                    .collect(),
            );
            counts.push(c);
        }
        let relevant = counts
            .iter()
            .map(|r| r.iter().map(|&c| c >= 3).collect())
            .collect();
        Self {
            scores: ScoreMatrix::from_rows(ids, kws, rows).unwrap(),
            relevant,
            exact,
            counts,
        }
    }

    pub fn labels(&self) -> RelevanceLabels {
        self.to_labels(&self.relevant)
    }

    pub fn exact_labels(&self) -> RelevanceLabels {
        self.to_labels(&self.exact)
    }

    fn to_labels(&self, grid: &[Vec<bool>]) -> RelevanceLabels {
        let mut l = RelevanceLabels::new(None);
        for (u, id) in self.scores.utt_ids().iter().enumerate() {
            for (k, kw) in self.scores.keywords().iter().enumerate() {
                l.set(id, kw, grid[u][k]);
            }
        }
        l
    }

    pub fn annotations(&self) -> AnnotationSet {
        let mut a = AnnotationSet::new(5, self.scores.keywords().to_vec()).unwrap();
        for (u, id) in self.scores.utt_ids().iter().enumerate() {
            for (k, kw) in self.scores.keywords().iter().enumerate() {
                a.insert(id, kw, self.counts[u][k]).unwrap();
            }
        }
        a
    }
}

/// Number of utterances ranked strictly ahead of `u` for keyword `k`.
fn rank_of(s: &ScoreMatrix, k: usize, u: usize) -> usize {
    let ids = s.utt_ids();
    (0..s.n_utts())
        .filter(|&v| s.get(v, k) > s.get(u, k) || (s.get(v, k) == s.get(u, k) && ids[v] < ids[u]))
        .count()
}

fn positives(rel: &[Vec<bool>], k: usize) -> usize {
    rel.iter().filter(|r| r[k]).count()
}

fn hits_in_top(s: &ScoreMatrix, rel: &[Vec<bool>], k: usize, depth: usize) -> usize {
    (0..s.n_utts())
        .filter(|&u| rank_of(s, k, u) < depth && rel[u][k])
        .count()
}

fn keyword_mean(s: &ScoreMatrix, rel: &[Vec<bool>], f: impl Fn(usize, usize) -> Option<f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0;
    for k in 0..s.n_keywords() {
        let p = positives(rel, k);
        if p == 0 {
            continue;
        }
        if let Some(v) = f(k, p) {
            sum += v;
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}

pub fn p_at_10(s: &ScoreMatrix, rel: &[Vec<bool>]) -> Option<f64> {
    keyword_mean(s, rel, |k, _| Some(hits_in_top(s, rel, k, 10) as f64 / 10.0))
}

pub fn p_at_n(s: &ScoreMatrix, rel: &[Vec<bool>]) -> Option<f64> {
    keyword_mean(s, rel, |k, p| Some(hits_in_top(s, rel, k, p) as f64 / p as f64))
}

/// Sweep "accept if score >= t" over every distinct score from the top,
/// starting from accepting nothing, and interpolate where false acceptance
/// first reaches false rejection.
fn keyword_eer(s: &ScoreMatrix, rel: &[Vec<bool>], k: usize) -> Option<f64> {
    let pos = positives(rel, k);
    let neg = s.n_utts() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    let mut thresholds: Vec<f64> = (0..s.n_utts()).map(|u| s.get(u, k)).collect();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    let mut points = vec![(0.0, 1.0)];
    for t in thresholds {
        let fa = (0..s.n_utts())
            .filter(|&u| !rel[u][k] && s.get(u, k) >= t)
            .count() as f64
            / neg as f64;
        let fr = (0..s.n_utts()).filter(|&u| rel[u][k] && s.get(u, k) < t).count() as f64 / pos as f64;
        points.push((fa, fr));
    }
    for w in points.windows(2) {
        let ((a0, r0), (a1, r1)) = (w[0], w[1]);
        if a1 - r1 >= 0.0 {
            let d0 = a0 - r0;
            let d1 = a1 - r1;
            return Some(a0 + (a1 - a0) * (-d0) / (d1 - d0));
        }
    }
    unreachable!()
}

pub fn eer(s: &ScoreMatrix, rel: &[Vec<bool>]) -> Option<f64> {
    keyword_mean(s, rel, |k, _| keyword_eer(s, rel, k))
}

/// Pooled ranking position: score desc, then utt_id, then keyword.
fn pooled_rank(s: &ScoreMatrix, u: usize, k: usize) -> usize {
    let (ids, kws) = (s.utt_ids(), s.keywords());
    let mut ahead = 0;
    for v in 0..s.n_utts() {
        for j in 0..s.n_keywords() {
            let (a, b) = (s.get(v, j), s.get(u, k));
            if a > b || (a == b && (&ids[v], &kws[j]) < (&ids[u], &kws[k])) {
                ahead += 1;
            }
        }
    }
    ahead
}

pub fn average_precision(s: &ScoreMatrix, rel: &[Vec<bool>]) -> Option<f64> {
    let mut relevant_ranks = Vec::new();
    for u in 0..s.n_utts() {
        for k in 0..s.n_keywords() {
            if rel[u][k] {
                relevant_ranks.push(pooled_rank(s, u, k) + 1);
            }
        }
    }
    if relevant_ranks.is_empty() {
        return None;
    }
    let total: f64 = relevant_ranks
        .iter()
        .map(|&r| relevant_ranks.iter().filter(|&&q| q <= r).count() as f64 / r as f64)
        .sum();
    Some(total / relevant_ranks.len() as f64)
}

fn mid_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let below = x.iter().filter(|&&w| w < v).count() as f64;
            let equal = x.iter().filter(|&&w| w == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn spearman(s: &ScoreMatrix, counts: &[Vec<u8>]) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for u in 0..s.n_utts() {
        for k in 0..s.n_keywords() {
            xs.push(s.get(u, k));
            ys.push(counts[u][k] as f64);
        }
    }
    let (rx, ry) = (mid_ranks(&xs), mid_ranks(&ys));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}

/// `(total, exact, semantic)`.
pub fn p_at_n_star(s: &ScoreMatrix, rel: &[Vec<bool>], exact: &[Vec<bool>]) -> Option<(f64, f64, f64)> {
    let (mut n, mut ce, mut cs) = (0usize, 0usize, 0usize);
    for k in 0..s.n_keywords() {
        let p = positives(rel, k);
        n += p;
        for u in 0..s.n_utts() {
            if rank_of(s, k, u) < p && rel[u][k] {
                if exact[u][k] {
                    ce += 1;
                } else {
                    cs += 1;
                }
            }
        }
    }
    (n > 0).then(|| {
        let n = n as f64;
        ((ce + cs) as f64 / n, ce as f64 / n, cs as f64 / n)
    })
}

/// Transcriptions in which each keyword occurs exactly when `exact` says so.
pub fn transcriptions(s: &ScoreMatrix, exact: &[Vec<bool>]) -> BTreeMap<String, String> {
    s.utt_ids()
        .iter()
        .enumerate()
        .map(|(u, id)| {
            let words: Vec<&str> = s
                .keywords()
                .iter()
                .enumerate()
                .filter(|&(k, _)| exact[u][k])
                .map(|(_, w)| w.as_str())
                .collect();
            (id.clone(), format!("the {}", words.join(" and ")))
        })
        .collect()
}
