//! Ranking utterances per keyword and scoring those rankings.
//!
//! Every system, neural or not, is evaluated through a [`ScoreMatrix`].
//! Per-keyword metrics ([`p_at_10`], [`p_at_n`], [`eer`]) are averaged over
//! keywords with at least one relevant utterance; [`average_precision`] and
//! [`spearman_rho`] pool all `(utterance, keyword)` pairs.

mod metrics;
mod report;
mod scores;

pub use metrics::{
    average_precision, eer, keyword_eer, p_at_10, p_at_n, p_at_n_star, rank_pairs, rank_utterances,
    spearman_rho, PrecisionBreakdown,
};
pub use report::{evaluate_all, EvalInputs, EvalMode, KeywordMetrics, MetricReport};
pub use scores::ScoreMatrix;
