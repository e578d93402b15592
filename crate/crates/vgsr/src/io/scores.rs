use std::path::Path;

use serde::{Deserialize, Serialize};
use vgsr_core::retrieval::{MetricReport, ScoreMatrix};

use super::{read_text, write_bytes};
use crate::error::{Error, Result};

/// Where an artifact came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Producing system, e.g. `model`, `tags`, `baseline:wup`.
    pub system: String,
    pub seed: Option<u64>,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoresFile {
    pub provenance: Provenance,
    pub utt_ids: Vec<String>,
    pub keywords: Vec<String>,
    /// One row per utterance.
    pub scores: Vec<Vec<f64>>,
}

impl ScoresFile {
    pub fn new(provenance: Provenance, matrix: &ScoreMatrix) -> Self {
        Self {
            provenance,
            utt_ids: matrix.utt_ids().to_vec(),
            keywords: matrix.keywords().to_vec(),
            scores: matrix.rows().map(<[f64]>::to_vec).collect(),
        }
    }

    pub fn matrix(&self) -> vgsr_core::Result<ScoreMatrix> {
        ScoreMatrix::from_rows(self.utt_ids.clone(), self.keywords.clone(), self.scores.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub provenance: Provenance,
    pub report: MetricReport,
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("artifacts serialize");
    bytes.push(b'\n');
    bytes
}

pub fn write_scores(path: &Path, scores: &ScoresFile) -> Result<()> {
    write_bytes(path, &to_json(scores))
}

pub fn read_scores(path: &Path) -> Result<ScoresFile> {
    let file: ScoresFile =
        serde_json::from_str(&read_text(path)?).map_err(|e| Error::format(path, e.to_string()))?;
    file.matrix().map_err(|e| Error::format(path, e.to_string()))?;
    Ok(file)
}

pub fn write_report(path: &Path, report: &ReportFile) -> Result<()> {
    write_bytes(path, &to_json(report))
}

/// Per-keyword rows: `keyword,n_relevant,p_at_10,p_at_n,eer`; undefined
/// values are left empty.
pub fn write_report_csv(path: &Path, report: &MetricReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let wrap = |e: csv::Error| Error::format(path, e.to_string());
    w.write_record(["keyword", "n_relevant", "p_at_10", "p_at_n", "eer"])
        .map_err(wrap)?;
    for k in &report.per_keyword {
        w.write_record([
            k.keyword.clone(),
            k.n_relevant.to_string(),
            opt(k.p_at_10),
            opt(k.p_at_n),
            opt(k.eer),
        ])
        .map_err(wrap)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::format(path, e.to_string()))?;
    write_bytes(path, &bytes)
}
