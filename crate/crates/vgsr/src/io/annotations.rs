use std::path::Path;

use vgsr_core::corpus::{AnnotationSet, DEFAULT_ANNOTATORS};

use super::write_bytes;
use crate::error::{Error, Result};

#[derive(Debug, serde::Deserialize, serde::Serialize)]
struct Row {
    utt_id: String,
    keyword: String,
    count: u8,
}

/// Read `utt_id,keyword,count` rows (with header). Keywords are taken in
/// order of first appearance.
pub fn read_annotations(path: &Path) -> Result<AnnotationSet> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::format(path, e.to_string()))?;
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        rows.push(row.map_err(|e| Error::format(path, format!("row {}: {e}", i + 1)))?);
    }
    let mut keywords: Vec<String> = Vec::new();
    for r in &rows {
        if !keywords.contains(&r.keyword) {
            keywords.push(r.keyword.clone());
        }
    }
    let mut set = AnnotationSet::new(DEFAULT_ANNOTATORS, keywords)?;
    for (i, r) in rows.iter().enumerate() {
        set.insert(&r.utt_id, &r.keyword, r.count)
            .map_err(|e| Error::format(path, format!("row {}: {e}", i + 1)))?;
    }
    Ok(set)
}

/// Rows are grouped by keyword in the set's keyword order, so reading the
/// file back reproduces that order.
pub fn write_annotations(path: &Path, set: &AnnotationSet) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let utts = set.utterances();
    for kw in set.keywords() {
        for utt in &utts {
            if let Some(count) = set.count(utt, kw) {
                w.serialize(Row {
                    utt_id: utt.to_string(),
                    keyword: kw.clone(),
                    count,
                })
                .map_err(|e| Error::format(path, e.to_string()))?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::format(path, e.to_string()))?;
    write_bytes(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "utt_id,keyword,count\nu1,dog,3\nu1,cat,0\nu2,dog,5\n").unwrap();
        let a = read_annotations(&p).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.count("u2", "dog"), Some(5));
        let q = dir.path().join("b.csv");
        write_annotations(&q, &a).unwrap();
        assert_eq!(read_annotations(&q).unwrap(), a);
        std::fs::write(&p, "utt_id,keyword,count\nu1,dog,6\n").unwrap();
        assert!(read_annotations(&p).unwrap_err().to_string().contains("row 1"));
        std::fs::write(&p, "utt_id,keyword,count\nu1,dog,x\n").unwrap();
        assert!(read_annotations(&p).is_err());
    }
}
