use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use vgsr_core::baselines::{Taxonomy, WordEmbeddings, ROOT_MARKER};
use vgsr_core::corpus::Vocabulary;

use super::{read_text, write_bytes};
use crate::error::{Error, Result};

/// One word per line; blank lines are skipped.
pub fn read_vocabulary(path: &Path) -> Result<Vocabulary> {
    let text = read_text(path)?;
    let words: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    Vocabulary::from_words(&words).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_vocabulary(path: &Path, vocab: &Vocabulary) -> Result<()> {
    let mut out = vocab.words().join("\n");
    out.push('\n');
    write_bytes(path, out.as_bytes())
}

/// `child<TAB>parent` lines; the root's parent is `ROOT`.
pub fn read_taxonomy(path: &Path) -> Result<Taxonomy> {
    let text = read_text(path)?;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(c), Some(p), None) if !c.is_empty() && !p.is_empty() => edges.push((c, p)),
            _ => {
                return Err(Error::format(
                    path,
                    format!("line {}: expected child<TAB>parent", i + 1),
                ))
            }
        }
    }
    Taxonomy::from_edges(&edges).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_taxonomy(path: &Path, taxonomy: &Taxonomy) -> Result<()> {
    let mut out = format!("{}\t{ROOT_MARKER}\n", taxonomy.root());
    for (c, p) in taxonomy.edges() {
        writeln!(out, "{c}\t{p}").unwrap();
    }
    write_bytes(path, out.as_bytes())
}

/// `word v1 v2 ...` per line, space-separated.
pub fn read_embeddings(path: &Path) -> Result<WordEmbeddings> {
    let text = read_text(path)?;
    let mut vectors = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        let Some(word) = parts.next() else { continue };
        let v = parts
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::format(path, format!("line {}: {e}", i + 1)))?;
        if vectors.insert(word.to_string(), v).is_some() {
            return Err(Error::format(
                path,
                format!("line {}: duplicate word {word:?}", i + 1),
            ));
        }
    }
    WordEmbeddings::new(vectors).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_embeddings(path: &Path, embeddings: &WordEmbeddings) -> Result<()> {
    let mut out = String::new();
    for (w, v) in embeddings.iter() {
        out.push_str(w);
        for x in v {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    write_bytes(path, out.as_bytes())
}
