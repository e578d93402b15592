use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Taxonomy, WordEmbeddings};
use crate::corpus::tokenize;
use crate::error::{Error, Result};
use crate::retrieval::ScoreMatrix;

/// How a keyword is matched against a (possibly recognised) transcription.
#[derive(Debug, Clone, Copy)]
pub enum TextScorer<'a> {
    /// 1 if the keyword is a token, else 0.
    Exact,
    /// Best Wu-Palmer similarity between the keyword and any known token.
    WuPalmer(&'a Taxonomy),
    /// Cosine between the keyword vector and the mean token vector.
    Embedding(&'a WordEmbeddings),
}

impl TextScorer<'_> {
    fn check_keyword(&self, keyword: &str) -> Result<()> {
        match self {
            Self::Exact => Ok(()),
            Self::WuPalmer(t) if !t.contains(keyword) => Err(Error::lookup("taxonomy node", keyword)),
            Self::Embedding(e) if e.get(keyword).is_none() => Err(Error::lookup("embedding", keyword)),
            _ => Ok(()),
        }
    }

    pub fn score(&self, text: &str, keyword: &str) -> Result<f64> {
        self.check_keyword(keyword)?;
        match self {
            Self::Exact => Ok(f64::from(u8::from(tokenize(text).iter().any(|t| t == keyword)))),
            Self::WuPalmer(tax) => tokenize(text)
                .iter()
                .filter(|t| tax.contains(t))
                .map(|t| tax.wup(t, keyword))
                .try_fold(0.0f64, |best, s| s.map(|s| best.max(s))),
            Self::Embedding(emb) => emb.sentence_score(text, keyword),
        }
    }
}

/// Score every text against every keyword. Rows follow the map's key order.
pub fn text_match_scores<S: AsRef<str>>(
    texts: &BTreeMap<String, String>,
    keywords: &[S],
    scorer: TextScorer<'_>,
) -> Result<ScoreMatrix> {
    for k in keywords {
        scorer.check_keyword(k.as_ref())?;
    }
    let mut scores = Vec::with_capacity(texts.len() * keywords.len());
    for text in texts.values() {
        for k in keywords {
            scores.push(scorer.score(text, k.as_ref())?);
        }
    }
    ScoreMatrix::new(
        texts.keys().cloned().collect(),
        keywords.iter().map(|k| k.as_ref().into()).collect(),
        scores,
    )
}
