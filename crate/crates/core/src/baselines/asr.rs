use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::UnigramModel;
use crate::corpus::tokenize;
use crate::error::{Error, Result};

// Substitution redraws until the word changes; give up after this many.
const MAX_REDRAWS: usize = 1000;

/// Corrupt a transcription: each word is, with probability `error_rate`,
/// substituted, deleted or followed by an inserted word (equally likely).
/// Substituted and inserted words are drawn from `unigram`.
pub fn simulate_asr_errors<R: Rng + ?Sized>(
    text: &str,
    error_rate: f64,
    unigram: &UnigramModel,
    rng: &mut R,
) -> Result<String> {
    if !(0.0..=1.0).contains(&error_rate) {
        return Err(Error::Usage(format!("error rate {error_rate} outside [0, 1]")));
    }
    let mut out: Vec<String> = Vec::new();
    for word in tokenize(text) {
        if rng.gen::<f64>() >= error_rate {
            out.push(word);
            continue;
        }
        match rng.gen_range(0..3u8) {
            0 => {
                let replacement = (0..MAX_REDRAWS)
                    .map(|_| unigram.sample(rng))
                    .find(|w| *w != word)
                    .ok_or_else(|| Error::Input(format!("unigram model cannot substitute {word:?}")))?;
                out.push(replacement.into());
            }
            1 => {}
            _ => {
                out.push(word);
                out.push(unigram.sample(rng).into());
            }
        }
    }
    Ok(out.join(" "))
}

/// Levenshtein distance with unit costs.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = alloc::vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Word error rate of `hypothesis` against `reference`.
pub fn word_error_rate(reference: &str, hypothesis: &str) -> Result<f64> {
    corpus_wer([(reference, hypothesis)])
}

/// Total word edits over total reference words.
pub fn corpus_wer<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<f64> {
    let (mut edits, mut words) = (0usize, 0usize);
    for (r, h) in pairs {
        let r = tokenize(r);
        edits += edit_distance(&r, &tokenize(h));
        words += r.len();
    }
    if words == 0 {
        return Err(Error::Undefined("word error rate with an empty reference".into()));
    }
    Ok(edits as f64 / words as f64)
}
