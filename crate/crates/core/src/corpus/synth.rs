//! Deterministic toy corpus with known ground truth at every level: spoken
//! words, soft scene tags, annotator counts, a taxonomy and word vectors.
//!
//! Each word has a fixed random feature template; an utterance concatenates
//! the templates of its words with gain jitter and additive noise. Some
//! words come in synonym pairs. A pair member that is not spoken still
//! receives `synonym_tag_weight` in the tag vector when its partner is, so a
//! model trained on tags can learn semantic matches that a model trained on
//! transcriptions cannot.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AnnotationSet, Corpus, FeatureSource, Split, UtteranceRecord, Vocabulary, DEFAULT_ANNOTATORS};
use crate::baselines::{Taxonomy, WordEmbeddings};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::math;
use crate::model::{ConvSpec, ModelConfig, Pooling};

const SYNONYM_PAIRS: &[(&str, &str)] = &[
    ("dog", "puppy"),
    ("bike", "bicycle"),
    ("child", "kid"),
    ("road", "street"),
    ("ocean", "sea"),
    ("man", "guy"),
    ("picture", "photo"),
    ("rock", "stone"),
];

const SINGLE_WORDS: &[&str] = &[
    "ball", "grass", "snow", "water", "tree", "car", "beach", "hat", "shirt", "horse", "bird", "boat",
    "girl", "jacket", "mountain", "camera", "building", "bench", "fence", "crowd", "table", "sand", "wave",
    "rope", "helmet", "field", "sky", "river", "flower", "wall",
];

const FILLERS: &[&str] = &["a", "the", "with", "and", "on"];

const GROUPS: &[&str] = &["animal", "vehicle", "person", "place", "object"];

// Annotator-count distributions over 0..=5 for the three kinds of pair.
const VERBATIM_COUNTS: [f64; 6] = [0.0, 0.0, 0.10, 0.20, 0.35, 0.35];
const SYNONYM_COUNTS: [f64; 6] = [0.0, 0.10, 0.20, 0.30, 0.25, 0.15];
const UNRELATED_COUNTS: [f64; 6] = [0.90, 0.07, 0.03, 0.0, 0.0, 0.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub vocab_size: usize,
    pub synonym_pairs: usize,
    pub n_train: usize,
    pub n_dev: usize,
    pub n_test: usize,
    /// Mixing weight of uniform noise into the scene tags.
    pub tag_noise: f64,
    /// Tag value for a word whose synonym (but not itself) is spoken.
    pub synonym_tag_weight: f64,
    pub feature_dim: usize,
    pub min_words: usize,
    pub max_words: usize,
    pub min_word_frames: usize,
    pub max_word_frames: usize,
    pub feature_noise: f64,
    pub embedding_dim: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            vocab_size: 20,
            synonym_pairs: 4,
            n_train: 500,
            n_dev: 100,
            n_test: 100,
            tag_noise: 0.1,
            synonym_tag_weight: 0.7,
            feature_dim: 13,
            min_words: 3,
            max_words: 5,
            min_word_frames: 6,
            max_word_frames: 10,
            feature_noise: 0.3,
            embedding_dim: 32,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Usage(m));
        if self.vocab_size < 2 {
            return bad(format!("vocab_size {} < 2", self.vocab_size));
        }
        if 2 * self.synonym_pairs > self.vocab_size || self.synonym_pairs > SYNONYM_PAIRS.len() {
            return bad(format!(
                "{} synonym pairs do not fit a vocabulary of {} (at most {} pairs)",
                self.synonym_pairs,
                self.vocab_size,
                SYNONYM_PAIRS.len()
            ));
        }
        if self.min_words == 0 || self.min_words > self.max_words || self.max_words > self.vocab_size {
            return bad(format!(
                "words per utterance must satisfy 1 <= {} <= {} <= vocab_size",
                self.min_words, self.max_words
            ));
        }
        if self.min_word_frames == 0 || self.min_word_frames > self.max_word_frames {
            return bad("word frame range is empty".into());
        }
        if !(0.0..=1.0).contains(&self.tag_noise) || !(0.0..=1.0).contains(&self.synonym_tag_weight) {
            return bad("tag_noise and synonym_tag_weight must lie in [0, 1]".into());
        }
        if self.feature_dim == 0 || self.embedding_dim == 0 {
            return bad("feature_dim and embedding_dim must be positive".into());
        }
        if !(self.feature_noise >= 0.0 && self.feature_noise.is_finite()) {
            return bad(format!(
                "feature_noise {} must be non-negative",
                self.feature_noise
            ));
        }
        Ok(())
    }
}

/// Everything [`synth_corpus`] produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub config: SynthConfig,
    pub vocabulary: Vocabulary,
    pub corpus: Corpus,
    /// Counts for every `(test utterance, keyword)` pair.
    pub annotations: AnnotationSet,
    pub taxonomy: Taxonomy,
    pub embeddings: WordEmbeddings,
    pub synonyms: Vec<(String, String)>,
}

impl SynthCorpus {
    /// A model sized for this corpus: wider than [`ModelConfig::desk`],
    /// with a larger step size and epoch budget.
    pub fn model_config(&self) -> ModelConfig {
        let mut cfg = ModelConfig::desk();
        cfg.input_dim = self.config.feature_dim;
        cfg.vocab_size = self.vocabulary.len();
        cfg.conv = vec![
            ConvSpec::new(32, 5, Pooling::Window(2)),
            ConvSpec::new(64, 5, Pooling::Window(2)),
            ConvSpec::new(64, 3, Pooling::Global),
        ];
        cfg.epochs = 60;
        cfg.adam.learning_rate = 1e-3;
        cfg
    }

    pub fn partner(&self, word: &str) -> Option<&str> {
        self.synonyms.iter().find_map(|(a, b)| {
            if a == word {
                Some(b.as_str())
            } else if b == word {
                Some(a.as_str())
            } else {
                None
            }
        })
    }
}

fn word_list(cfg: &SynthConfig) -> (Vec<String>, Vec<(String, String)>) {
    let mut words = Vec::with_capacity(cfg.vocab_size);
    let mut pairs = Vec::new();
    for &(a, b) in &SYNONYM_PAIRS[..cfg.synonym_pairs] {
        words.push(a.to_string());
        words.push(b.to_string());
        pairs.push((a.to_string(), b.to_string()));
    }
    let extra = SINGLE_WORDS.iter().map(|w| w.to_string());
    let generated = (0..).map(|i| format!("word{i}"));
    words.extend(extra.chain(generated).take(cfg.vocab_size - words.len()));
    (words, pairs)
}

fn draw(rng: &mut ChaCha8Rng, probs: &[f64; 6]) -> u8 {
    let r: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            return i as u8;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0) as u8
}

fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| math::gaussian(rng)).collect();
    let n = math::sqrt(v.iter().map(|x| x * x).sum());
    v.into_iter().map(|x| x / n).collect()
}

fn build_taxonomy(words: &[String], pairs: &[(String, String)]) -> Result<Taxonomy> {
    let mut edges: Vec<(String, String)> = GROUPS.iter().map(|g| (g.to_string(), "entity".into())).collect();
    let mut paired = BTreeMap::new();
    for (a, b) in pairs {
        paired.insert(a.as_str(), a.as_str());
        paired.insert(b.as_str(), a.as_str());
    }
    for (i, w) in words.iter().enumerate() {
        let group = GROUPS[i / 2 % GROUPS.len()];
        match paired.get(w.as_str()) {
            Some(head) => {
                let concept = format!("{head}_concept");
                if head == w {
                    edges.push((concept.clone(), group.into()));
                }
                edges.push((w.clone(), concept));
            }
            None => edges.push((w.clone(), group.into())),
        }
    }
    Taxonomy::from_edges(&edges)
}

fn build_embeddings(
    rng: &mut ChaCha8Rng,
    words: &[String],
    pairs: &[(String, String)],
    dim: usize,
) -> Result<WordEmbeddings> {
    let mut vectors: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for w in words {
        vectors.insert(w.clone(), unit_vector(rng, dim));
    }
    for (a, b) in pairs {
        let g = unit_vector(rng, dim);
        let v: Vec<f64> = vectors[a].iter().zip(&g).map(|(x, y)| x + 0.35 * y).collect();
        vectors.insert(b.clone(), v);
    }
    WordEmbeddings::new(vectors)
}

/// Generate a corpus from `cfg`. The same config always yields the same
/// corpus.
pub fn synth_corpus(cfg: &SynthConfig) -> Result<SynthCorpus> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (words, pairs) = word_list(cfg);
    let vocabulary = Vocabulary::from_words(&words)?;
    let partner: BTreeMap<&str, &str> = pairs
        .iter()
        .flat_map(|(a, b)| [(a.as_str(), b.as_str()), (b.as_str(), a.as_str())])
        .collect();

    let d = cfg.feature_dim;
    let mut templates: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for w in words.iter().map(String::as_str).chain(FILLERS.iter().copied()) {
        let len = rng.gen_range(cfg.min_word_frames..=cfg.max_word_frames);
        templates.insert(w, (0..len * d).map(|_| math::gaussian(&mut rng)).collect());
    }

    let mut corpus = Corpus::with_tag_dim(words.len());
    let mut annotations = AnnotationSet::new(DEFAULT_ANNOTATORS, words.clone())?;
    let splits = [
        (Split::Train, cfg.n_train),
        (Split::Dev, cfg.n_dev),
        (Split::Test, cfg.n_test),
    ];
    for (split, n) in splits {
        for i in 0..n {
            let utt_id = format!("{split}_{i:04}");
            let k = rng.gen_range(cfg.min_words..=cfg.max_words);
            let spoken: Vec<&str> = words.choose_multiple(&mut rng, k).map(String::as_str).collect();

            let mut tokens = Vec::new();
            for w in &spoken {
                if rng.gen_bool(0.5) {
                    tokens.push(*FILLERS.choose(&mut rng).unwrap());
                }
                tokens.push(*w);
            }

            let mut frames = Vec::new();
            let noise_frames = |rng: &mut ChaCha8Rng, frames: &mut Vec<f64>, n: usize| {
                for _ in 0..n * d {
                    frames.push(cfg.feature_noise * math::gaussian(rng));
                }
            };
            let lead = rng.gen_range(2..=4);
            noise_frames(&mut rng, &mut frames, lead);
            for t in &tokens {
                let gain = rng.gen_range(0.8..1.2);
                for &v in &templates[t] {
                    frames.push(gain * v + cfg.feature_noise * math::gaussian(&mut rng));
                }
                let gap = rng.gen_range(0..=2);
                noise_frames(&mut rng, &mut frames, gap);
            }
            let features = FeatureMatrix::new(frames.len() / d, d, frames)?;

            let tags: Vec<f64> = words
                .iter()
                .map(|w| {
                    let scene = if spoken.contains(&w.as_str()) {
                        1.0
                    } else if partner.get(w.as_str()).is_some_and(|p| spoken.contains(p)) {
                        cfg.synonym_tag_weight
                    } else {
                        0.0
                    };
                    (1.0 - cfg.tag_noise) * scene + cfg.tag_noise * rng.gen::<f64>()
                })
                .collect();

            if split == Split::Test {
                for w in &words {
                    let dist = if spoken.contains(&w.as_str()) {
                        &VERBATIM_COUNTS
                    } else if partner.get(w.as_str()).is_some_and(|p| spoken.contains(p)) {
                        &SYNONYM_COUNTS
                    } else {
                        &UNRELATED_COUNTS
                    };
                    annotations.insert(&utt_id, w, draw(&mut rng, dist))?;
                }
            }

            corpus.push(UtteranceRecord {
                utt_id,
                features: FeatureSource::Inline(features),
                transcription: Some(tokens.join(" ")),
                tags: Some(tags),
                split,
            })?;
        }
    }

    let taxonomy = build_taxonomy(&words, &pairs)?;
    let embeddings = build_embeddings(&mut rng, &words, &pairs, cfg.embedding_dim)?;
    Ok(SynthCorpus {
        config: cfg.clone(),
        vocabulary,
        corpus,
        annotations,
        taxonomy,
        embeddings,
        synonyms: pairs,
    })
}
