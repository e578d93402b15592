//! Steps shared by the CLI and the test suites.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use vgsr_core::corpus::{bow_targets, FeatureSource, Split, SynthCorpus, UtteranceRecord, Vocabulary};
use vgsr_core::features::{add_deltas, mfcc, FeatureMatrix, MfccConfig, Waveform};
use vgsr_core::model::{fit, EpochRecord, Example, ModelConfig, SpeechModel, TrainLog};
use vgsr_core::retrieval::ScoreMatrix;

use crate::error::{Error, Result};
use crate::io::{self, ManifestEntry};

/// Which vectors the model is trained to predict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    /// Soft visual tags from the manifest.
    Vision,
    /// Bag-of-words vectors from the transcriptions.
    Bow,
}

/// Cap rayon's global pool at `VGSR_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("VGSR_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("VGSR_THREADS={value:?} is not a positive integer")))?;
    // A second call in the same process finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// 13 MFCCs with first and second differences: `T x 39`.
pub fn featurize(wave: &Waveform) -> Result<FeatureMatrix> {
    let config = MfccConfig::default();
    Ok(add_deltas(&mfcc(wave, &config)?))
}

pub fn load_features(record: &UtteranceRecord) -> Result<FeatureMatrix> {
    match &record.features {
        FeatureSource::Inline(f) => Ok(f.clone()),
        FeatureSource::Path(p) => io::read_features(Path::new(p)),
    }
}

pub fn target_vector(record: &UtteranceRecord, kind: TargetKind, vocab: &Vocabulary) -> Result<Vec<f64>> {
    match kind {
        TargetKind::Vision => record.tags.clone().ok_or_else(|| {
            Error::Usage(format!(
                "utterance {} has no tags for vision targets",
                record.utt_id
            ))
        }),
        TargetKind::Bow => record
            .transcription
            .as_deref()
            .map(|t| bow_targets(t, vocab))
            .ok_or_else(|| {
                Error::Usage(format!(
                    "utterance {} has no transcription for bow targets",
                    record.utt_id
                ))
            }),
    }
}

/// Train on the `train` split with early stopping on `dev`.
pub fn train<'a>(
    records: impl IntoIterator<Item = &'a UtteranceRecord>,
    vocab: &Vocabulary,
    kind: TargetKind,
    config: ModelConfig,
    on_epoch: impl FnMut(&EpochRecord),
) -> Result<(SpeechModel, TrainLog)> {
    if config.vocab_size != vocab.len() {
        return Err(Error::Usage(format!(
            "model has {} outputs but the vocabulary has {} words",
            config.vocab_size,
            vocab.len()
        )));
    }
    let mut sets: BTreeMap<Split, (Vec<FeatureMatrix>, Vec<Vec<f64>>)> = BTreeMap::new();
    for r in records {
        if r.split == Split::Test {
            continue;
        }
        let (x, y) = sets.entry(r.split).or_default();
        x.push(load_features(r)?);
        y.push(target_vector(r, kind, vocab)?);
    }
    let examples = |split| -> Vec<Example<'_>> {
        sets.get(&split)
            .map(|(x, y)| {
                x.iter()
                    .zip(y)
                    .map(|(f, t)| Example {
                        features: f,
                        target: t,
                    })
                    .collect()
            })
            .unwrap_or_default()
    };
    let mut model = SpeechModel::new(config)?;
    let log = fit(
        &mut model,
        &examples(Split::Train),
        &examples(Split::Dev),
        on_epoch,
    )?;
    Ok((model, log))
}

/// Model scores for `records` against every output keyword, in parallel.
pub fn score_records(
    model: &SpeechModel,
    vocabulary: &[String],
    records: &[&UtteranceRecord],
) -> Result<ScoreMatrix> {
    let rows = records
        .par_iter()
        .map(|r| Ok(model.score(&load_features(r)?)?))
        .collect::<Result<Vec<_>>>()?;
    let ids = records.iter().map(|r| r.utt_id.clone()).collect();
    Ok(ScoreMatrix::from_rows(ids, vocabulary.to_vec(), rows)?)
}

/// The records' own tag vectors used directly as scores.
pub fn tag_scores(vocabulary: &[String], records: &[&UtteranceRecord]) -> Result<ScoreMatrix> {
    let rows = records
        .iter()
        .map(|r| {
            r.tags
                .clone()
                .ok_or_else(|| Error::Usage(format!("utterance {} has no tags", r.utt_id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let ids = records.iter().map(|r| r.utt_id.clone()).collect();
    Ok(ScoreMatrix::from_rows(ids, vocabulary.to_vec(), rows)?)
}

/// Paths of everything [`write_synthetic`] produces.
#[derive(Debug, Clone)]
pub struct SynthPaths {
    pub manifest: PathBuf,
    pub vocabulary: PathBuf,
    pub annotations: PathBuf,
    pub taxonomy: PathBuf,
    pub embeddings: PathBuf,
    pub model_config: PathBuf,
    pub synth_config: PathBuf,
}

impl SynthPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            manifest: dir.join("manifest.jsonl"),
            vocabulary: dir.join("vocab.txt"),
            annotations: dir.join("annotations.csv"),
            taxonomy: dir.join("taxonomy.tsv"),
            embeddings: dir.join("embeddings.txt"),
            model_config: dir.join("model_config.json"),
            synth_config: dir.join("synth_config.json"),
        }
    }
}

/// Write a synthetic corpus as files under `dir`: features, manifest,
/// vocabulary, test-split annotations, taxonomy, embeddings and configs.
pub fn write_synthetic(dir: &Path, synth: &SynthCorpus) -> Result<SynthPaths> {
    let paths = SynthPaths::in_dir(dir);
    let mut entries = Vec::new();
    for r in synth.corpus.records() {
        let FeatureSource::Inline(f) = &r.features else {
            unreachable!("synthetic features are in memory")
        };
        let rel = format!("features/{}.vgsf", r.utt_id);
        io::write_features(&dir.join(&rel), f)?;
        let mut rec = r.clone();
        rec.features = FeatureSource::Path(dir.join(&rel).to_string_lossy().into_owned());
        entries.push(ManifestEntry::from_record(&rec, dir)?);
    }
    io::write_manifest(&paths.manifest, &entries)?;
    io::write_vocabulary(&paths.vocabulary, &synth.vocabulary)?;
    io::write_annotations(&paths.annotations, &synth.annotations)?;
    io::write_taxonomy(&paths.taxonomy, &synth.taxonomy)?;
    io::write_embeddings(&paths.embeddings, &synth.embeddings)?;
    write_json(&paths.model_config, &synth.model_config())?;
    write_json(&paths.synth_config, &synth.config)?;
    Ok(paths)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("values serialize");
    bytes.push(b'\n');
    io::write_bytes(path, &bytes)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&io::read_text(path)?).map_err(|e| Error::format(path, e.to_string()))
}
