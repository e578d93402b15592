//! The `vgsr` command-line tool.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use vgsr_core::baselines::{
    corpus_wer, simulate_asr_errors, text_match_scores, text_prior_scores, vision_tag_prior_scores,
    TextScorer, UnigramModel,
};
use vgsr_core::corpus::{
    aggregate_annotations, build_vocabulary, synth_corpus, Split, SynthConfig, UtteranceRecord, Vocabulary,
    DEFAULT_STOPWORDS, DEFAULT_THRESHOLD,
};
use vgsr_core::features::pad_or_truncate;
use vgsr_core::model::{EpochRecord, ModelConfig, TrainLog};
use vgsr_core::retrieval::{evaluate_all, rank_utterances, EvalInputs, EvalMode, ScoreMatrix};

use crate::error::{Error, Result};
use crate::io::{self, config_hash, Manifest, ManifestEntry, Provenance, ReportFile, ScoresFile};
use crate::pipeline::{self, TargetKind};

#[derive(Debug, Parser)]
#[command(name = "vgsr", version, about = "Keyword retrieval from untranscribed speech")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute MFCC+delta feature files for every WAV file in a directory.
    Featurize {
        #[arg(long)]
        wav_dir: PathBuf,
        /// Manifest to write.
        #[arg(long)]
        manifest: PathBuf,
        /// Directory for the feature files.
        #[arg(long)]
        out: PathBuf,
        /// Existing manifest supplying transcriptions, tags and splits by utt_id.
        #[arg(long)]
        input_manifest: Option<PathBuf>,
        /// Split for files not listed in --input-manifest.
        #[arg(long, default_value = "train")]
        split: Split,
    },
    /// Generate a synthetic corpus with annotations, taxonomy and embeddings.
    Synthesize {
        #[arg(long)]
        out: PathBuf,
        /// JSON corpus settings; omitted fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Train a model on the train split, early-stopping on dev.
    Train {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, value_enum)]
        targets: TargetKind,
        /// JSON model config; defaults to the desk-scale network.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Keyword list, one per line. Built from training transcriptions
        /// when omitted (bow targets only).
        #[arg(long)]
        vocab: Option<PathBuf>,
        /// Stopwords (one per line) left out of a vocabulary built from
        /// transcriptions; defaults to a built-in English list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        epochs: Option<usize>,
        /// Output directory for model.vgsr and train_log.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score utterances against keywords.
    Score {
        #[arg(long, required_unless_present = "tags_as_scores")]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "test")]
        split: Split,
        /// Use each utterance's tag vector as its scores (needs --vocab).
        #[arg(long)]
        tags_as_scores: bool,
        #[arg(long)]
        vocab: Option<PathBuf>,
        /// Restrict output to these keywords, one per line.
        #[arg(long)]
        keywords: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute retrieval metrics for a score file.
    Evaluate {
        #[arg(long)]
        scores: PathBuf,
        /// Annotator counts CSV (utt_id,keyword,count).
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Manifest whose transcriptions define verbatim occurrence.
        #[arg(long)]
        transcriptions: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: u8,
        /// Keywords (one per line) to drop from the annotations, e.g. those
        /// with poor annotator agreement.
        #[arg(long)]
        exclude_keywords: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
        /// Per-keyword CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the top-scoring utterances for one keyword.
    Search {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        keyword: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Only search this split.
        #[arg(long)]
        split: Option<Split>,
    },
    /// Corrupt transcriptions with simulated recognition errors.
    SimulateAsr {
        #[arg(long)]
        manifest: PathBuf,
        /// Per-word error probability.
        #[arg(long)]
        wer: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score with a transcription- or prior-based reference system.
    Baseline {
        #[arg(long, value_enum)]
        kind: BaselineKind,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "test")]
        split: Split,
        #[arg(long)]
        vocab: PathBuf,
        /// Manifest whose train split estimates priors; defaults to --manifest.
        #[arg(long)]
        train_manifest: Option<PathBuf>,
        #[arg(long)]
        taxonomy: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export bottleneck embeddings.
    Embed {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        split: Option<Split>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exact,
    Semantic,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineKind {
    TextPrior,
    TagPrior,
    Exact,
    Wup,
    Embedding,
}

/// Parse arguments, run, and report errors as a single line on stderr.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: ").trim());
            return ExitCode::from(1);
        }
    };
    match pipeline::configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Featurize {
            wav_dir,
            manifest,
            out,
            input_manifest,
            split,
        } => featurize(&wav_dir, &manifest, &out, input_manifest.as_deref(), split),
        Command::Synthesize { out, config, seed } => synthesize(&out, config.as_deref(), seed),
        Command::Train {
            manifest,
            targets,
            config,
            vocab,
            stopwords,
            seed,
            epochs,
            out,
        } => train(
            &manifest,
            targets,
            config.as_deref(),
            vocab.as_deref(),
            stopwords.as_deref(),
            seed,
            epochs,
            &out,
        ),
        Command::Score {
            checkpoint,
            manifest,
            split,
            tags_as_scores,
            vocab,
            keywords,
            out,
        } => score(
            checkpoint.as_deref(),
            &manifest,
            split,
            tags_as_scores,
            vocab.as_deref(),
            keywords.as_deref(),
            &out,
        ),
        Command::Evaluate {
            scores,
            annotations,
            transcriptions,
            mode,
            threshold,
            exclude_keywords,
            report,
            csv,
        } => evaluate(
            &scores,
            annotations.as_deref(),
            transcriptions.as_deref(),
            mode,
            threshold,
            exclude_keywords.as_deref(),
            &report,
            csv.as_deref(),
        ),
        Command::Search {
            checkpoint,
            manifest,
            keyword,
            top,
            split,
        } => search(&checkpoint, &manifest, &keyword, top, split),
        Command::SimulateAsr {
            manifest,
            wer,
            seed,
            out,
        } => simulate_asr(&manifest, wer, seed, &out),
        Command::Baseline {
            kind,
            manifest,
            split,
            vocab,
            train_manifest,
            taxonomy,
            embeddings,
            out,
        } => baseline(
            kind,
            &manifest,
            split,
            &vocab,
            train_manifest.as_deref(),
            taxonomy.as_deref(),
            embeddings.as_deref(),
            &out,
        ),
        Command::Embed {
            checkpoint,
            manifest,
            split,
            out,
        } => embed(&checkpoint, &manifest, split, &out),
    }
}

fn records_in(manifest: &Manifest, split: Option<Split>) -> Vec<&UtteranceRecord> {
    manifest
        .corpus
        .records()
        .iter()
        .filter(|r| split.is_none_or(|s| r.split == s))
        .collect()
}

fn featurize(wav_dir: &Path, manifest: &Path, out: &Path, input: Option<&Path>, split: Split) -> Result<()> {
    let known: BTreeMap<String, UtteranceRecord> = match input {
        Some(p) => io::read_manifest(p)?
            .corpus
            .records()
            .iter()
            .map(|r| (r.utt_id.clone(), r.clone()))
            .collect(),
        None => BTreeMap::new(),
    };
    let mut wavs: Vec<PathBuf> = std::fs::read_dir(wav_dir)
        .map_err(|e| Error::io(wav_dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("wav")))
        .collect();
    wavs.sort();

    let results: Vec<Result<ManifestEntry>> = wavs
        .par_iter()
        .map(|wav| {
            let stem = wav.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let feats = pipeline::featurize(&io::read_wav(wav)?).map_err(|e| match e {
                Error::Core(c) => Error::format(wav, c.to_string()),
                other => other,
            })?;
            let path = out.join(format!("{stem}.vgsf"));
            io::write_features(&path, &feats)?;
            let mut record = known.get(&stem).cloned().unwrap_or(UtteranceRecord {
                utt_id: stem,
                features: vgsr_core::corpus::FeatureSource::Path(String::new()),
                transcription: None,
                tags: None,
                split,
            });
            record.features = vgsr_core::corpus::FeatureSource::Path(path.to_string_lossy().into_owned());
            ManifestEntry::from_record(&record, manifest.parent().unwrap_or(Path::new(".")))
        })
        .collect();

    let mut entries = Vec::new();
    let mut failed = None;
    for r in results {
        match r {
            Ok(e) => entries.push(e),
            Err(e) => {
                eprintln!("error[{}]: {}", e.kind(), e.to_string().replace('\n', " "));
                failed = Some(e);
            }
        }
    }
    io::write_manifest(manifest, &entries)?;
    match failed {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn synthesize(out: &Path, config: Option<&Path>, seed: Option<u64>) -> Result<()> {
    let mut cfg: SynthConfig = match config {
        Some(p) => pipeline::read_json(p)?,
        None => SynthConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let synth = synth_corpus(&cfg)?;
    pipeline::write_synthetic(out, &synth)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct TrainLogFile<'a> {
    provenance: Provenance,
    targets: TargetKind,
    config: &'a ModelConfig,
    log: &'a TrainLog,
}

#[allow(clippy::too_many_arguments)]
fn train(
    manifest: &Path,
    targets: TargetKind,
    config: Option<&Path>,
    vocab: Option<&Path>,
    stopwords: Option<&Path>,
    seed: Option<u64>,
    epochs: Option<usize>,
    out: &Path,
) -> Result<()> {
    let man = io::read_manifest(manifest)?;
    let train_records = records_in(&man, Some(Split::Train));
    let first = train_records
        .first()
        .ok_or_else(|| Error::Usage(format!("{} has no train utterances", manifest.display())))?;
    let mut cfg = match config {
        Some(p) => pipeline::read_json::<ModelConfig>(p)?,
        None => ModelConfig::desk(),
    };
    let vocabulary = match (vocab, targets) {
        (Some(p), _) => io::read_vocabulary(p)?,
        (None, TargetKind::Vision) => {
            return Err(Error::Usage(
                "vision targets need --vocab to name the tag dimensions".into(),
            ))
        }
        (None, TargetKind::Bow) => {
            let texts: Vec<&str> = train_records
                .iter()
                .filter_map(|r| r.transcription.as_deref())
                .collect();
            match stopwords {
                Some(p) => {
                    let words = read_keyword_file(p)?;
                    let words: Vec<&str> = words.iter().map(String::as_str).collect();
                    build_vocabulary(texts, cfg.vocab_size, &words)?
                }
                None => build_vocabulary(texts, cfg.vocab_size, DEFAULT_STOPWORDS)?,
            }
        }
    };
    if config.is_none() {
        cfg.vocab_size = vocabulary.len();
        cfg.input_dim = pipeline::load_features(first)?.dim();
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(e) = epochs {
        cfg.epochs = e;
    }
    let max = cfg.epochs;
    let (model, log) = pipeline::train(
        man.corpus.records(),
        &vocabulary,
        targets,
        cfg.clone(),
        |e: &EpochRecord| match e.dev_loss {
            Some(d) => eprintln!(
                "epoch {}/{max} train_loss={:.6} dev_loss={d:.6}",
                e.epoch, e.train_loss
            ),
            None => eprintln!("epoch {}/{max} train_loss={:.6}", e.epoch, e.train_loss),
        },
    )?;
    io::save_checkpoint(&out.join("model.vgsr"), &model, vocabulary.words())?;
    let file = TrainLogFile {
        provenance: Provenance {
            system: format!(
                "model:{}",
                serde_json::to_value(targets).unwrap().as_str().unwrap()
            ),
            seed: Some(cfg.seed),
            config_hash: config_hash(&cfg),
        },
        targets,
        config: &cfg,
        log: &log,
    };
    pipeline::write_json(&out.join("train_log.json"), &file)
}

fn read_keyword_file(path: &Path) -> Result<Vec<String>> {
    Ok(io::read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn restrict_keywords(matrix: ScoreMatrix, keywords: Option<&Path>) -> Result<ScoreMatrix> {
    let Some(path) = keywords else { return Ok(matrix) };
    let wanted = read_keyword_file(path)?;
    let missing: Vec<&str> = wanted
        .iter()
        .filter(|k| !matrix.keywords().contains(k))
        .map(String::as_str)
        .collect();
    if !missing.is_empty() {
        return Err(Error::Usage(format!(
            "keywords not in the vocabulary: {}",
            missing.join(", ")
        )));
    }
    Ok(matrix.select_keywords(&wanted)?)
}

fn score(
    checkpoint: Option<&Path>,
    manifest: &Path,
    split: Split,
    tags_as_scores: bool,
    vocab: Option<&Path>,
    keywords: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let man = io::read_manifest(manifest)?;
    let records = records_in(&man, Some(split));
    let (matrix, provenance) = if tags_as_scores {
        let vocab = vocab.ok_or_else(|| Error::Usage("--tags-as-scores needs --vocab".into()))?;
        let words = io::read_vocabulary(vocab)?.words().to_vec();
        let m = pipeline::tag_scores(&words, &records)?;
        let prov = Provenance {
            system: "tags".into(),
            seed: None,
            config_hash: io::short_hash(&io::read_bytes(manifest)?),
        };
        (m, prov)
    } else {
        let path = checkpoint.ok_or_else(|| Error::Usage("--checkpoint is required".into()))?;
        let ckpt = io::load_checkpoint(path)?;
        let m = pipeline::score_records(&ckpt.model, &ckpt.vocabulary, &records)?;
        let cfg = ckpt.model.config();
        let prov = Provenance {
            system: "model".into(),
            seed: Some(cfg.seed),
            config_hash: config_hash(cfg),
        };
        (m, prov)
    };
    let matrix = restrict_keywords(matrix, keywords)?;
    io::write_scores(out, &ScoresFile::new(provenance, &matrix))
}

fn transcriptions_of(path: &Path) -> Result<BTreeMap<String, String>> {
    Ok(io::read_manifest(path)?.corpus.transcriptions())
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    scores: &Path,
    annotations: Option<&Path>,
    transcriptions: Option<&Path>,
    mode: ModeArg,
    threshold: u8,
    exclude: Option<&Path>,
    report: &Path,
    csv: Option<&Path>,
) -> Result<()> {
    let file = io::read_scores(scores)?;
    let mut matrix = file.matrix()?;
    let mut counts = annotations.map(io::read_annotations).transpose()?;
    if let (Some(c), Some(p)) = (counts.as_mut(), exclude) {
        c.exclude_keywords(&read_keyword_file(p)?);
    }
    let texts = transcriptions.map(transcriptions_of).transpose()?;
    let labels = counts.as_ref().map(|c| aggregate_annotations(c, threshold));
    let mode = match mode {
        ModeArg::Exact => EvalMode::Exact,
        ModeArg::Semantic => EvalMode::Semantic,
    };
    if let Some(c) = &counts {
        let utts = c.utterances();
        matrix = matrix.filter_utterances(|u| utts.contains(u));
        let kws: Vec<&String> = matrix
            .keywords()
            .iter()
            .filter(|k| c.keywords().contains(k))
            .collect();
        matrix = matrix.select_keywords(&kws)?;
    } else if mode == EvalMode::Semantic {
        return Err(Error::Usage("semantic evaluation needs --annotations".into()));
    }
    if let Some(t) = &texts {
        if let Some(u) = matrix.utt_ids().iter().find(|u| !t.contains_key(*u)) {
            return Err(Error::Usage(format!("no transcription for scored utterance {u}")));
        }
    }
    let inputs = EvalInputs {
        semantic_labels: labels.as_ref(),
        counts: counts.as_ref(),
        transcriptions: texts.as_ref(),
    };
    let result = evaluate_all(&matrix, inputs, mode)?;
    if let Some(p) = csv {
        io::write_report_csv(p, &result)?;
    }
    io::write_report(
        report,
        &ReportFile {
            provenance: file.provenance,
            report: result,
        },
    )
}

fn search(checkpoint: &Path, manifest: &Path, keyword: &str, top: usize, split: Option<Split>) -> Result<()> {
    let ckpt = io::load_checkpoint(checkpoint)?;
    if !ckpt.vocabulary.iter().any(|k| k == keyword) {
        return Err(Error::Usage(format!(
            "keyword {keyword:?} is not in the model vocabulary"
        )));
    }
    let man = io::read_manifest(manifest)?;
    let records = records_in(&man, split);
    let matrix = pipeline::score_records(&ckpt.model, &ckpt.vocabulary, &records)?;
    let kw = matrix.keyword_index(keyword)?;
    for (rank, u) in rank_utterances(&matrix, kw).into_iter().take(top).enumerate() {
        let text = records[u].transcription.as_deref().unwrap_or("");
        println!(
            "{}\t{}\t{:.6}\t{}",
            rank + 1,
            matrix.utt_ids()[u],
            matrix.get(u, kw),
            text
        );
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct WerSidecar {
    seed: u64,
    config_hash: String,
    wer_target: f64,
    wer_measured: f64,
    reference_words: usize,
}

fn simulate_asr(manifest: &Path, wer: f64, seed: u64, out: &Path) -> Result<()> {
    if !(0.0..=1.0).contains(&wer) {
        return Err(Error::Usage(format!("--wer {wer} outside [0, 1]")));
    }
    let man = io::read_manifest(manifest)?;
    let train_texts: Vec<&str> = records_in(&man, Some(Split::Train))
        .iter()
        .filter_map(|r| r.transcription.as_deref())
        .collect();
    let unigram = if train_texts.is_empty() {
        UnigramModel::from_texts(
            man.corpus
                .records()
                .iter()
                .filter_map(|r| r.transcription.as_deref()),
        )?
    } else {
        UnigramModel::from_texts(train_texts)?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out_dir = out.parent().unwrap_or(Path::new("."));
    let mut entries = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for r in man.corpus.records() {
        let mut rec = r.clone();
        if let Some(t) = &r.transcription {
            let hyp = simulate_asr_errors(t, wer, &unigram, &mut rng)?;
            pairs.push((t.clone(), hyp.clone()));
            rec.transcription = Some(hyp);
        }
        let mut e = ManifestEntry::from_record(&rec, out_dir)?;
        e.wer_target = Some(wer);
        entries.push(e);
    }
    io::write_manifest(out, &entries)?;
    let reference_words = pairs
        .iter()
        .map(|(r, _)| vgsr_core::corpus::tokenize(r).len())
        .sum();
    let measured = corpus_wer(pairs.iter().map(|(r, h)| (r.as_str(), h.as_str())))?;
    let sidecar = WerSidecar {
        seed,
        config_hash: io::short_hash(&io::read_bytes(manifest)?),
        wer_target: wer,
        wer_measured: measured,
        reference_words,
    };
    pipeline::write_json(&out.with_extension("wer.json"), &sidecar)
}

#[allow(clippy::too_many_arguments)]
fn baseline(
    kind: BaselineKind,
    manifest: &Path,
    split: Split,
    vocab: &Path,
    train_manifest: Option<&Path>,
    taxonomy: Option<&Path>,
    embeddings: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let vocabulary: Vocabulary = io::read_vocabulary(vocab)?;
    let words = vocabulary.words();
    let man = io::read_manifest(manifest)?;
    let records = records_in(&man, Some(split));
    let ids: Vec<String> = records.iter().map(|r| r.utt_id.clone()).collect();
    let texts = || -> Result<BTreeMap<String, String>> {
        records
            .iter()
            .map(|r| {
                r.transcription
                    .clone()
                    .map(|t| (r.utt_id.clone(), t))
                    .ok_or_else(|| Error::Usage(format!("utterance {} has no transcription", r.utt_id)))
            })
            .collect()
    };
    let train_man = match train_manifest {
        Some(p) => Some(io::read_manifest(p)?),
        None => None,
    };
    let train_records = records_in(train_man.as_ref().unwrap_or(&man), Some(Split::Train));
    let matrix = match kind {
        BaselineKind::TextPrior => {
            let u =
                UnigramModel::from_texts(train_records.iter().filter_map(|r| r.transcription.as_deref()))?;
            text_prior_scores(&ids, words, &u)?
        }
        BaselineKind::TagPrior => {
            let tags: Vec<&[f64]> = train_records.iter().filter_map(|r| r.tags.as_deref()).collect();
            vision_tag_prior_scores(&ids, words, &tags)?
        }
        BaselineKind::Exact => text_match_scores(&texts()?, words, TextScorer::Exact)?,
        BaselineKind::Wup => {
            let p = taxonomy.ok_or_else(|| Error::Usage("wup baseline needs --taxonomy".into()))?;
            let t = io::read_taxonomy(p)?;
            text_match_scores(&texts()?, words, TextScorer::WuPalmer(&t))?
        }
        BaselineKind::Embedding => {
            let p = embeddings.ok_or_else(|| Error::Usage("embedding baseline needs --embeddings".into()))?;
            let e = io::read_embeddings(p)?;
            text_match_scores(&texts()?, words, TextScorer::Embedding(&e))?
        }
    };
    let provenance = Provenance {
        system: format!(
            "baseline:{}",
            serde_json::to_value(kind).unwrap().as_str().unwrap()
        ),
        seed: None,
        config_hash: io::short_hash(&io::read_bytes(manifest)?),
    };
    io::write_scores(out, &ScoresFile::new(provenance, &matrix))
}

#[derive(Debug, Serialize)]
struct EmbeddingsFile {
    provenance: Provenance,
    utt_ids: Vec<String>,
    embeddings: Vec<Vec<f64>>,
}

fn embed(checkpoint: &Path, manifest: &Path, split: Option<Split>, out: &Path) -> Result<()> {
    let ckpt = io::load_checkpoint(checkpoint)?;
    let man = io::read_manifest(manifest)?;
    let records = records_in(&man, split);
    let model = &ckpt.model;
    let embeddings = records
        .par_iter()
        .map(|r| {
            let x = pad_or_truncate(&pipeline::load_features(r)?, model.config().max_frames);
            Ok(model.bottleneck_embed(&x)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let file = EmbeddingsFile {
        provenance: Provenance {
            system: "model".into(),
            seed: Some(model.config().seed),
            config_hash: config_hash(model.config()),
        },
        utt_ids: records.iter().map(|r| r.utt_id.clone()).collect(),
        embeddings,
    };
    pipeline::write_json(out, &file)
}
