//! Measurements behind the acceptance criteria. Each function returns the
//! quantity being checked (or a list of discrepancies) and leaves the
//! pass/fail decision to the caller.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vgsr_core::corpus::{aggregate_annotations, annotator_agreement, AnnotationSet};
use vgsr_core::features::FeatureMatrix;
use vgsr_core::model::{summed_cross_entropy, Head, ModelConfig, ModelFragment, SpeechModel};
use vgsr_core::nn::gradcheck::{LayerFragment, LayerKind};
use vgsr_core::nn::{grad_check, Conv1d, Dense, Tensor};
use vgsr_core::retrieval::{
    average_precision, eer, evaluate_all, p_at_10, p_at_n, p_at_n_star, spearman_rho, EvalInputs, EvalMode,
    MetricReport, ScoreMatrix,
};

use super::oracle::{self, Instance};

pub const FD_STEP: f64 = 1e-6;

fn uniform(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn tensor(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Tensor {
    Tensor::from_vec(&[rows, cols], uniform(rng, rows * cols)).unwrap()
}

/// `(layer name, max relative error)` for every layer type.
pub fn layer_gradient_errors(seed: u64) -> Vec<(&'static str, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let cases: Vec<(&'static str, LayerKind, Tensor)> = vec![
        (
            "conv1d",
            LayerKind::Conv(Conv1d::new(5, 4, 6, &mut rng)),
            tensor(&mut rng, 17, 4),
        ),
        ("maxpool", LayerKind::MaxPool(3), tensor(&mut rng, 14, 5)),
        ("global max", LayerKind::GlobalMaxPool, tensor(&mut rng, 11, 6)),
        (
            "dense",
            LayerKind::Dense(Dense::new(9, 7, &mut rng)),
            tensor(&mut rng, 1, 9),
        ),
        ("relu", LayerKind::Relu, tensor(&mut rng, 6, 5)),
        ("sigmoid", LayerKind::Sigmoid, tensor(&mut rng, 6, 5)),
    ];
    for (name, layer, input) in cases {
        let mut frag = LayerFragment::with_random_head(layer, input, &mut rng).unwrap();
        out.push((name, grad_check(&mut frag, FD_STEP).unwrap().max_rel_error));
    }
    out
}

fn random_features(rng: &mut ChaCha8Rng, frames: usize, dim: usize) -> FeatureMatrix {
    FeatureMatrix::new(frames, dim, uniform(rng, frames * dim)).unwrap()
}

/// End-to-end check of the desk model under summed cross-entropy with a
/// soft target, and with a bottleneck.
pub fn model_gradient_errors(seed: u64) -> Vec<(&'static str, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, bottleneck) in [("desk", None), ("desk+bottleneck", Some(10))] {
        let cfg = ModelConfig {
            seed,
            bottleneck_dim: bottleneck,
            ..ModelConfig::desk()
        };
        let input = random_features(&mut rng, cfg.max_frames, cfg.input_dim);
        let target = (0..cfg.vocab_size).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mut frag = ModelFragment {
            model: SpeechModel::new(cfg).unwrap(),
            input,
            head: Head::CrossEntropy(target),
        };
        out.push((name, grad_check(&mut frag, FD_STEP).unwrap().max_rel_error));
    }
    out
}

/// Violations of the closed-form loss identities, empty when all hold.
pub fn loss_identity_failures() -> Vec<String> {
    let mut bad = Vec::new();
    let l = summed_cross_entropy(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
    if (l - 2.0 * std::f64::consts::LN_2).abs() > 1e-9 {
        bad.push(format!("(1,0) vs (0.5,0.5): {l}"));
    }
    let y = [1.0, 0.0, 1.0, 1.0, 0.0];
    let l = summed_cross_entropy(&y, &y).unwrap();
    if l > 2e-6 {
        bad.push(format!("perfect hard prediction: {l}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let y: Vec<f64> = (0..6).map(|_| rng.gen_range(0.05..0.95)).collect();
        let at_min = summed_cross_entropy(&y, &y).unwrap();
        for i in 0..y.len() {
            for d in [-0.01, 0.01] {
                let mut f = y.clone();
                f[i] += d;
                let l = summed_cross_entropy(&f, &y).unwrap();
                if l <= at_min {
                    bad.push(format!(
                        "soft target {y:?}: moving f[{i}] by {d} gives {l} <= {at_min}"
                    ));
                }
            }
        }
    }
    bad
}

/// Agreement under majority labelling for the 999-pair count histogram
/// `833/69/30/26/25/16`.
pub fn histogram_agreement() -> f64 {
    let histogram = [833usize, 69, 30, 26, 25, 16];
    let mut a = AnnotationSet::new(5, vec!["kw".into()]).unwrap();
    let mut i = 0;
    for (count, &n) in histogram.iter().enumerate() {
        for _ in 0..n {
            a.insert(&format!("u{i:04}"), "kw", count as u8).unwrap();
            i += 1;
        }
    }
    annotator_agreement(&a, &aggregate_annotations(&a, 3)).unwrap()
}

fn compare(bad: &mut Vec<String>, case: usize, name: &str, lib: Option<f64>, oracle: Option<f64>, tol: f64) {
    let ok = match (lib, oracle) {
        (Some(a), Some(b)) => (a - b).abs() <= tol,
        (None, None) => true,
        _ => false,
    };
    if !ok {
        bad.push(format!(
            "instance {case}: {name} library {lib:?} vs oracle {oracle:?}"
        ));
    }
}

/// Library metrics against the brute-force oracles on `n` random instances.
pub fn oracle_mismatches(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..n {
        let inst = Instance::random(&mut rng, 10, 20, 5);
        let s = &inst.scores;
        let labels = inst.labels();
        let rel = &inst.relevant;
        compare(
            &mut bad,
            case,
            "P@10",
            p_at_10(s, &labels).ok(),
            oracle::p_at_10(s, rel),
            0.0,
        );
        compare(
            &mut bad,
            case,
            "P@N",
            p_at_n(s, &labels).ok(),
            oracle::p_at_n(s, rel),
            0.0,
        );
        compare(
            &mut bad,
            case,
            "EER",
            eer(s, &labels).ok(),
            oracle::eer(s, rel),
            1e-12,
        );
        compare(
            &mut bad,
            case,
            "AP",
            average_precision(s, &labels).ok(),
            oracle::average_precision(s, rel),
            1e-10,
        );
        compare(
            &mut bad,
            case,
            "rho",
            spearman_rho(s, &inst.annotations()).ok(),
            oracle::spearman(s, &inst.counts),
            1e-10,
        );
        let lib = p_at_n_star(s, &labels, &inst.exact_labels()).ok();
        let ora = oracle::p_at_n_star(s, rel, &inst.exact);
        compare(
            &mut bad,
            case,
            "P@N*",
            lib.map(|b| b.total),
            ora.map(|o| o.0),
            0.0,
        );
        compare(
            &mut bad,
            case,
            "P@N*exact",
            lib.map(|b| b.exact),
            ora.map(|o| o.1),
            0.0,
        );
        compare(
            &mut bad,
            case,
            "P@N*sem",
            lib.map(|b| b.semantic),
            ora.map(|o| o.2),
            0.0,
        );
    }
    bad
}

fn full_report(inst: &Instance, scores: &ScoreMatrix) -> MetricReport {
    let labels = inst.labels();
    let counts = inst.annotations();
    let transcriptions = oracle::transcriptions(&inst.scores, &inst.exact);
    let inputs = EvalInputs {
        semantic_labels: Some(&labels),
        counts: Some(&counts),
        transcriptions: Some(&transcriptions),
    };
    evaluate_all(scores, inputs, EvalMode::Semantic).unwrap()
}

/// Instances whose full semantic report changes under `2s + 1` or the
/// logistic sigmoid.
pub fn transform_mismatches(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    type Transform = (&'static str, fn(f64) -> f64);
    let transforms: [Transform; 2] = [
        ("2s+1", |s| 2.0 * s + 1.0),
        ("sigmoid", |s| 1.0 / (1.0 + (-s).exp())),
    ];
    for case in 0..n {
        let inst = loop {
            let i = Instance::random(&mut rng, 10, 20, 5);
            if i.relevant.iter().flatten().any(|&r| r) {
                break i;
            }
        };
        let base = full_report(&inst, &inst.scores);
        for (name, f) in transforms {
            let moved = inst.scores.map(f).unwrap();
            if full_report(&inst, &moved) != base {
                bad.push(format!("instance {case}: report changes under {name}"));
            }
        }
    }
    bad
}

/// Largest `|total - exact - semantic|` of the P@N* breakdown.
pub fn decomposition_gap(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let inst = Instance::random(&mut rng, 10, 20, 5);
        if let Ok(b) = p_at_n_star(&inst.scores, &inst.labels(), &inst.exact_labels()) {
            worst = worst.max((b.total - b.exact - b.semantic).abs());
        }
    }
    worst
}

/// Inputs for the zero-tail extension test: content, then a zero tail of at
/// least one receptive field plus one pool stride, with the total length a
/// multiple of the pool stride.
pub fn padding_config() -> ModelConfig {
    ModelConfig {
        max_frames: 200,
        ..ModelConfig::desk()
    }
}

/// Largest output change when 50 more zero frames are appended, over
/// `n` random models and inputs.
pub fn padding_max_difference(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base_cfg = padding_config();
    let stride = base_cfg.pool_stride();
    let min_tail = base_cfg.receptive_field() + stride;
    let extension = 50;
    let mut worst = 0.0f64;
    for i in 0..n {
        let cfg = ModelConfig {
            seed: seed + i as u64,
            ..base_cfg.clone()
        };
        let model = SpeechModel::new(cfg.clone()).unwrap();
        let longest = (cfg.max_frames - extension) / stride * stride;
        let content = rng.gen_range(1..=longest - min_tail);
        let len = (content + min_tail).div_ceil(stride) * stride;
        assert!(len + extension <= cfg.max_frames);
        let d = cfg.input_dim;
        let mut data: Vec<f64> = (0..content * d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        data.resize(len * d, 0.0);
        let short = FeatureMatrix::new(len, d, data.clone()).unwrap();
        data.resize((len + extension) * d, 0.0);
        let long = FeatureMatrix::new(len + extension, d, data).unwrap();
        let a = model.forward(&short).unwrap();
        let b = model.forward(&long).unwrap();
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs());
        }
    }
    worst
}
