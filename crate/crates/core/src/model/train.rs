use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::loss::summed_cross_entropy;
use super::net::SpeechModel;
use crate::error::{Error, Result};
use crate::features::{pad_or_truncate, FeatureMatrix};
use crate::nn::adam_step;

/// One training pair: features and a length-`W` target in `[0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Example<'a> {
    pub features: &'a FeatureMatrix,
    pub target: &'a [f64],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    /// Mean per-example loss over the training set after this epoch.
    pub train_loss: f64,
    pub dev_loss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainLog {
    pub seed: u64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub initial_train_loss: f64,
    pub initial_dev_loss: Option<f64>,
    pub epochs: Vec<EpochRecord>,
    /// Epoch whose parameters were kept (best dev loss), if any.
    pub best_epoch: Option<usize>,
    pub stopped_early: bool,
}

/// Mean summed cross-entropy over `examples`, on the model as-is.
pub fn mean_loss(model: &SpeechModel, examples: &[Example<'_>]) -> Result<f64> {
    if examples.is_empty() {
        return Err(Error::Usage("cannot average the loss of zero examples".into()));
    }
    let mut total = 0.0;
    for ex in examples {
        total += summed_cross_entropy(&model.forward(ex.features)?, ex.target)?;
    }
    Ok(total / examples.len() as f64)
}

fn snapshot(model: &SpeechModel) -> Vec<Vec<f64>> {
    model
        .parameters()
        .iter()
        .map(|p| p.value.data().to_vec())
        .collect()
}

/// Minibatch Adam on the mean per-example loss, with per-epoch shuffling
/// from the model seed and early stopping on `dev` loss.
///
/// Features are padded or truncated to `max_frames` first. When `dev` is
/// non-empty, training stops after `patience` epochs without improvement and
/// the parameters of the best dev epoch are restored.
pub fn fit(
    model: &mut SpeechModel,
    train: &[Example<'_>],
    dev: &[Example<'_>],
    mut on_epoch: impl FnMut(&EpochRecord),
) -> Result<TrainLog> {
    if train.is_empty() {
        return Err(Error::Usage("training corpus is empty".into()));
    }
    let cfg = model.config().clone();
    let w = cfg.vocab_size;
    for (i, ex) in train.iter().chain(dev).enumerate() {
        if ex.target.len() != w {
            return Err(Error::dim(
                "vocabulary",
                format!(
                    "example {i} has a target of length {}, expected {w}",
                    ex.target.len()
                ),
            ));
        }
        if ex.target.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Input(format!(
                "example {i} has target values outside [0, 1]"
            )));
        }
    }

    let pad = |set: &[Example<'_>]| -> Vec<FeatureMatrix> {
        set.iter()
            .map(|e| pad_or_truncate(e.features, cfg.max_frames))
            .collect()
    };
    let train_x = pad(train);
    let dev_x = pad(dev);
    let train_set: Vec<Example<'_>> = train_x
        .iter()
        .zip(train)
        .map(|(f, e)| Example {
            features: f,
            target: e.target,
        })
        .collect();
    let dev_set: Vec<Example<'_>> = dev_x
        .iter()
        .zip(dev)
        .map(|(f, e)| Example {
            features: f,
            target: e.target,
        })
        .collect();

    let mut log = TrainLog {
        seed: cfg.seed,
        learning_rate: cfg.adam.learning_rate,
        batch_size: cfg.batch_size,
        max_epochs: cfg.epochs,
        patience: cfg.patience,
        initial_train_loss: mean_loss(model, &train_set)?,
        initial_dev_loss: if dev_set.is_empty() {
            None
        } else {
            Some(mean_loss(model, &dev_set)?)
        },
        epochs: Vec::new(),
        best_epoch: None,
        stopped_early: false,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut stale = 0usize;

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size) {
            model.zero_grad();
            for &i in batch {
                let ex = &train_set[i];
                let loss = model.accumulate_gradients(ex.features, ex.target)?;
                if !loss.is_finite() {
                    return Err(Error::Numerical(format!("non-finite loss in epoch {epoch}")));
                }
            }
            let scale = 1.0 / batch.len() as f64;
            let mut params = model.parameters_mut();
            for p in params.iter_mut() {
                p.grad.data_mut().iter_mut().for_each(|g| *g *= scale);
            }
            adam_step(&mut params, &cfg.adam).map_err(|e| match e {
                Error::Numerical(msg) => Error::Numerical(format!("epoch {epoch}: {msg}")),
                other => other,
            })?;
        }

        let train_loss = mean_loss(model, &train_set)?;
        let dev_loss = if dev_set.is_empty() {
            None
        } else {
            Some(mean_loss(model, &dev_set)?)
        };
        if !train_loss.is_finite() || dev_loss.is_some_and(|d| !d.is_finite()) {
            return Err(Error::Numerical(format!("non-finite loss after epoch {epoch}")));
        }
        let record = EpochRecord {
            epoch,
            train_loss,
            dev_loss,
        };
        on_epoch(&record);
        log.epochs.push(record);

        if let Some(d) = dev_loss {
            if best.as_ref().is_none_or(|(b, _)| d < *b) {
                best = Some((d, snapshot(model)));
                log.best_epoch = Some(epoch);
                stale = 0;
            } else {
                stale += 1;
                if stale >= cfg.patience {
                    log.stopped_early = true;
                    break;
                }
            }
        }
    }

    if let Some((_, params)) = best {
        model.set_parameter_values(params)?;
    }
    Ok(log)
}
