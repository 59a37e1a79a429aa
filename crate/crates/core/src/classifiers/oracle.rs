//! Classical closed forms of the three decision rules.
//!
//! These evaluate the rules directly on the encoded vectors, without any
//! circuit, and serve as the reference the statevector path is checked
//! against. Decision values are on the classical scale; the scale functions
//! below map a quantum decision value onto it.

use std::f64::consts::SQRT_2;

use super::{knn_vote, rank_descending, ClassifierKind, Prediction};
use crate::encoding::EncodedDataset;
use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check(train: &EncodedDataset, x: &[f64]) -> Result<()> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if x.len() != train.padded_dim() {
        return Err(Error::DimensionMismatch {
            expected: train.padded_dim(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Distance weights `1 - ||x_i - x||² / 4`, each in `[0, 1]` for unit vectors.
pub fn distance_weights(train: &EncodedDataset, x: &[f64]) -> Vec<f64> {
    train
        .features()
        .iter()
        .map(|xi| 1.0 - 0.25 * xi.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>())
        .collect()
}

/// Fidelities `F_i = (x_i · x)²`.
pub fn fidelities(train: &EncodedDataset, x: &[f64]) -> Vec<f64> {
    train.features().iter().map(|xi| dot(xi, x).powi(2)).collect()
}

/// `Σ y_i cos(x_i, x)`.
pub fn cosine_decision(train: &EncodedDataset, x: &[f64]) -> f64 {
    train
        .features()
        .iter()
        .zip(train.labels())
        .map(|(xi, y)| y.value() * dot(xi, x))
        .sum()
}

/// `Σ y_i (1 - ||x_i - x||² / 4)`.
pub fn distance_decision(train: &EncodedDataset, x: &[f64]) -> f64 {
    distance_weights(train, x)
        .iter()
        .zip(train.labels())
        .map(|(w, y)| y.value() * w)
        .sum()
}

/// Factor taking the cosine circuit's `1 - 4 P(1)` to `Σ y_i cos(x_i, x)`.
pub fn cosine_scale(n_train: usize) -> f64 {
    SQRT_2 * n_train as f64
}

/// Factor taking the distance circuit's `P(0|0) - 1/2` to
/// `Σ y_i (1 - ||x_i - x||² / 4)`.
pub fn distance_scale(train: &EncodedDataset, x: &[f64]) -> f64 {
    2.0 * distance_weights(train, x).iter().sum::<f64>()
}

/// Classical prediction. Confidences match the quantum definitions.
pub fn oracle_predict(kind: ClassifierKind, train: &EncodedDataset, x: &[f64]) -> Result<Prediction> {
    check(train, x)?;
    let n = train.len() as f64;
    match kind {
        ClassifierKind::Cosine => {
            let d = cosine_decision(train, x);
            Ok(Prediction::from_exact_decision(d, d.abs() / n))
        }
        ClassifierKind::Distance => {
            let total: f64 = distance_weights(train, x).iter().sum();
            let d = distance_decision(train, x);
            if total <= 0.0 {
                return Ok(Prediction::abstain());
            }
            Ok(Prediction::from_exact_decision(d, d.abs() / total))
        }
        ClassifierKind::Knn { k } => {
            if k == 0 || k > train.len() {
                return Err(Error::InvalidK { k, n: train.len() });
            }
            knn_vote(train.labels(), &rank_descending(&fidelities(train, x)), k)
        }
    }
}
