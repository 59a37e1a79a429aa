//! Classical ensembles over the quantum classifiers.
//!
//! Internal "training" of an instance-based quantum classifier is storing its
//! (normalized, encoded) subset; nothing is optimized. Internal predictions
//! at inference time are independent and run in parallel. Boosting fits
//! strictly sequentially.

mod bagging;
mod boosting;
mod stacking;

pub use bagging::{bagging_fit, BaggingConfig, BaggingModel};
pub use boosting::{
    boosting_fit, classifier_weight, reweight, BoostingConfig, BoostingModel, BOOSTING_EPSILON,
};
pub use stacking::{meta_row, stacking_fit, FittedMember, StackingConfig, StackingMember, StackingModel};

use crate::classifiers::Prediction;

/// `sign(Σ m_i(x))` with confidence `|Σ m_i(x)| / M`.
pub fn majority_vote(predictions: &[Prediction]) -> Prediction {
    let sum: f64 = predictions.iter().map(|p| p.label.value()).sum();
    let m = predictions.len().max(1) as f64;
    Prediction::from_decision(sum, sum.abs() / m)
}

/// `sign(Σ α_i m_i(x))` with confidence `|Σ α_i m_i(x)| / Σ |α_i|`.
pub fn weighted_vote(alphas: &[f64], predictions: &[Prediction]) -> Prediction {
    debug_assert_eq!(alphas.len(), predictions.len());
    let sum: f64 = alphas
        .iter()
        .zip(predictions)
        .map(|(a, p)| a * p.label.value())
        .sum();
    let norm: f64 = alphas.iter().map(|a| a.abs()).sum();
    let confidence = if norm > 0.0 { sum.abs() / norm } else { 0.0 };
    Prediction::from_decision(sum, confidence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;

    fn votes(labels: &[i8]) -> Vec<Prediction> {
        labels
            .iter()
            .map(|&l| Prediction::from_decision(f64::from(l), 1.0))
            .collect()
    }

    #[test]
    fn majority_examples() {
        let p = majority_vote(&votes(&[1, 1, -1]));
        assert_eq!(p.label, Label::Positive);
        assert!((p.confidence - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(majority_vote(&votes(&[-1, -1])).confidence, 1.0);
        assert_eq!(majority_vote(&votes(&[-1, 1])).label, Label::Positive);
    }

    #[test]
    fn weighted_examples() {
        assert_eq!(weighted_vote(&[1.0, 1.0], &votes(&[1, -1])).label, Label::Positive);
        assert_eq!(weighted_vote(&[2.0, 1.0, 1.0], &votes(&[-1, 1, 1])).label, Label::Positive);
        assert_eq!(weighted_vote(&[0.3], &votes(&[-1])).label, Label::Negative);
        assert_eq!(weighted_vote(&[-0.5], &votes(&[-1])).label, Label::Positive);
        assert_eq!(weighted_vote(&[0.0], &votes(&[-1])).confidence, 0.0);
    }
}
