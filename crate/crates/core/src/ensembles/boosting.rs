use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;

use super::weighted_vote;
use crate::classifiers::{Classifier, ClassifierConfig, Prediction, QuantumClassifier};
use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

/// Added to both sides of the error ratio so a perfect (or perfectly wrong)
/// weak learner still gets a finite weight.
pub const BOOSTING_EPSILON: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostingConfig {
    pub base: ClassifierConfig,
    pub n_internal: usize,
    pub s_samples: usize,
    /// Draw `S/2` samples per class, each according to the weights
    /// restricted to that class.
    pub balanced: bool,
    pub seed: u64,
}

/// Discrete AdaBoost model.
#[derive(Debug, Clone)]
pub struct BoostingModel {
    members: Vec<QuantumClassifier>,
    alphas: Vec<f64>,
    errors: Vec<f64>,
    /// Sample weights after each iteration.
    weight_history: Vec<Vec<f64>>,
}

/// `α = ½ ln((1 - err + ε) / (err + ε))`.
///
/// Errors above one half give a negative weight: the member is kept and the
/// weighted vote inverts it.
pub fn classifier_weight(weighted_error: f64) -> f64 {
    0.5 * ((1.0 - weighted_error + BOOSTING_EPSILON) / (weighted_error + BOOSTING_EPSILON)).ln()
}

/// `w_i ← w_i exp(-α y_i h(x_i))`, renormalized to sum to one.
pub fn reweight(weights: &[f64], alpha: f64, correct: &[bool]) -> Vec<f64> {
    let mut next: Vec<f64> = weights
        .iter()
        .zip(correct)
        .map(|(w, &ok)| w * (if ok { -alpha } else { alpha }).exp())
        .collect();
    let total: f64 = next.iter().sum();
    if total > 0.0 && total.is_finite() {
        next.iter_mut().for_each(|w| *w /= total);
    } else {
        let u = 1.0 / next.len() as f64;
        next.iter_mut().for_each(|w| *w = u);
    }
    next
}

fn weighted_draw(weights: &[f64], candidates: &[usize], count: usize, rng: &mut impl Rng) -> Vec<usize> {
    let class_weights: Vec<f64> = candidates.iter().map(|&i| weights[i]).collect();
    match WeightedIndex::new(&class_weights) {
        Ok(dist) => (0..count).map(|_| candidates[dist.sample(rng)]).collect(),
        // every weight in this class underflowed: fall back to uniform
        Err(_) => (0..count)
            .map(|_| candidates[rng.random_range(0..candidates.len())])
            .collect(),
    }
}

pub fn boosting_fit(train: &Dataset, cfg: &BoostingConfig) -> Result<BoostingModel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if cfg.n_internal == 0 || cfg.s_samples == 0 {
        return Err(Error::InvalidParameter("boosting needs N >= 1 and S >= 1".into()));
    }
    let n = train.len();
    let all: Vec<usize> = (0..n).collect();
    let (pos, neg): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&i| train.labels[i] == Label::Positive);
    if cfg.balanced && (pos.is_empty() || neg.is_empty()) {
        return Err(Error::MissingClass(if pos.is_empty() { 1 } else { -1 }));
    }

    let mut weights = vec![1.0 / n as f64; n];
    let mut model = BoostingModel {
        members: Vec::with_capacity(cfg.n_internal),
        alphas: Vec::with_capacity(cfg.n_internal),
        errors: Vec::with_capacity(cfg.n_internal),
        weight_history: Vec::with_capacity(cfg.n_internal),
    };
    for t in 0..cfg.n_internal {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, &[t as u64, 0]));
        let subset = if cfg.balanced {
            let half = cfg.s_samples / 2;
            let mut s = weighted_draw(&weights, &neg, half, &mut rng);
            s.extend(weighted_draw(&weights, &pos, half, &mut rng));
            s
        } else {
            weighted_draw(&weights, &all, cfg.s_samples, &mut rng)
        };
        let part = train.subset(&subset);
        let member = QuantumClassifier::fit(
            &part.features,
            &part.labels,
            cfg.base.with_seed(derive_seed(cfg.seed, &[t as u64, 1])),
        )?;
        let predictions = member.predict_all(&train.features)?;
        let correct: Vec<bool> = predictions
            .iter()
            .zip(&train.labels)
            .map(|(p, y)| p.label == *y)
            .collect();
        let error: f64 = weights
            .iter()
            .zip(&correct)
            .filter(|(_, ok)| !**ok)
            .map(|(w, _)| w)
            .sum();
        let alpha = classifier_weight(error);
        weights = reweight(&weights, alpha, &correct);

        model.members.push(member);
        model.alphas.push(alpha);
        model.errors.push(error);
        model.weight_history.push(weights.clone());
    }
    Ok(model)
}

impl BoostingModel {
    pub fn members(&self) -> &[QuantumClassifier] {
        &self.members
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Weighted training error of each member at the time it was fitted.
    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn weight_history(&self) -> &[Vec<f64>] {
        &self.weight_history
    }
}

impl Classifier for BoostingModel {
    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        let internal = self
            .members
            .par_iter()
            .map(|m| m.predict(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(weighted_vote(&self.alphas, &internal))
    }
}
