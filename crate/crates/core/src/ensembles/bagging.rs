use rand::Rng;
use rayon::prelude::*;

use super::majority_vote;
use crate::classifiers::{Classifier, ClassifierConfig, Prediction, QuantumClassifier};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::preprocessing::stratified_draw;
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaggingConfig {
    pub base: ClassifierConfig,
    /// Number of internal classifiers.
    pub n_internal: usize,
    /// Samples drawn, with replacement, for each internal classifier.
    pub s_samples: usize,
    /// Draw `S/2` samples from each class instead of uniformly.
    pub balanced: bool,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BaggingModel {
    members: Vec<QuantumClassifier>,
    subsets: Vec<Vec<usize>>,
}

/// Draws the bootstrap subsets and binds one classifier to each.
pub fn bagging_fit(train: &Dataset, cfg: &BaggingConfig) -> Result<BaggingModel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if cfg.n_internal == 0 || cfg.s_samples == 0 {
        return Err(Error::InvalidParameter("bagging needs N >= 1 and S >= 1".into()));
    }
    let subsets = (0..cfg.n_internal)
        .map(|m| {
            let mut rng = rng_from_seed(derive_seed(cfg.seed, &[m as u64, 0]));
            if cfg.balanced {
                stratified_draw(&train.labels, cfg.s_samples, &mut rng)
            } else {
                Ok((0..cfg.s_samples).map(|_| rng.random_range(0..train.len())).collect())
            }
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let members = subsets
        .iter()
        .enumerate()
        .map(|(m, subset)| {
            let part = train.subset(subset);
            let base = cfg.base.with_seed(derive_seed(cfg.seed, &[m as u64, 1]));
            QuantumClassifier::fit(&part.features, &part.labels, base)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BaggingModel { members, subsets })
}

impl BaggingModel {
    pub fn members(&self) -> &[QuantumClassifier] {
        &self.members
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }
}

impl Classifier for BaggingModel {
    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        let internal = self
            .members
            .par_iter()
            .map(|m| m.predict(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(majority_vote(&internal))
    }
}
