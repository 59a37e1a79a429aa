use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::classifiers::{Classifier, ClassifierConfig, Mode, Prediction, QuantumClassifier};
use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::preprocessing::{NormalizationKind, Normalizer};
use crate::rng::{derive_seed, rng_from_seed};

/// A classifier paired with the normalizer it fits on its own training rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackingMember {
    pub classifier: ClassifierConfig,
    pub normalization: NormalizationKind,
}

impl StackingMember {
    pub fn new(classifier: ClassifierConfig, normalization: NormalizationKind) -> StackingMember {
        StackingMember {
            classifier,
            normalization,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StackingConfig {
    pub internals: Vec<StackingMember>,
    pub meta: StackingMember,
    pub folds: usize,
    /// Keep the class ratio in every fold.
    pub stratified: bool,
    pub seed: u64,
}

impl StackingConfig {
    pub const DEFAULT_FOLDS: usize = 5;

    /// Internals cosine+std, distance+std, 1NN+minmax, 3NN+minmax; meta
    /// 5NN on un-normalized meta features.
    pub fn standard(mode: Mode, seed: u64) -> StackingConfig {
        let m = |c: ClassifierConfig, n| StackingMember::new(c.with_mode(mode), n);
        StackingConfig {
            internals: vec![
                m(ClassifierConfig::cosine(), NormalizationKind::Std),
                m(ClassifierConfig::distance(), NormalizationKind::Std),
                m(ClassifierConfig::knn(1), NormalizationKind::MinMax),
                m(ClassifierConfig::knn(3), NormalizationKind::MinMax),
            ],
            meta: m(ClassifierConfig::knn(5), NormalizationKind::None),
            folds: StackingConfig::DEFAULT_FOLDS,
            stratified: false,
            seed,
        }
    }
}

/// A fitted classifier together with its fitted normalizer.
#[derive(Debug, Clone)]
pub struct FittedMember {
    pub normalizer: Normalizer,
    pub model: QuantumClassifier,
}

impl FittedMember {
    pub fn fit(member: &StackingMember, features: &[Vec<f64>], labels: &[Label], seed: u64) -> Result<FittedMember> {
        let normalizer = Normalizer::fit(member.normalization, features)?;
        let rows = normalizer.apply(features, false)?;
        let model = QuantumClassifier::fit(&rows, labels, member.classifier.with_seed(seed))?;
        Ok(FittedMember { normalizer, model })
    }
}

impl Classifier for FittedMember {
    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        self.model.predict(&self.normalizer.apply_row(x, true)?)
    }
}

#[derive(Debug, Clone)]
pub struct StackingModel {
    internals: Vec<FittedMember>,
    meta: FittedMember,
    meta_features: Vec<Vec<f64>>,
    folds: Vec<usize>,
}

/// `[pred_1 .. pred_M, conf_1 .. conf_M]` with predictions as ±1.
pub fn meta_row(predictions: &[Prediction]) -> Vec<f64> {
    predictions
        .iter()
        .map(|p| p.label.value())
        .chain(predictions.iter().map(|p| p.confidence))
        .collect()
}

/// Fold index of every training row.
fn assign_folds(labels: &[Label], folds: usize, stratified: bool, seed: u64) -> Vec<usize> {
    let mut rng = rng_from_seed(seed);
    let mut assignment = vec![0; labels.len()];
    let groups: Vec<Vec<usize>> = if stratified {
        [Label::Negative, Label::Positive]
            .iter()
            .map(|c| (0..labels.len()).filter(|&i| labels[i] == *c).collect())
            .collect()
    } else {
        vec![(0..labels.len()).collect()]
    };
    // dealing continues across groups so fold sizes differ by at most one
    let mut next = 0;
    for mut group in groups {
        group.shuffle(&mut rng);
        for i in group {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    assignment
}

pub fn stacking_fit(train: &Dataset, cfg: &StackingConfig) -> Result<StackingModel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if cfg.internals.is_empty() {
        return Err(Error::InvalidParameter("stacking needs at least one internal classifier".into()));
    }
    if cfg.folds < 2 {
        return Err(Error::InvalidParameter(format!("stacking needs folds >= 2, got {}", cfg.folds)));
    }
    let limit = if cfg.stratified {
        let (neg, pos) = train.class_counts();
        neg.min(pos)
    } else {
        train.len()
    };
    if cfg.folds > limit {
        return Err(Error::InvalidParameter(format!(
            "{} folds exceed the {} available {}",
            cfg.folds,
            limit,
            if cfg.stratified { "samples of the smaller class" } else { "samples" }
        )));
    }

    let folds = assign_folds(&train.labels, cfg.folds, cfg.stratified, derive_seed(cfg.seed, &[0]));
    let m = cfg.internals.len();
    let n = train.len();

    // out-of-fold predictions, one Vec<Prediction> of length n per member
    let jobs: Vec<(usize, usize)> = (0..m).flat_map(|j| (0..cfg.folds).map(move |f| (j, f))).collect();
    let blocks = jobs
        .par_iter()
        .map(|&(j, f)| {
            let fit_idx: Vec<usize> = (0..n).filter(|&i| folds[i] != f).collect();
            let held: Vec<usize> = (0..n).filter(|&i| folds[i] == f).collect();
            let part = train.subset(&fit_idx);
            let seed = derive_seed(cfg.seed, &[1, j as u64, f as u64]);
            let member = FittedMember::fit(&cfg.internals[j], &part.features, &part.labels, seed)?;
            let preds = held
                .iter()
                .map(|&i| member.predict(&train.features[i]).map(|p| (i, p)))
                .collect::<Result<Vec<_>>>()?;
            Ok((j, preds))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut oof = vec![vec![None; m]; n];
    for (j, preds) in blocks {
        for (i, p) in preds {
            oof[i][j] = Some(p);
        }
    }
    let meta_features: Vec<Vec<f64>> = oof
        .into_iter()
        .map(|row| {
            let preds: Vec<Prediction> = row.into_iter().map(|p| p.expect("every row is held out once")).collect();
            meta_row(&preds)
        })
        .collect();

    let meta = FittedMember::fit(&cfg.meta, &meta_features, &train.labels, derive_seed(cfg.seed, &[2]))?;
    let internals = cfg
        .internals
        .par_iter()
        .enumerate()
        .map(|(j, member)| FittedMember::fit(member, &train.features, &train.labels, derive_seed(cfg.seed, &[3, j as u64])))
        .collect::<Result<Vec<_>>>()?;
    Ok(StackingModel {
        internals,
        meta,
        meta_features,
        folds,
    })
}

impl StackingModel {
    pub fn internals(&self) -> &[FittedMember] {
        &self.internals
    }

    pub fn meta(&self) -> &FittedMember {
        &self.meta
    }

    /// Out-of-fold meta-training matrix, one row per training sample.
    pub fn meta_features(&self) -> &[Vec<f64>] {
        &self.meta_features
    }

    pub fn fold_assignment(&self) -> &[usize] {
        &self.folds
    }

    pub fn meta_input(&self, x: &[f64]) -> Result<Vec<f64>> {
        let internal = self
            .internals
            .par_iter()
            .map(|m| m.predict(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(meta_row(&internal))
    }
}

impl Classifier for StackingModel {
    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        self.meta.predict(&self.meta_input(x)?)
    }
}
