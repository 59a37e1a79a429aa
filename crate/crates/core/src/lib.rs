//! Ensembles of amplitude-encoded quantum binary classifiers.
//!
//! The crate simulates three quantum classifiers (cosine, distance and
//! k-NN) on a small dense statevector kernel and combines them with
//! bagging, AdaBoost and stacking. A Monte Carlo cross-validation harness
//! and a CLI reproduce normalization, shot-count and class-balance studies.
//!
//! Module map:
//!
//! * [`simulator`]: statevector, gates, marginals, shots, post-selection.
//! * [`encoding`]: amplitude and basis encoding, classifier input states.
//! * [`classifiers`]: the quantum classifiers and their classical oracles.
//! * [`preprocessing`]: train-fitted normalizers and class balancing.
//! * [`ensembles`]: bagging, boosting and stacking.
//! * [`harness`]: datasets, splits, experiment grids and result export.

pub mod classifiers;
pub mod data;
pub mod encoding;
pub mod ensembles;
pub mod error;
pub mod harness;
pub mod preprocessing;
pub mod rng;
pub mod simulator;

pub use classifiers::{Classifier, ClassifierConfig, ClassifierKind, Mode, Prediction, QuantumClassifier};
pub use data::{Dataset, Label};
pub use error::{Error, Result};
pub use preprocessing::{NormalizationKind, Normalizer};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/simulator.md")]
    mod simulator {}
    #[doc = include_str!("../../../book/src/encoding.md")]
    mod encoding {}
    #[doc = include_str!("../../../book/src/classifiers.md")]
    mod classifiers {}
    #[doc = include_str!("../../../book/src/preprocessing.md")]
    mod preprocessing {}
    #[doc = include_str!("../../../book/src/ensembles.md")]
    mod ensembles {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
}
