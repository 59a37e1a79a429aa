//! The three quantum binary classifiers and their classical closed forms.
//!
//! Every classifier runs in one of two modes. In statevector mode the
//! measured probabilities are read exactly off the final state; in sampled
//! mode they are estimated from a finite number of seeded shots.
//!
//! The shared tie rule is `sign(0) = +1`. The k-NN ranks equal scores by
//! ascending training index.

mod cosine;
mod distance;
mod knn;
pub mod oracle;

pub use cosine::cosine_predict;
pub use distance::{distance_predict, distance_run, DistanceRun};
pub use knn::{knn_predict, knn_scores, knn_vote, rank_descending};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::data::Label;
use crate::encoding::EncodedDataset;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, tag_f64s};

/// Shots used on real devices and the default everywhere in the crate.
pub const DEFAULT_SHOTS: u64 = 8192;

/// Statevector decision values closer to zero than this count as ties.
pub const EXACT_TIE_TOLERANCE: f64 = 1e-12;

/// Output of any classifier or ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    /// In `[0, 1]`.
    pub confidence: f64,
    /// Signed quantity whose sign is the label.
    pub decision_value: f64,
}

impl Prediction {
    pub fn from_decision(decision_value: f64, confidence: f64) -> Prediction {
        Prediction {
            label: Label::from_sign(decision_value),
            confidence: confidence.clamp(0.0, 1.0),
            decision_value,
        }
    }

    /// Like [`from_decision`](Self::from_decision) for exact evaluation:
    /// decision values within [`EXACT_TIE_TOLERANCE`] of zero are rounding
    /// residue of an exact tie and snap to `0`, hence to `+1`.
    pub fn from_exact_decision(decision_value: f64, confidence: f64) -> Prediction {
        if decision_value.abs() < EXACT_TIE_TOLERANCE {
            Prediction::from_decision(0.0, 0.0)
        } else {
            Prediction::from_decision(decision_value, confidence)
        }
    }

    /// Default output when a circuit yields no usable estimate.
    pub fn abstain() -> Prediction {
        Prediction {
            label: Label::Positive,
            confidence: 0.0,
            decision_value: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    Cosine,
    Distance,
    Knn { k: usize },
}

impl ClassifierKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierKind::Cosine => "cosine",
            ClassifierKind::Distance => "distance",
            ClassifierKind::Knn { .. } => "knn",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            ClassifierKind::Knn { k } => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierKind::Knn { k } => write!(f, "quantum_{k}NN"),
            other => write!(f, "quantum_{}", other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Statevector,
    Sampled { shots: u64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Statevector => "statevector",
            Mode::Sampled { .. } => "sampled",
        }
    }

    /// Shots for sampled mode, `None` for exact evaluation.
    pub fn shots(&self) -> Option<u64> {
        match self {
            Mode::Statevector => None,
            Mode::Sampled { shots } => Some(*shots),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "statevector" => Ok(Mode::Statevector),
            "sampled" => Ok(Mode::Sampled {
                shots: DEFAULT_SHOTS,
            }),
            other => Err(Error::InvalidParameter(format!("unknown mode {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    pub mode: Mode,
    /// Shot seed in sampled mode; unused by exact evaluation.
    pub seed: u64,
}

impl ClassifierConfig {
    pub fn new(kind: ClassifierKind) -> ClassifierConfig {
        ClassifierConfig {
            kind,
            mode: Mode::Statevector,
            seed: 0,
        }
    }

    pub fn cosine() -> ClassifierConfig {
        ClassifierConfig::new(ClassifierKind::Cosine)
    }

    pub fn distance() -> ClassifierConfig {
        ClassifierConfig::new(ClassifierKind::Distance)
    }

    pub fn knn(k: usize) -> ClassifierConfig {
        ClassifierConfig::new(ClassifierKind::Knn { k })
    }

    pub fn sampled(mut self, shots: u64) -> ClassifierConfig {
        self.mode = Mode::Sampled { shots };
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> ClassifierConfig {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> ClassifierConfig {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Mode::Sampled { shots: 0 } = self.mode {
            return Err(Error::ZeroShots);
        }
        if let ClassifierKind::Knn { k } = self.kind {
            if k == 0 {
                return Err(Error::InvalidK { k, n: 0 });
            }
            if k % 2 == 0 {
                log::warn!("k = {k} is even; vote ties resolve to +1");
            }
        }
        Ok(())
    }

    fn clash(&self, expected: &str) -> Error {
        Error::InvalidParameter(format!(
            "{} config passed to the {expected} classifier",
            self.kind.name()
        ))
    }
}

/// Anything that maps a raw feature row to a [`Prediction`].
pub trait Classifier: Send + Sync {
    fn predict(&self, x: &[f64]) -> Result<Prediction>;

    fn predict_all(&self, xs: &[Vec<f64>]) -> Result<Vec<Prediction>> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

/// Evaluates one classifier on an encoded training set and encoded query,
/// using `cfg.seed` directly as the shot seed.
pub fn predict_encoded(train: &EncodedDataset, x: &[f64], cfg: &ClassifierConfig) -> Result<Prediction> {
    match cfg.kind {
        ClassifierKind::Cosine => cosine_predict(train, x, cfg),
        ClassifierKind::Distance => distance_predict(train, x, cfg),
        ClassifierKind::Knn { .. } => knn_predict(train, x, cfg),
    }
}

/// A quantum classifier bound to its training set.
///
/// The classifiers are instance based: fitting stores the encoded training
/// rows and nothing else is learned.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumClassifier {
    config: ClassifierConfig,
    train: EncodedDataset,
}

impl QuantumClassifier {
    pub fn fit(features: &[Vec<f64>], labels: &[Label], config: ClassifierConfig) -> Result<QuantumClassifier> {
        config.validate()?;
        let train = EncodedDataset::encode(features, labels)?;
        if let ClassifierKind::Knn { k } = config.kind {
            if k > train.len() {
                return Err(Error::InvalidK { k, n: train.len() });
            }
        }
        Ok(QuantumClassifier { config, train })
    }

    pub fn config(&self) -> &ClassifierConfig {
        &self.config
    }

    pub fn train(&self) -> &EncodedDataset {
        &self.train
    }
}

impl Classifier for QuantumClassifier {
    /// Shot seeds are derived from the configured seed and the bits of `x`,
    /// so a prediction depends only on the model and its input.
    fn predict(&self, x: &[f64]) -> Result<Prediction> {
        let encoded = self.train.encode_query(x)?;
        let cfg = ClassifierConfig {
            seed: derive_seed(self.config.seed, &[tag_f64s(x)]),
            ..self.config
        };
        predict_encoded(&self.train, &encoded, &cfg)
    }
}
