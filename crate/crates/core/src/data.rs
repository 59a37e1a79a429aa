//! Labelled real-valued samples.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A binary class label, `-1` or `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// Label of a signed quantity. `sign(0) = +1`.
    pub fn from_sign(value: f64) -> Label {
        if value < 0.0 {
            Label::Negative
        } else {
            Label::Positive
        }
    }

    pub fn try_from_value(value: f64) -> Result<Label> {
        if value == 1.0 {
            Ok(Label::Positive)
        } else if value == -1.0 {
            Ok(Label::Negative)
        } else {
            Err(Error::InvalidLabel(value))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

/// A named binary classification dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub provenance: String,
}

impl Dataset {
    /// Builds a dataset, checking row widths and that no value is missing.
    pub fn new(
        name: impl Into<String>,
        features: Vec<Vec<f64>>,
        labels: Vec<Label>,
    ) -> Result<Dataset> {
        if features.len() != labels.len() {
            return Err(Error::Dataset(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if let Some(first) = features.first() {
            let d = first.len();
            if d == 0 {
                return Err(Error::Dataset("rows have no features".into()));
            }
            for (i, row) in features.iter().enumerate() {
                if row.len() != d {
                    return Err(Error::Dataset(format!(
                        "row {i} has {} features, expected {d}",
                        row.len()
                    )));
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Dataset(format!("row {i} has a non-finite value")));
                }
            }
        }
        Ok(Dataset {
            name: name.into(),
            features,
            labels,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Dataset {
        self.provenance = note.into();
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|l| **l == Label::Positive).count();
        (self.labels.len() - pos, pos)
    }

    /// The rows at `indices`, in that order (repeats allowed).
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn with_features(&self, features: Vec<Vec<f64>>) -> Dataset {
        debug_assert_eq!(features.len(), self.labels.len());
        Dataset {
            name: self.name.clone(),
            features,
            labels: self.labels.clone(),
            provenance: self.provenance.clone(),
        }
    }
}
