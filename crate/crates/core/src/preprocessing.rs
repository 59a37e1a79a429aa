//! Feature normalization fitted on training rows, and class balancing.
//!
//! A [`Normalizer`] only ever sees the rows passed to [`Normalizer::fit`];
//! applying it to validation rows cannot change its parameters.

use rand::seq::IndexedRandom;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationKind {
    None,
    Std,
    MinMax,
}

impl NormalizationKind {
    pub const ALL: [NormalizationKind; 3] = [NormalizationKind::None, NormalizationKind::Std, NormalizationKind::MinMax];

    pub fn name(&self) -> &'static str {
        match self {
            NormalizationKind::None => "none",
            NormalizationKind::Std => "std",
            NormalizationKind::MinMax => "minmax",
        }
    }
}

impl fmt::Display for NormalizationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormalizationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NormalizationKind::None),
            "std" => Ok(NormalizationKind::Std),
            "minmax" => Ok(NormalizationKind::MinMax),
            other => Err(Error::InvalidParameter(format!("unknown normalization {other}"))),
        }
    }
}

/// Divisor used for the standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StdDevDivisor {
    /// Divide by `N`.
    #[default]
    Population,
    /// Divide by `N - 1`.
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    kind: NormalizationKind,
    /// Per feature: (mean, std) for `Std`, (min, max) for `MinMax`.
    params: Vec<(f64, f64)>,
    n_features: usize,
}

impl Normalizer {
    pub fn fit(kind: NormalizationKind, train: &[Vec<f64>]) -> Result<Normalizer> {
        Normalizer::fit_with(kind, train, StdDevDivisor::Population)
    }

    pub fn fit_with(kind: NormalizationKind, train: &[Vec<f64>], divisor: StdDevDivisor) -> Result<Normalizer> {
        let first = train.first().ok_or(Error::EmptyTrainingSet)?;
        let d = first.len();
        if let Some(bad) = train.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: bad.len(),
            });
        }
        let column = |j: usize| train.iter().map(move |r| r[j]);
        let n = train.len() as f64;
        let params = match kind {
            NormalizationKind::None => Vec::new(),
            NormalizationKind::Std => (0..d)
                .map(|j| {
                    let mean = column(j).sum::<f64>() / n;
                    let ss: f64 = column(j).map(|v| (v - mean).powi(2)).sum();
                    let denom = match divisor {
                        StdDevDivisor::Population => n,
                        StdDevDivisor::Sample => (n - 1.0).max(1.0),
                    };
                    (mean, (ss / denom).sqrt())
                })
                .collect(),
            NormalizationKind::MinMax => (0..d)
                .map(|j| {
                    column(j).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
                })
                .collect(),
        };
        Ok(Normalizer {
            kind,
            params,
            n_features: d,
        })
    }

    pub fn kind(&self) -> NormalizationKind {
        self.kind
    }

    pub fn params(&self) -> &[(f64, f64)] {
        &self.params
    }

    /// Transforms one row. Test rows under min-max are clipped to `[0, 1]`.
    /// Degenerate features (zero spread) map to 0.
    pub fn apply_row(&self, row: &[f64], is_test: bool) -> Result<Vec<f64>> {
        if row.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: row.len(),
            });
        }
        Ok(match self.kind {
            NormalizationKind::None => row.to_vec(),
            NormalizationKind::Std => row
                .iter()
                .zip(&self.params)
                .map(|(&v, &(mean, sd))| if sd > 0.0 { (v - mean) / sd } else { 0.0 })
                .collect(),
            NormalizationKind::MinMax => row
                .iter()
                .zip(&self.params)
                .map(|(&v, &(lo, hi))| {
                    if hi > lo {
                        let t = (v - lo) / (hi - lo);
                        if is_test {
                            t.clamp(0.0, 1.0)
                        } else {
                            t
                        }
                    } else {
                        0.0
                    }
                })
                .collect(),
        })
    }

    pub fn apply(&self, rows: &[Vec<f64>], is_test: bool) -> Result<Vec<Vec<f64>>> {
        rows.iter().map(|r| self.apply_row(r, is_test)).collect()
    }
}

fn class_indices(labels: &[Label]) -> Result<(Vec<usize>, Vec<usize>)> {
    let (pos, neg): (Vec<usize>, Vec<usize>) = (0..labels.len()).partition(|&i| labels[i] == Label::Positive);
    if neg.is_empty() {
        return Err(Error::MissingClass(-1));
    }
    if pos.is_empty() {
        return Err(Error::MissingClass(1));
    }
    Ok((neg, pos))
}

/// Subsamples the majority class down to the minority count, without
/// replacement. Row order of the result follows the original order.
pub fn subsample_majority(data: &Dataset, seed: u64) -> Result<Dataset> {
    let (neg, pos) = class_indices(&data.labels)?;
    let (minority, mut majority) = if neg.len() <= pos.len() { (neg, pos) } else { (pos, neg) };
    let mut rng = rng_from_seed(seed);
    majority.shuffle(&mut rng);
    majority.truncate(minority.len());
    let mut keep: Vec<usize> = minority.into_iter().chain(majority).collect();
    keep.sort_unstable();
    Ok(data.subset(&keep))
}

/// Draws `size / 2` indices with replacement from each class. An odd size
/// rounds down per class.
pub fn stratified_draw(labels: &[Label], size: usize, rng: &mut impl rand::Rng) -> Result<Vec<usize>> {
    let (neg, pos) = class_indices(labels)?;
    if size % 2 == 1 {
        log::warn!("stratified draw of odd size {size}: drawing {} per class", size / 2);
    }
    let half = size / 2;
    let mut out = Vec::with_capacity(2 * half);
    for class in [&neg, &pos] {
        out.extend((0..half).map(|_| *class.choose(rng).expect("class is non-empty")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn col(values: &[f64]) -> Vec<Vec<f64>> {
        values.iter().map(|&v| vec![v]).collect()
    }

    #[test]
    fn fit_examples() {
        let m = Normalizer::fit(NormalizationKind::MinMax, &col(&[0.0, 5.0, 10.0])).unwrap();
        assert_eq!(m.params(), &[(0.0, 10.0)]);
        let s = Normalizer::fit(NormalizationKind::Std, &col(&[1.0, 2.0, 3.0])).unwrap();
        assert_abs_diff_eq!(s.params()[0].0, 2.0);
        assert_abs_diff_eq!(s.params()[0].1, (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        let sample = Normalizer::fit_with(NormalizationKind::Std, &col(&[1.0, 2.0, 3.0]), StdDevDivisor::Sample).unwrap();
        assert_abs_diff_eq!(sample.params()[0].1, 1.0, epsilon = 1e-15);
        let none = Normalizer::fit(NormalizationKind::None, &col(&[1.0])).unwrap();
        assert!(none.params().is_empty());
    }

    #[test]
    fn apply_examples() {
        let m = Normalizer::fit(NormalizationKind::MinMax, &col(&[0.0, 10.0])).unwrap();
        assert_eq!(m.apply_row(&[12.0], true).unwrap(), vec![1.0]);
        assert_eq!(m.apply_row(&[-3.0], true).unwrap(), vec![0.0]);
        assert_eq!(m.apply_row(&[5.0], false).unwrap(), vec![0.5]);

        let s = Normalizer::fit(NormalizationKind::Std, &col(&[1.0, 2.0, 3.0])).unwrap();
        let out = s.apply(&col(&[1.0, 2.0, 3.0]), false).unwrap();
        assert_abs_diff_eq!(out[0][0], -1.224_744_871_391_589, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1][0], 0.0);
        assert_abs_diff_eq!(out[2][0], 1.224_744_871_391_589, epsilon = 1e-12);

        let none = Normalizer::fit(NormalizationKind::None, &col(&[1.0])).unwrap();
        assert_eq!(none.apply_row(&[7.5], true).unwrap(), vec![7.5]);
        assert!(matches!(none.apply_row(&[1.0, 2.0], true), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_features_map_to_zero() {
        let rows = vec![vec![3.0, 1.0], vec![3.0, 2.0]];
        for kind in [NormalizationKind::Std, NormalizationKind::MinMax] {
            let n = Normalizer::fit(kind, &rows).unwrap();
            assert_eq!(n.apply_row(&[3.0, 1.5], true).unwrap()[0], 0.0);
            assert_eq!(n.apply_row(&[9.0, 1.5], false).unwrap()[0], 0.0);
        }
    }

    #[test]
    fn standardized_training_moments() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![f64::from(i).sin() * 4.0 + 1.0, f64::from(i * i)]).collect();
        let n = Normalizer::fit(NormalizationKind::Std, &rows).unwrap();
        let out = n.apply(&rows, false).unwrap();
        for j in 0..2 {
            let mean = out.iter().map(|r| r[j]).sum::<f64>() / 20.0;
            let var = out.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / 20.0;
            assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(var.sqrt(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn balancing() {
        let labels: Vec<Label> = (0..150).map(|i| if i < 100 { Label::Positive } else { Label::Negative }).collect();
        let data = Dataset::new("b", (0..150).map(|i| vec![f64::from(i)]).collect(), labels.clone()).unwrap();
        let balanced = subsample_majority(&data, 1).unwrap();
        assert_eq!(balanced.class_counts(), (50, 50));
        assert_eq!(subsample_majority(&data, 1).unwrap(), balanced);

        let mut rng = rng_from_seed(9);
        let draw = stratified_draw(&labels, 8, &mut rng).unwrap();
        assert_eq!(draw.len(), 8);
        assert_eq!(draw.iter().filter(|&&i| labels[i] == Label::Negative).count(), 4);
        let again = stratified_draw(&labels, 8, &mut rng_from_seed(9)).unwrap();
        assert_eq!(draw, again);
        assert_eq!(stratified_draw(&labels, 7, &mut rng).unwrap().len(), 6);

        assert_eq!(stratified_draw(&[Label::Positive; 3], 2, &mut rng), Err(Error::MissingClass(-1)));
    }
}
