use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

/// One Monte Carlo cross-validation split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Split for a single run: a seeded shuffle of `0..n`, the first
/// `⌊n · train_fraction⌋` indices for training, the rest for validation.
pub fn mc_split(n: usize, train_fraction: f64, seed: u64) -> Result<Split> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let n_train = (n as f64 * train_fraction).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::InvalidParameter(format!(
            "{n} samples at train fraction {train_fraction} leave an empty part"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let validation = order.split_off(n_train);
    Ok(Split {
        train: order,
        validation,
    })
}

/// `runs` independent splits; run `r` uses a seed derived from `(seed, r)`.
pub fn mc_splits(n: usize, runs: usize, train_fraction: f64, seed: u64) -> Result<Vec<Split>> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be at least 1".into()));
    }
    (0..runs)
        .map(|r| mc_split(n, train_fraction, derive_seed(seed, &[r as u64])))
        .collect()
}
