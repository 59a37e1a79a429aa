#![allow(dead_code)]

use qensemble::encoding::{unit_encode, EncodedDataset};
use qensemble::rng::rng_from_seed;
use qensemble::{Dataset, Label};
use rand::Rng;

pub use qensemble::rng::SimRng;

pub fn rng(seed: u64) -> SimRng {
    rng_from_seed(seed)
}

pub fn random_row(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_unit(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v = random_row(rng, d);
        if v.iter().map(|a| a * a).sum::<f64>() > 1e-6 {
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Random labels with both classes present.
pub fn mixed_labels(rng: &mut impl Rng, n: usize) -> Vec<Label> {
    loop {
        let labels: Vec<Label> = (0..n)
            .map(|_| if rng.random_bool(0.5) { Label::Positive } else { Label::Negative })
            .collect();
        if n < 2 || (labels.contains(&Label::Positive) && labels.contains(&Label::Negative)) {
            return labels;
        }
    }
}

/// A random encoded training set and an encoded query.
pub fn random_instance(rng: &mut impl Rng, n: usize, d: usize) -> (EncodedDataset, Vec<f64>) {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| random_row(rng, d)).collect();
    let labels = mixed_labels(rng, n);
    let train = EncodedDataset::encode(&rows, &labels).unwrap();
    let x = unit_encode(&random_row(rng, d));
    (train, x)
}

/// Four one-hot training vectors labelled (-1, -1, +1, +1).
pub fn toy_train() -> EncodedDataset {
    let rows: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let labels = [Label::Negative, Label::Negative, Label::Positive, Label::Positive];
    EncodedDataset::encode(&rows, &labels).unwrap()
}

/// Two uniform blobs, shifted along axis 0 (`-1`) or axis 1 (`+1`);
/// labels alternate. Needs `d >= 2`.
pub fn blobs(name: &str, n: usize, d: usize, separation: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let labels: Vec<Label> = (0..n)
        .map(|i| if i % 2 == 0 { Label::Negative } else { Label::Positive })
        .collect();
    let features = labels
        .iter()
        .map(|l| {
            // classes differ in direction, not only in magnitude
            let axis = usize::from(*l == Label::Positive);
            (0..d)
                .map(|j| 1.0 + if j == axis { separation } else { 0.0 } + r.random_range(-1.0..1.0))
                .collect()
        })
        .collect();
    Dataset::new(name, features, labels).unwrap()
}

pub fn datasets_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../datasets")
}

pub fn iris(pair: &str) -> Dataset {
    qensemble::harness::load_dataset(datasets_dir().join(format!("iris_{pair}.csv"))).unwrap()
}

pub const IRIS_PAIRS: [&str; 3] = ["setosa_versicolor", "setosa_virginica", "versicolor_virginica"];
