mod common;

use qensemble::classifiers::{distance_run, predict_encoded};
use qensemble::encoding::EncodedDataset;
use qensemble::{ClassifierConfig, Label};

fn flipped(train: &EncodedDataset) -> EncodedDataset {
    let labels: Vec<Label> = train.labels().iter().map(|l| l.flipped()).collect();
    EncodedDataset::encode(train.features(), &labels).unwrap()
}

#[test]
fn label_flip_negates_decisions() {
    let mut r = common::rng(5);
    for _ in 0..200 {
        let n = 2 + (rand::Rng::random_range(&mut r, 0..7usize));
        let (train, x) = common::random_instance(&mut r, n, 3);
        let mirror = flipped(&train);
        for cfg in [ClassifierConfig::cosine(), ClassifierConfig::distance()] {
            let a = predict_encoded(&train, &x, &cfg).unwrap();
            let b = predict_encoded(&mirror, &x, &cfg).unwrap();
            assert!((a.decision_value + b.decision_value).abs() < 1e-12);
            if a.decision_value.abs() > 1e-9 {
                assert_eq!(a.label, b.label.flipped());
            }
        }
    }
}

#[test]
fn sampled_decisions_converge() {
    let mut r = common::rng(17);
    let (train, x) = common::random_instance(&mut r, 4, 4);
    for cfg in [ClassifierConfig::cosine(), ClassifierConfig::distance()] {
        let exact = predict_encoded(&train, &x, &cfg).unwrap().decision_value;
        let mut errors = Vec::new();
        for shots in [1u64 << 10, 1 << 14, 1 << 18] {
            let err: f64 = (0..20)
                .map(|seed| {
                    let sampled = predict_encoded(&train, &x, &cfg.sampled(shots).with_seed(seed)).unwrap();
                    (sampled.decision_value - exact).abs()
                })
                .sum::<f64>()
                / 20.0;
            errors.push(err);
        }
        // mean absolute error shrinks like 1/√shots: a factor 4 per 16× shots
        assert!(errors[1] < errors[0] / 2.0, "{errors:?}");
        assert!(errors[2] < errors[1] / 2.0, "{errors:?}");
        assert!(errors[2] < 5e-3);
    }
}

#[test]
fn sampled_mode_is_deterministic() {
    let mut r = common::rng(9);
    let (train, x) = common::random_instance(&mut r, 8, 4);
    for cfg in [ClassifierConfig::cosine(), ClassifierConfig::distance(), ClassifierConfig::knn(3)] {
        let cfg = cfg.sampled(1000).with_seed(31);
        assert_eq!(
            predict_encoded(&train, &x, &cfg).unwrap(),
            predict_encoded(&train, &x, &cfg).unwrap()
        );
    }
}

#[test]
fn distance_post_selection_rate() {
    // the ancilla reads 0 with probability Σ w_i / N
    let mut r = common::rng(3);
    let (train, x) = common::random_instance(&mut r, 6, 3);
    let exact = distance_run(&train, &x, &ClassifierConfig::distance()).unwrap();
    let weights = qensemble::classifiers::oracle::distance_weights(&train, &x);
    let expected = weights.iter().sum::<f64>() / 6.0;
    assert!((exact.retained_fraction - expected).abs() < 1e-12);
    let sampled = distance_run(&train, &x, &ClassifierConfig::distance().sampled(1 << 16).with_seed(1)).unwrap();
    assert!((sampled.retained_fraction - expected).abs() < 0.01);
}

#[test]
fn all_positive_labels() {
    let mut r = common::rng(10);
    for _ in 0..50 {
        let rows: Vec<Vec<f64>> = (0..5).map(|_| common::random_row(&mut r, 3)).collect();
        let train = EncodedDataset::encode(&rows, &[Label::Positive; 5]).unwrap();
        let x = qensemble::encoding::unit_encode(&common::random_row(&mut r, 3));
        let p = predict_encoded(&train, &x, &ClassifierConfig::distance()).unwrap();
        assert_eq!(p.label, Label::Positive);
        let knn = predict_encoded(&train, &x, &ClassifierConfig::knn(3)).unwrap();
        assert_eq!(knn.label, Label::Positive);
    }
    // cosine only for features on the positive orthant
    let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![1.0 + i as f64, 2.0, 0.5]).collect();
    let train = EncodedDataset::encode(&rows, &[Label::Positive; 5]).unwrap();
    let x = qensemble::encoding::unit_encode(&[0.2, 0.4, 3.0]);
    assert_eq!(predict_encoded(&train, &x, &ClassifierConfig::cosine()).unwrap().label, Label::Positive);
}
