use std::cmp::Ordering;

use super::{ClassifierConfig, ClassifierKind, Mode, Prediction};
use crate::data::Label;
use crate::encoding::{build_knn_state, registers, EncodedDataset};
use crate::error::{Error, Result};

/// Below this `P(ancilla = a)` the conditional index distribution for `a`
/// is replaced by the uniform one.
const MIN_BRANCH_PROBABILITY: f64 = 1e-12;

/// `Q(i) = P(i|0) - P(i|1)` for every training index.
///
/// After the SWAP test between the two feature registers,
/// `P(i, a=0) = (1 + F_i) / 2N` and `P(i, a=1) = (1 - F_i) / 2N` with
/// `F_i = (x_i · x)²`, so `Q(i) = 2 (F_i - ⟨F⟩) / (N (1 - ⟨F⟩²))`.
/// Fidelity squares the overlap: `x_i` and `-x_i` score identically, which
/// is why this classifier wants features on a common half-axis (min-max
/// scaling rather than standardization).
pub fn knn_scores(train: &EncodedDataset, x: &[f64], cfg: &ClassifierConfig) -> Result<Vec<f64>> {
    let mut state = build_knn_state(train, x)?;
    let layout = state.layout().clone();
    let ancilla = layout.register(registers::ANCILLA)[0];
    state.swap_test(
        ancilla,
        layout.register(registers::TRAIN_FEATURE),
        layout.register(registers::TEST_FEATURE),
    )?;
    let mut measured = vec![ancilla];
    measured.extend_from_slice(layout.register(registers::INDEX));

    let n = train.len();
    // joint[i][a] over real training indices; outcome = a + 2 i
    let joint: Vec<[f64; 2]> = match cfg.mode {
        Mode::Statevector => {
            let p = state.probabilities(&measured)?;
            (0..n).map(|i| [p.get(2 * i), p.get(2 * i + 1)]).collect()
        }
        Mode::Sampled { shots } => {
            let counts = state.sample_shots(&measured, shots, cfg.seed)?;
            (0..n)
                .map(|i| [counts.count(2 * i) as f64, counts.count(2 * i + 1) as f64])
                .collect()
        }
    };
    let branch = |a: usize| joint.iter().map(|j| j[a]).sum::<f64>();
    let (mass0, mass1) = (branch(0), branch(1));
    let total = mass0 + mass1;
    let conditional = |i: usize, a: usize, mass: f64| {
        if mass / total < MIN_BRANCH_PROBABILITY {
            1.0 / n as f64
        } else {
            joint[i][a] / mass
        }
    };
    Ok((0..n)
        .map(|i| conditional(i, 0, mass0) - conditional(i, 1, mass1))
        .collect())
}

/// Indices by descending score; equal scores keep ascending index order.
pub fn rank_descending(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap_or(Ordering::Equal));
    order
}

/// Majority vote over the first `k` ranked samples. Confidence is the
/// majority fraction; vote ties go to `+1`.
pub fn knn_vote(labels: &[Label], ranking: &[usize], k: usize) -> Result<Prediction> {
    if k == 0 || k > ranking.len() {
        return Err(Error::InvalidK { k, n: ranking.len() });
    }
    let positive = ranking[..k]
        .iter()
        .filter(|&&i| labels[i] == Label::Positive)
        .count();
    let negative = k - positive;
    let decision = (positive as f64 - negative as f64) / k as f64;
    Ok(Prediction {
        label: Label::from_sign(decision),
        confidence: positive.max(negative) as f64 / k as f64,
        decision_value: decision,
    })
}

/// Quantum k-NN: scores every training sample by `Q(i)`, sorts classically
/// and votes among the top `k`.
pub fn knn_predict(train: &EncodedDataset, x: &[f64], cfg: &ClassifierConfig) -> Result<Prediction> {
    let ClassifierKind::Knn { k } = cfg.kind else {
        return Err(cfg.clash("knn"));
    };
    if k == 0 || k > train.len() {
        return Err(Error::InvalidK { k, n: train.len() });
    }
    let scores = knn_scores(train, x, cfg)?;
    knn_vote(train.labels(), &rank_descending(&scores), k)
}
