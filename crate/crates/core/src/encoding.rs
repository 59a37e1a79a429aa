//! Classical data to initial circuit states.
//!
//! Feature vectors are amplitude encoded: zero-padded to the next power of
//! two and scaled to unit norm. Labels are basis encoded with
//! `l = (1 - y) / 2`, so `+1 -> |0⟩` and `-1 -> |1⟩`. Index registers hold
//! `⌈log2 N⌉` qubits; index slots at or beyond `N` keep amplitude zero, so the
//! `1/√N` normalization of the training superposition is exact for any `N`.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::data::Label;
use crate::error::{Error, Result};
use crate::simulator::{Control, RegisterLayout, StateVector};

/// Rows with a norm below this encode as the uniform unit vector.
pub const ZERO_NORM_THRESHOLD: f64 = 1e-12;

/// Tolerance for the unit-norm precondition on already-encoded inputs.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-10;

/// Register names used by the circuit builders.
pub mod registers {
    pub const SWAP_ANCILLA: &str = "swap_ancilla";
    pub const PLUS: &str = "plus";
    pub const BRANCH: &str = "branch";
    pub const LABEL: &str = "label";
    pub const FEATURE: &str = "feature";
    pub const TRAIN_FEATURE: &str = "train_feature";
    pub const TEST_FEATURE: &str = "test_feature";
    pub const INDEX: &str = "index";
    pub const ANCILLA: &str = "ancilla";
}

use registers::*;

/// `⌈log2 n⌉`, with `n = 1` needing zero qubits.
pub fn qubits_for(n: usize) -> usize {
    n.max(1).next_power_of_two().trailing_zeros() as usize
}

/// Zero-pads `x` to a power-of-two length and scales it to unit norm.
pub fn unit_encode(x: &[f64]) -> Vec<f64> {
    let dim = x.len().max(1).next_power_of_two();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut out = vec![0.0; dim];
    if norm < ZERO_NORM_THRESHOLD {
        // The fallback spreads over the original coordinates only, so the
        // padding stays zero.
        let d = x.len().max(1);
        let v = (d as f64).sqrt().recip();
        out[..d].iter_mut().for_each(|o| *o = v);
    } else {
        out.iter_mut().zip(x).for_each(|(o, v)| *o = v / norm);
    }
    out
}

/// Basis-encoded label bit.
pub fn encode_label(y: f64) -> Result<u8> {
    Label::try_from_value(y).map(label_bit)
}

pub fn label_bit(label: Label) -> u8 {
    match label {
        Label::Positive => 0,
        Label::Negative => 1,
    }
}

/// Unit-norm padded training rows with their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset {
    features: Vec<Vec<f64>>,
    labels: Vec<Label>,
    raw_dim: usize,
}

impl EncodedDataset {
    /// Encodes raw (already normalized) rows.
    pub fn encode(features: &[Vec<f64>], labels: &[Label]) -> Result<EncodedDataset> {
        if features.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.len(),
                got: labels.len(),
            });
        }
        let raw_dim = features[0].len();
        if let Some(bad) = features.iter().find(|r| r.len() != raw_dim) {
            return Err(Error::DimensionMismatch {
                expected: raw_dim,
                got: bad.len(),
            });
        }
        Ok(EncodedDataset {
            features: features.iter().map(|r| unit_encode(r)).collect(),
            labels: labels.to_vec(),
            raw_dim,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn encoded_labels(&self) -> Vec<u8> {
        self.labels.iter().map(|&l| label_bit(l)).collect()
    }

    pub fn raw_dim(&self) -> usize {
        self.raw_dim
    }

    pub fn padded_dim(&self) -> usize {
        self.raw_dim.max(1).next_power_of_two()
    }

    pub fn padded_count(&self) -> usize {
        self.len().next_power_of_two()
    }

    pub fn index_qubits(&self) -> usize {
        qubits_for(self.len())
    }

    pub fn feature_qubits(&self) -> usize {
        qubits_for(self.raw_dim)
    }

    /// Encodes a raw query row with the training pipeline.
    pub fn encode_query(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.raw_dim {
            return Err(Error::DimensionMismatch {
                expected: self.raw_dim,
                got: x.len(),
            });
        }
        Ok(unit_encode(x))
    }

    fn check_query(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.padded_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.padded_dim(),
                got: x.len(),
            });
        }
        let norm_sqr: f64 = x.iter().map(|v| v * v).sum();
        if (norm_sqr - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "query has squared norm {norm_sqr}, expected 1"
            )));
        }
        Ok(())
    }
}

fn real_state(layout: RegisterLayout, amps: Vec<f64>) -> Result<StateVector> {
    StateVector::from_amplitudes(layout, amps.into_iter().map(|a| Complex64::new(a, 0.0)).collect())
}

/// Cosine classifier input.
///
/// Core registers (LSB first): branch ancilla, label, feature, index. Two
/// SWAP-test qubits sit below them: the test ancilla (qubit 0, |0⟩) and a
/// qubit in |+⟩ (qubit 1). The core holds
/// `(|ψx⟩|0⟩ + |ψ⟩|1⟩)/√2` on the branch ancilla, with
/// `|ψx⟩ = Σ|i⟩|x_i⟩|l_i⟩/√N` and `|ψ⟩ = Σ|i⟩|x⟩|−⟩/√N`.
pub fn build_cosine_state(train: &EncodedDataset, x: &[f64]) -> Result<StateVector> {
    train.check_query(x)?;
    let layout = RegisterLayout::contiguous([
        (SWAP_ANCILLA, 1),
        (PLUS, 1),
        (BRANCH, 1),
        (LABEL, 1),
        (FEATURE, train.feature_qubits()),
        (INDEX, train.index_qubits()),
    ]);
    let n = train.len() as f64;
    // |+>|0> on the two SWAP-test qubits contributes 1/√2; the branch 1/√2.
    let base = 0.5 / n.sqrt();
    let minus = FRAC_1_SQRT_2;
    let mut amps = vec![0.0; 1 << layout.n_qubits()];
    for (i, (xi, &label)) in train.features().iter().zip(train.labels()).enumerate() {
        for f in 0..train.padded_dim() {
            for plus in 0..2 {
                let training = layout.basis_index(&[
                    (PLUS, plus),
                    (BRANCH, 0),
                    (LABEL, usize::from(label_bit(label))),
                    (FEATURE, f),
                    (INDEX, i),
                ]);
                amps[training] = base * xi[f];
                for (l, sign) in [(0, 1.0), (1, -1.0)] {
                    let test = layout.basis_index(&[
                        (PLUS, plus),
                        (BRANCH, 1),
                        (LABEL, l),
                        (FEATURE, f),
                        (INDEX, i),
                    ]);
                    amps[test] = base * sign * minus * x[f];
                }
            }
        }
    }
    real_state(layout, amps)
}

/// Distance classifier input `Σ|i⟩(|0⟩|x⟩ + |1⟩|x_i⟩)|l_i⟩/√(2N)`.
///
/// Registers (LSB first): ancilla, feature, index, label. Amplitudes are set
/// with the label qubit at |0⟩; labels are then written with X (every sample
/// labelled `-1`) or one multi-controlled X per `-1` sample, controlled on
/// the index bits of that sample.
pub fn build_distance_state(train: &EncodedDataset, x: &[f64]) -> Result<StateVector> {
    train.check_query(x)?;
    let layout = RegisterLayout::contiguous([
        (ANCILLA, 1),
        (FEATURE, train.feature_qubits()),
        (INDEX, train.index_qubits()),
        (LABEL, 1),
    ]);
    let scale = (2.0 * train.len() as f64).sqrt().recip();
    let mut amps = vec![0.0; 1 << layout.n_qubits()];
    for (i, xi) in train.features().iter().enumerate() {
        for f in 0..train.padded_dim() {
            amps[layout.basis_index(&[(ANCILLA, 0), (FEATURE, f), (INDEX, i)])] = scale * x[f];
            amps[layout.basis_index(&[(ANCILLA, 1), (FEATURE, f), (INDEX, i)])] = scale * xi[f];
        }
    }
    let mut state = real_state(layout, amps)?;
    write_labels(&mut state, train)?;
    Ok(state)
}

fn write_labels(state: &mut StateVector, train: &EncodedDataset) -> Result<()> {
    let bits = train.encoded_labels();
    let label = state.layout().register(LABEL)[0];
    if bits.iter().all(|&b| b == 0) {
        return Ok(());
    }
    if bits.iter().all(|&b| b == 1) {
        return state.apply_x(label);
    }
    let index: Vec<usize> = state.layout().register(INDEX).to_vec();
    for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b == 1) {
        let controls: Vec<Control> = index
            .iter()
            .enumerate()
            .map(|(bit, &q)| Control {
                qubit: q,
                on_one: (i >> bit) & 1 == 1,
            })
            .collect();
        state.apply_mcx(&controls, label)?;
    }
    Ok(())
}

/// k-NN input `|0⟩|x⟩|ψx⟩` with `|ψx⟩ = Σ|x_i⟩|i⟩/√N`.
///
/// Registers (LSB first): ancilla, index, train feature, test feature.
/// Labels stay classical.
pub fn build_knn_state(train: &EncodedDataset, x: &[f64]) -> Result<StateVector> {
    train.check_query(x)?;
    let layout = RegisterLayout::contiguous([
        (ANCILLA, 1),
        (INDEX, train.index_qubits()),
        (TRAIN_FEATURE, train.feature_qubits()),
        (TEST_FEATURE, train.feature_qubits()),
    ]);
    let scale = (train.len() as f64).sqrt().recip();
    let mut amps = vec![0.0; 1 << layout.n_qubits()];
    for (i, xi) in train.features().iter().enumerate() {
        for (ft, &a) in xi.iter().enumerate() {
            for (fx, &b) in x.iter().enumerate() {
                amps[layout.basis_index(&[(INDEX, i), (TRAIN_FEATURE, ft), (TEST_FEATURE, fx)])] =
                    scale * a * b;
            }
        }
    }
    real_state(layout, amps)
}
