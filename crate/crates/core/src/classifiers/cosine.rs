use std::f64::consts::SQRT_2;

use super::{ClassifierConfig, ClassifierKind, Mode, Prediction};
use crate::encoding::{build_cosine_state, registers, EncodedDataset};
use crate::error::Result;

/// Quantum cosine classifier.
///
/// A SWAP test between the |+⟩ qubit and the branch ancilla gives
/// `P(1) = (1 - ⟨ψx|ψ⟩)/4` with `⟨ψx|ψ⟩ = Σ y_i cos(x_i, x) / (√2 N)`; the
/// |−⟩ label qubit is what turns the `{0, 1}` label bits into `±1` weights.
/// The decision value is `1 - 4 P(1)`, which reaches `±1/√2` when every
/// cosine is `±1`, so the confidence `√2 |1 - 4 P(1)|` spans `[0, 1]`.
pub fn cosine_predict(train: &EncodedDataset, x: &[f64], cfg: &ClassifierConfig) -> Result<Prediction> {
    if cfg.kind != ClassifierKind::Cosine {
        return Err(cfg.clash("cosine"));
    }
    let mut state = build_cosine_state(train, x)?;
    let layout = state.layout().clone();
    let ancilla = layout.register(registers::SWAP_ANCILLA)[0];
    state.swap_test(ancilla, layout.register(registers::PLUS), layout.register(registers::BRANCH))?;
    Ok(match cfg.mode {
        Mode::Statevector => {
            let decision = 1.0 - 4.0 * state.probabilities(&[ancilla])?.get(1);
            Prediction::from_exact_decision(decision, SQRT_2 * decision.abs())
        }
        Mode::Sampled { shots } => {
            let decision = 1.0 - 4.0 * state.sample_shots(&[ancilla], shots, cfg.seed)?.frequency(1);
            Prediction::from_decision(decision, SQRT_2 * decision.abs())
        }
    })
}
