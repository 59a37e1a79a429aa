use super::{ClassifierConfig, ClassifierKind, Mode, Prediction};
use crate::encoding::{build_distance_state, registers, EncodedDataset};
use crate::error::{Error, Result};

/// Below this exact `P(ancilla = 0)` the conditional measurement is
/// treated as exhausted.
const MIN_RETAINED_PROBABILITY: f64 = 1e-12;

/// Prediction plus the fraction of probability mass (or shots) that
/// survived post-selection on the ancilla.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceRun {
    pub prediction: Prediction,
    pub retained_fraction: f64,
}

/// Quantum distance classifier.
///
/// After a Hadamard on the ancilla, `P(a = 0) = Σ ||x + x_i||² / 4N` and the
/// label qubit conditioned on `a = 0` gives
/// `P(0|0) = Σ_{y_i = +1} w_i / Σ w_i` with `w_i = 1 - ||x - x_i||²/4`. The
/// decision value is `P(0|0) - 1/2` and the confidence `2 |P(0|0) - 1/2|`.
pub fn distance_predict(train: &EncodedDataset, x: &[f64], cfg: &ClassifierConfig) -> Result<Prediction> {
    distance_run(train, x, cfg).map(|run| run.prediction)
}

pub fn distance_run(train: &EncodedDataset, x: &[f64], cfg: &ClassifierConfig) -> Result<DistanceRun> {
    if cfg.kind != ClassifierKind::Distance {
        return Err(cfg.clash("distance"));
    }
    let mut state = build_distance_state(train, x)?;
    let ancilla = state.layout().register(registers::ANCILLA)[0];
    let label = state.layout().register(registers::LABEL)[0];
    state.apply_hadamard(ancilla)?;
    let measured = [ancilla, label];

    match cfg.mode {
        Mode::Statevector => {
            let p = state.probabilities(&measured)?;
            // outcome bit 0 = ancilla, bit 1 = label
            let p0 = p.get(0b00) + p.get(0b10);
            if p0 < MIN_RETAINED_PROBABILITY {
                log::warn!("distance classifier: ancilla never reads 0, abstaining");
                return Ok(DistanceRun {
                    prediction: Prediction::abstain(),
                    retained_fraction: p0,
                });
            }
            let decision = p.get(0b00) / p0 - 0.5;
            Ok(DistanceRun {
                prediction: Prediction::from_exact_decision(decision, 2.0 * decision.abs()),
                retained_fraction: p0,
            })
        }
        Mode::Sampled { shots } => {
            let counts = state.sample_shots(&measured, shots, cfg.seed)?;
            match counts.post_select(0, false) {
                Ok(selected) => {
                    let decision = selected.counts.frequency(0) - 0.5;
                    Ok(DistanceRun {
                        prediction: Prediction::from_decision(decision, 2.0 * decision.abs()),
                        retained_fraction: selected.retained_fraction,
                    })
                }
                Err(Error::PostSelectionExhausted) => {
                    log::warn!("distance classifier: post-selection kept no shots, abstaining");
                    Ok(DistanceRun {
                        prediction: Prediction::abstain(),
                        retained_fraction: 0.0,
                    })
                }
                Err(e) => Err(e),
            }
        }
    }
}
