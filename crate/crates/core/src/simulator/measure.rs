use rand_distr::{Binomial, Distribution};
use std::fmt;

use super::StateVector;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Marginal distribution over a list of measured qubits.
///
/// Outcome `k` has bit `j` equal to the value of `measured[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Probabilities {
    pub measured: Vec<usize>,
    pub values: Vec<f64>,
}

impl Probabilities {
    pub fn get(&self, outcome: usize) -> f64 {
        self.values[outcome]
    }
}

/// Outcome extraction for a measured qubit list.
fn outcome_of(basis: usize, measured: &[usize]) -> usize {
    measured
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | (((basis >> q) & 1) << j))
}

impl StateVector {
    fn check_measured(&self, measured: &[usize]) -> Result<()> {
        if measured.is_empty() {
            return Err(Error::NothingMeasured);
        }
        let mut seen = 0u64;
        for &q in measured {
            if q >= self.n_qubits() {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits(),
                });
            }
            if seen & (1 << q) != 0 {
                return Err(Error::OverlappingQubits(q));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    /// Exact marginal probabilities of the measured qubits.
    pub fn probabilities(&self, measured: &[usize]) -> Result<Probabilities> {
        self.check_measured(measured)?;
        let mut values = vec![0.0; 1 << measured.len()];
        for (basis, amp) in self.amplitudes().iter().enumerate() {
            values[outcome_of(basis, measured)] += amp.norm_sqr();
        }
        Ok(Probabilities {
            measured: measured.to_vec(),
            values,
        })
    }

    /// Draws `shots` i.i.d. measurement outcomes.
    ///
    /// The multinomial draw is realised as a chain of conditional binomials
    /// over outcomes in index order, each fed by the same ChaCha8 stream, so
    /// the result is a pure function of `(state, measured, shots, seed)`.
    pub fn sample_shots(&self, measured: &[usize], shots: u64, seed: u64) -> Result<ShotCounts> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs = self.probabilities(measured)?;
        Ok(multinomial(&probs.values, shots, seed, measured.len()))
    }
}

fn multinomial(probs: &[f64], shots: u64, seed: u64, width: usize) -> ShotCounts {
    let mut rng = rng_from_seed(seed);
    let mut counts = vec![0u64; probs.len()];
    let mut remaining_shots = shots;
    let mut remaining_mass: f64 = probs.iter().sum();
    for (k, &p) in probs.iter().enumerate() {
        if remaining_shots == 0 {
            break;
        }
        let last = k + 1 == probs.len() || remaining_mass <= p;
        let c = if last {
            remaining_shots
        } else if p <= 0.0 {
            0
        } else {
            let q = (p / remaining_mass).clamp(0.0, 1.0);
            Binomial::new(remaining_shots, q)
                .expect("probability clamped to [0, 1]")
                .sample(&mut rng)
        };
        counts[k] = c;
        remaining_shots -= c;
        remaining_mass -= p;
    }
    ShotCounts {
        width,
        counts,
        total_shots: shots,
    }
}

/// Occurrence counts of measured bitstrings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    width: usize,
    counts: Vec<u64>,
    total_shots: u64,
}

/// Result of [`ShotCounts::post_select`].
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelected {
    pub counts: ShotCounts,
    /// Fraction of shots that matched the required outcome.
    pub retained_fraction: f64,
}

impl ShotCounts {
    /// Builds counts from `(outcome, count)` pairs over `width` measured bits.
    pub fn from_pairs(width: usize, pairs: impl IntoIterator<Item = (usize, u64)>) -> Result<ShotCounts> {
        let mut counts = vec![0u64; 1 << width];
        for (outcome, c) in pairs {
            if outcome >= counts.len() {
                return Err(Error::InvalidParameter(format!(
                    "outcome {outcome} does not fit in {width} bits"
                )));
            }
            counts[outcome] += c;
        }
        let total_shots = counts.iter().sum();
        Ok(ShotCounts {
            width,
            counts,
            total_shots,
        })
    }

    /// Builds counts from `(bitstring, count)` pairs in measurement order.
    pub fn from_bitstrings<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Result<ShotCounts> {
        let pairs: Vec<(&str, u64)> = pairs.into_iter().collect();
        let width = pairs.first().map_or(0, |(b, _)| b.len());
        let mut parsed = Vec::with_capacity(pairs.len());
        for (bits, c) in pairs {
            if bits.len() != width {
                return Err(Error::InvalidParameter(format!("bitstring {bits} has the wrong width")));
            }
            let mut outcome = 0;
            for (j, ch) in bits.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => outcome |= 1 << j,
                    _ => return Err(Error::InvalidParameter(format!("bad bitstring {bits}"))),
                }
            }
            parsed.push((outcome, c));
        }
        ShotCounts::from_pairs(width, parsed)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: usize) -> f64 {
        self.count(outcome) as f64 / self.total_shots as f64
    }

    /// Non-zero entries in outcome order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(k, c)| (k, *c))
    }

    /// Bitstring for an outcome in measurement order: the character at
    /// position `j` is the value of the `j`-th measured qubit.
    pub fn bitstring(&self, outcome: usize) -> String {
        (0..self.width)
            .map(|j| if (outcome >> j) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Keeps the shots whose bit at `position` equals `outcome` and projects
    /// that bit out.
    pub fn post_select(&self, position: usize, outcome: bool) -> Result<PostSelected> {
        if self.total_shots == 0 {
            return Err(Error::PostSelectionExhausted);
        }
        if position >= self.width {
            return Err(Error::InvalidParameter(format!(
                "position {position} outside {} measured bits",
                self.width
            )));
        }
        let want = usize::from(outcome);
        let low = (1usize << position) - 1;
        let retained = self.iter().filter(|(k, _)| (k >> position) & 1 == want).map(|(k, c)| {
            let projected = (k & low) | ((k >> (position + 1)) << position);
            (projected, c)
        });
        let counts = ShotCounts::from_pairs(self.width - 1, retained)?;
        if counts.total_shots == 0 {
            return Err(Error::PostSelectionExhausted);
        }
        let retained_fraction = counts.total_shots as f64 / self.total_shots as f64;
        Ok(PostSelected {
            counts,
            retained_fraction,
        })
    }
}

impl fmt::Display for ShotCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {c}", self.bitstring(k))?;
        }
        write!(f, "}}")
    }
}
