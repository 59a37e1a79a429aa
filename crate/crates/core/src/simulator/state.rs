use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use super::RegisterLayout;
use crate::error::{Error, Result};

/// Tolerance on the squared norm of caller-supplied amplitudes.
pub const INIT_NORM_TOLERANCE: f64 = 1e-8;

/// One control of a multi-controlled gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    /// `true`: fires on |1⟩, `false`: fires on |0⟩.
    pub on_one: bool,
}

impl Control {
    pub fn on_one(qubit: usize) -> Control {
        Control { qubit, on_one: true }
    }

    pub fn on_zero(qubit: usize) -> Control {
        Control { qubit, on_one: false }
    }
}

/// Dense pure state over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ over the layout.
    pub fn zero(layout: RegisterLayout) -> StateVector {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << layout.n_qubits()];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { layout, amplitudes }
    }

    /// Sets the amplitudes directly, renormalizing to machine precision.
    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<Complex64>) -> Result<StateVector> {
        let expected = 1usize << layout.n_qubits();
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if norm_sqr == 0.0 {
            return Err(Error::ZeroNorm);
        }
        if (norm_sqr - 1.0).abs() > INIT_NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "amplitudes have squared norm {norm_sqr}, expected 1"
            )));
        }
        let scale = norm_sqr.sqrt().recip();
        let amplitudes = amplitudes.into_iter().map(|a| a * scale).collect();
        Ok(StateVector { layout, amplitudes })
    }

    pub fn from_real(layout: RegisterLayout, amplitudes: &[f64]) -> Result<StateVector> {
        let amps = amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        StateVector::from_amplitudes(layout, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.layout.n_qubits()
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit < self.n_qubits() {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits(),
            })
        }
    }

    fn check_disjoint(&self, qubits: impl IntoIterator<Item = usize>) -> Result<()> {
        let mut used = 0u64;
        for q in qubits {
            self.check_qubit(q)?;
            if used & (1 << q) != 0 {
                return Err(Error::OverlappingQubits(q));
            }
            used |= 1 << q;
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = (a + b) * FRAC_1_SQRT_2;
                self.amplitudes[j] = (a - b) * FRAC_1_SQRT_2;
            }
        }
        Ok(())
    }

    pub fn apply_x(&mut self, target: usize) -> Result<()> {
        self.apply_mcx(&[], target)
    }

    /// Flips `target` on every basis state where all controls match their
    /// polarity. No controls is a plain X.
    pub fn apply_mcx(&mut self, controls: &[Control], target: usize) -> Result<()> {
        self.check_disjoint(controls.iter().map(|c| c.qubit).chain([target]))?;
        let (mask, value) = controls.iter().fold((0usize, 0usize), |(m, v), c| {
            let bit = 1 << c.qubit;
            (m | bit, if c.on_one { v | bit } else { v })
        });
        let tmask = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & tmask == 0 && i & mask == value {
                self.amplitudes.swap(i, i | tmask);
            }
        }
        Ok(())
    }

    /// Exchanges `reg_a[k]` with `reg_b[k]` on the `control = 1` branch.
    pub fn apply_cswap(&mut self, control: usize, reg_a: &[usize], reg_b: &[usize]) -> Result<()> {
        if reg_a.len() != reg_b.len() {
            return Err(Error::RegisterMismatch {
                left: reg_a.len(),
                right: reg_b.len(),
            });
        }
        self.check_disjoint([control].into_iter().chain(reg_a.iter().copied()).chain(reg_b.iter().copied()))?;
        let cmask = 1usize << control;
        for i in 0..self.amplitudes.len() {
            if i & cmask == 0 {
                continue;
            }
            let j = reg_a.iter().zip(reg_b).fold(i, |j, (&qa, &qb)| {
                let (ba, bb) = ((i >> qa) & 1, (i >> qb) & 1);
                if ba == bb {
                    j
                } else {
                    j ^ (1 << qa) ^ (1 << qb)
                }
            });
            if i < j {
                self.amplitudes.swap(i, j);
            }
        }
        Ok(())
    }

    /// SWAP test between two equal-width registers, with `ancilla` starting
    /// in |0⟩: H, controlled-SWAP, H.
    pub fn swap_test(&mut self, ancilla: usize, reg_a: &[usize], reg_b: &[usize]) -> Result<()> {
        self.apply_hadamard(ancilla)?;
        self.apply_cswap(ancilla, reg_a, reg_b)?;
        self.apply_hadamard(ancilla)
    }

    /// Index-ordered `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.amplitudes
                .iter()
                .map(|a| serde_json::json!([a.re, a.im]))
                .collect(),
        )
    }
}
