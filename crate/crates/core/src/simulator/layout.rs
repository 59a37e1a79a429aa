use crate::error::{Error, Result};

/// Named qubit registers of a state.
///
/// Qubit 0 is the least-significant bit of a basis-state index: basis state
/// `k` has qubit `q` set iff `(k >> q) & 1 == 1`. Within a register the
/// first listed qubit is the register's least-significant bit, so a register
/// holding qubits `[q0, q1, ..]` reads value `sum_j bit(q_j) << j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<(String, Vec<usize>)>,
    n_qubits: usize,
}

impl RegisterLayout {
    /// Allocates contiguous registers in the given order, starting from
    /// qubit 0. Zero-width registers are allowed (a one-sample index
    /// register, for instance).
    pub fn contiguous<'a>(sizes: impl IntoIterator<Item = (&'a str, usize)>) -> RegisterLayout {
        let mut next = 0;
        let registers = sizes
            .into_iter()
            .map(|(name, width)| {
                let qubits: Vec<usize> = (next..next + width).collect();
                next += width;
                (name.to_string(), qubits)
            })
            .collect();
        RegisterLayout {
            registers,
            n_qubits: next,
        }
    }

    /// Explicit layout; registers must be disjoint and cover `0..n_qubits`.
    pub fn from_registers(registers: Vec<(String, Vec<usize>)>) -> Result<RegisterLayout> {
        let n_qubits: usize = registers.iter().map(|(_, q)| q.len()).sum();
        let mut seen = vec![false; n_qubits];
        for (name, qubits) in &registers {
            for &q in qubits {
                if q >= n_qubits {
                    return Err(Error::InvalidLayout(format!(
                        "register {name} uses qubit {q} outside 0..{n_qubits}"
                    )));
                }
                if std::mem::replace(&mut seen[q], true) {
                    return Err(Error::InvalidLayout(format!("qubit {q} assigned twice")));
                }
            }
        }
        let mut names: Vec<&str> = registers.iter().map(|(n, _)| n.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLayout("duplicate register name".into()));
        }
        Ok(RegisterLayout {
            registers,
            n_qubits,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, name: &str) -> Option<&[usize]> {
        self.registers
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, q)| q.as_slice())
    }

    /// Like [`get`](Self::get) but panics on an unknown name; for layouts
    /// built internally where the name is known to exist.
    pub fn register(&self, name: &str) -> &[usize] {
        self.get(name)
            .unwrap_or_else(|| panic!("layout has no register named {name}"))
    }

    pub fn registers(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.registers.iter().map(|(n, q)| (n.as_str(), q.as_slice()))
    }

    /// Basis-state index for the given register values; registers not
    /// mentioned are 0.
    pub fn basis_index(&self, values: &[(&str, usize)]) -> usize {
        values.iter().fold(0, |acc, (name, value)| {
            let qubits = self.register(name);
            debug_assert!(qubits.len() >= usize::BITS as usize || *value >> qubits.len() == 0);
            qubits
                .iter()
                .enumerate()
                .fold(acc, |acc, (bit, &q)| acc | (((value >> bit) & 1) << q))
        })
    }
}
