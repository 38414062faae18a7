use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::gate::Pauli;
use super::state::{StateVector, C64};
use crate::error::{Error, Result};

/// Tensor product of single-qubit Paulis stored as X/Z bit masks.
/// Character `k` of the textual form acts on qubit `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: usize,
    z_mask: usize,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            x_mask: 0,
            z_mask: 0,
        }
    }

    pub fn from_paulis(ops: &[Pauli]) -> Self {
        let mut s = Self::identity(ops.len());
        for (q, p) in ops.iter().enumerate() {
            s.set(q, *p);
        }
        s
    }

    /// Single non-identity factor on qubit `q`.
    pub fn single(n_qubits: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n_qubits);
        s.set(q, p);
        s
    }

    fn set(&mut self, q: usize, p: Pauli) {
        let bit = 1 << q;
        self.x_mask &= !bit;
        self.z_mask &= !bit;
        match p {
            Pauli::I => {}
            Pauli::X => self.x_mask |= bit,
            Pauli::Z => self.z_mask |= bit,
            Pauli::Y => {
                self.x_mask |= bit;
                self.z_mask |= bit;
            }
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, q: usize) -> Pauli {
        let bit = 1 << q;
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// P|b⟩ = phase · |b ⊕ x_mask⟩ with phase = i^{#Y} (−1)^{|b ∧ z_mask|}.
    #[inline]
    fn action(&self, b: usize) -> (usize, C64) {
        let n_y = (self.x_mask & self.z_mask).count_ones();
        let sign = if (b & self.z_mask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        let phase = match n_y % 4 {
            0 => C64::new(sign, 0.0),
            1 => C64::new(0.0, sign),
            2 => C64::new(-sign, 0.0),
            _ => C64::new(0.0, -sign),
        };
        (b ^ self.x_mask, phase)
    }

    /// out += coeff · P|ψ⟩.
    pub(crate) fn apply_add(&self, coeff: f64, input: &[C64], out: &mut [C64]) {
        for (b, a) in input.iter().enumerate() {
            let (b2, phase) = self.action(b);
            out[b2] += phase * a * coeff;
        }
    }

    pub fn expectation(&self, amps: &[C64]) -> C64 {
        amps.iter()
            .enumerate()
            .map(|(b, a)| {
                let (b2, phase) = self.action(b);
                amps[b2].conj() * phase * a
            })
            .sum()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits {
            let c = match self.get(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 24 {
            return Err(Error::Hamiltonian(format!(
                "bad Pauli string length in {s:?}"
            )));
        }
        let ops = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Hamiltonian(format!(
                    "bad Pauli character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_paulis(&ops))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// H = Σ_α λ_α P_α with real coefficients and merged duplicate strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliHamiltonian {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn new(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (f64, PauliString)>,
    ) -> Result<Self> {
        let mut h = Self::zero(n_qubits);
        for (c, p) in terms {
            h.add_term(c, p)?;
        }
        Ok(h)
    }

    pub fn from_strs(terms: &[(f64, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(c, s)| Ok((*c, s.parse::<PauliString>()?)))
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map(|(_, p)| p.n_qubits()).unwrap_or(1);
        Self::new(n, parsed)
    }

    pub fn add_term(&mut self, coeff: f64, p: PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: p.n_qubits(),
            });
        }
        if !coeff.is_finite() {
            return Err(Error::Hamiltonian(format!("non-finite coefficient on {p}")));
        }
        match self.terms.iter_mut().find(|(_, q)| *q == p) {
            Some((c, _)) => *c += coeff,
            None => self.terms.push((coeff, p)),
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(c, p)| (c * factor, *p)).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        let mut h = self.clone();
        for (c, p) in &other.terms {
            h.add_term(*c, *p)?;
        }
        Ok(h)
    }

    /// H|ψ⟩ as raw amplitudes.
    pub fn apply(&self, amps: &[C64]) -> Result<Vec<C64>> {
        if amps.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: amps.len(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for (c, p) in &self.terms {
            p.apply_add(*c, amps, &mut out);
        }
        Ok(out)
    }

    /// Dense 2^n × 2^n matrix.
    pub fn matrix(&self) -> DMatrix<C64> {
        let dim = self.dim();
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (c, p) in &self.terms {
            for b in 0..dim {
                let (b2, phase) = p.action(b);
                m[(b2, b)] += phase * *c;
            }
        }
        m
    }

    /// ⟨b|H|b⟩ for every computational basis state.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|b| {
                self.terms
                    .iter()
                    .filter(|(_, p)| p.is_diagonal())
                    .map(|(c, p)| c * p.action(b).1.re)
                    .sum()
            })
            .collect()
    }

    pub fn abs_coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }
}

/// ⟨ψ|H|ψ⟩ for a normalized state.
pub fn expectation(state: &StateVector, ham: &PauliHamiltonian) -> Result<f64> {
    if state.n_qubits() != ham.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: ham.n_qubits(),
            got: state.n_qubits(),
        });
    }
    let amps = state.amplitudes();
    let total: C64 = ham
        .terms()
        .iter()
        .map(|(c, p)| p.expectation(amps) * *c)
        .sum();
    let scale = 1.0 + ham.abs_coefficient_sum();
    if total.im.abs() > 1e-10 * scale {
        return Err(Error::Numerical(format!(
            "non-real expectation value {total}"
        )));
    }
    Ok(total.re)
}
