use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::state::{StateVector, C64};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    Rx,
    Ry,
    Rz,
    I,
    Cnot,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }

    pub fn arity(self) -> usize {
        if self == GateKind::Cnot {
            2
        } else {
            1
        }
    }

    /// Pauli generator of a rotation gate.
    pub fn generator(self) -> Option<Pauli> {
        match self {
            GateKind::Rx => Some(Pauli::X),
            GateKind::Ry => Some(Pauli::Y),
            GateKind::Rz => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::H => "H",
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::I => "I",
            GateKind::Cnot => "CNOT",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// A concrete gate. Rotations are R_σ(θ) = exp(−iθσ/2); a CNOT always
/// targets the qubit directly below its control.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    qubit: usize,
    angle: Option<f64>,
}

impl Gate {
    /// Checked constructor for gates assembled from untyped input.
    pub fn new(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{kind} acts on {} qubit(s), got {}",
                kind.arity(),
                qubits.len()
            )));
        }
        if kind == GateKind::Cnot && qubits[1] != qubits[0] + 1 {
            return Err(Error::InvalidGate(format!(
                "CNOT must target control + 1, got control {} target {}",
                qubits[0], qubits[1]
            )));
        }
        match (kind.is_rotation(), angle) {
            (true, None) => return Err(Error::InvalidGate(format!("{kind} requires an angle"))),
            (false, Some(_)) => return Err(Error::InvalidGate(format!("{kind} takes no angle"))),
            (true, Some(a)) if !a.is_finite() => {
                return Err(Error::InvalidGate(format!("non-finite angle {a}")))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            qubit: qubits[0],
            angle,
        })
    }

    pub fn h(q: usize) -> Self {
        Self {
            kind: GateKind::H,
            qubit: q,
            angle: None,
        }
    }

    pub fn id(q: usize) -> Self {
        Self {
            kind: GateKind::I,
            qubit: q,
            angle: None,
        }
    }

    pub fn rx(q: usize, theta: f64) -> Self {
        Self {
            kind: GateKind::Rx,
            qubit: q,
            angle: Some(theta),
        }
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self {
            kind: GateKind::Ry,
            qubit: q,
            angle: Some(theta),
        }
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self {
            kind: GateKind::Rz,
            qubit: q,
            angle: Some(theta),
        }
    }

    pub fn cnot(control: usize) -> Self {
        Self {
            kind: GateKind::Cnot,
            qubit: control,
            angle: None,
        }
    }

    pub fn rotation(kind: GateKind, q: usize, theta: f64) -> Result<Self> {
        Self::new(kind, &[q], Some(theta))
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    /// Acting qubit, or the control for a CNOT.
    pub fn qubit(&self) -> usize {
        self.qubit
    }

    pub fn qubits(&self) -> Vec<usize> {
        if self.kind == GateKind::Cnot {
            vec![self.qubit, self.qubit + 1]
        } else {
            vec![self.qubit]
        }
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }

    pub fn inverse(&self) -> Self {
        Self {
            angle: self.angle.map(|a| -a),
            ..*self
        }
    }

    fn max_qubit(&self) -> usize {
        self.qubit + self.kind.arity() - 1
    }
}

/// Returns U|ψ⟩ for a single gate.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    apply_gate_in_place(&mut out, gate)?;
    Ok(out)
}

pub fn apply_gate_in_place(state: &mut StateVector, gate: &Gate) -> Result<()> {
    let n = state.n_qubits();
    if gate.max_qubit() >= n {
        return Err(Error::QubitOutOfRange {
            index: gate.max_qubit(),
            n_qubits: n,
        });
    }
    apply_unchecked(state.amplitudes_mut(), gate);
    Ok(())
}

/// Kernel without range checks; callers validate circuits up front.
pub(crate) fn apply_unchecked(amps: &mut [C64], gate: &Gate) {
    let q = gate.qubit;
    match gate.kind {
        GateKind::I => {}
        GateKind::H => {
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            apply_1q(amps, q, [[h, h], [h, -h]]);
        }
        GateKind::Rx | GateKind::Ry | GateKind::Rz => {
            let theta = gate.angle.unwrap_or(0.0);
            apply_1q(amps, q, rotation_matrix(gate.kind, theta));
        }
        GateKind::Cnot => {
            let cbit = 1usize << q;
            let tbit = 1usize << (q + 1);
            for i in 0..amps.len() {
                if i & cbit != 0 && i & tbit == 0 {
                    amps.swap(i, i | tbit);
                }
            }
        }
    }
}

pub fn rotation_matrix(kind: GateKind, theta: f64) -> [[C64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let z = C64::new(0.0, 0.0);
    match kind {
        GateKind::Rx => [
            [C64::new(c, 0.0), C64::new(0.0, -s)],
            [C64::new(0.0, -s), C64::new(c, 0.0)],
        ],
        GateKind::Ry => [
            [C64::new(c, 0.0), C64::new(-s, 0.0)],
            [C64::new(s, 0.0), C64::new(c, 0.0)],
        ],
        GateKind::Rz => [[C64::new(c, -s), z], [z, C64::new(c, s)]],
        _ => [[C64::new(1.0, 0.0), z], [z, C64::new(1.0, 0.0)]],
    }
}

pub(crate) fn apply_1q(amps: &mut [C64], q: usize, m: [[C64; 2]; 2]) {
    let bit = 1usize << q;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let a0 = amps[i];
            let a1 = amps[i | bit];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// In-place σ|ψ⟩ on qubit `q`.
pub(crate) fn apply_pauli(amps: &mut [C64], q: usize, p: Pauli) {
    let bit = 1usize << q;
    match p {
        Pauli::I => {}
        Pauli::X => {
            for i in 0..amps.len() {
                if i & bit == 0 {
                    amps.swap(i, i | bit);
                }
            }
        }
        Pauli::Y => {
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let a0 = amps[i];
                    let a1 = amps[i | bit];
                    amps[i] = C64::new(a1.im, -a1.re);
                    amps[i | bit] = C64::new(-a0.im, a0.re);
                }
            }
        }
        Pauli::Z => {
            for (i, a) in amps.iter_mut().enumerate() {
                if i & bit != 0 {
                    *a = -*a;
                }
            }
        }
    }
}
