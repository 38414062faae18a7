use serde::{Deserialize, Serialize};

use super::gate::{apply_pauli, apply_unchecked, Gate, GateKind};
use super::state::{StateVector, C64};
use crate::error::{Error, Result};

/// One slot of a parameterized circuit. Rotation slots draw their angle
/// from the parameter vector in order of appearance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Op {
    pub kind: GateKind,
    /// Acting qubit, or the control of a CNOT.
    pub qubit: usize,
}

impl Op {
    pub fn new(kind: GateKind, qubit: usize) -> Self {
        Self { kind, qubit }
    }

    fn bind(&self, angle: f64) -> Gate {
        match self.kind {
            GateKind::H => Gate::h(self.qubit),
            GateKind::I => Gate::id(self.qubit),
            GateKind::Rx => Gate::rx(self.qubit, angle),
            GateKind::Ry => Gate::ry(self.qubit, angle),
            GateKind::Rz => Gate::rz(self.qubit, angle),
            GateKind::Cnot => Gate::cnot(self.qubit),
        }
    }

    fn touches(&self, q: usize) -> bool {
        q == self.qubit || (self.kind == GateKind::Cnot && q == self.qubit + 1)
    }
}

/// Ordered, parameterized gate list over `n_qubits`, optionally preceded by
/// a Hadamard on every qubit. The Hadamard layer is never counted in
/// [`Circuit::gate_count`] or [`Circuit::depth`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    hadamard_layer: bool,
    ops: Vec<Op>,
}

impl Circuit {
    /// Circuit on |0…0⟩ with the Hadamard layer applied first.
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            hadamard_layer: true,
            ops: Vec::new(),
        }
    }

    /// Circuit acting directly on |0…0⟩.
    pub fn bare(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            hadamard_layer: false,
            ops: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: GateKind, qubit: usize) -> Result<&mut Self> {
        let top = qubit + kind.arity() - 1;
        if top >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: top,
                n_qubits: self.n_qubits,
            });
        }
        self.ops.push(Op::new(kind, qubit));
        Ok(self)
    }

    pub fn with(mut self, kind: GateKind, qubit: usize) -> Result<Self> {
        self.push(kind, qubit)?;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn hadamard_layer(&self) -> bool {
        self.hadamard_layer
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn n_params(&self) -> usize {
        self.ops.iter().filter(|o| o.kind.is_rotation()).count()
    }

    /// Non-identity gates; a CNOT counts once.
    pub fn gate_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|o| !matches!(o.kind, GateKind::I | GateKind::H))
            .count()
    }

    /// ASAP layer count over non-identity gates.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        for op in self
            .ops
            .iter()
            .filter(|o| !matches!(o.kind, GateKind::I | GateKind::H))
        {
            let qs: &[usize] = if op.kind == GateKind::Cnot {
                &[op.qubit, op.qubit + 1]
            } else {
                &[op.qubit]
            };
            let layer = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in qs {
                level[q] = layer;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    /// ASAP layer index (1-based) of every non-identity op, `None` for identities.
    pub fn layers(&self) -> Vec<Option<usize>> {
        let mut level = vec![0usize; self.n_qubits];
        self.ops
            .iter()
            .map(|op| {
                if matches!(op.kind, GateKind::I | GateKind::H) {
                    return None;
                }
                let top = if op.kind == GateKind::Cnot {
                    op.qubit + 1
                } else {
                    op.qubit
                };
                let layer = (op.qubit..=top).map(|q| level[q]).max().unwrap_or(0) + 1;
                for q in op.qubit..=top {
                    level[q] = layer;
                }
                Some(layer)
            })
            .collect()
    }

    pub fn bind(&self, params: &[f64]) -> Result<Vec<Gate>> {
        self.check_params(params)?;
        let mut k = 0;
        Ok(self
            .ops
            .iter()
            .map(|op| {
                let angle = if op.kind.is_rotation() {
                    k += 1;
                    params[k - 1]
                } else {
                    0.0
                };
                op.bind(angle)
            })
            .collect())
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        let expected = self.n_params();
        if params.len() != expected {
            return Err(Error::ParamCount {
                expected,
                got: params.len(),
            });
        }
        if let Some(bad) = params.iter().find(|p| !p.is_finite()) {
            return Err(Error::Numerical(format!(
                "non-finite circuit parameter {bad}"
            )));
        }
        Ok(())
    }

    fn initial_state(&self) -> StateVector {
        if self.hadamard_layer {
            StateVector::plus(self.n_qubits)
        } else {
            StateVector::zero(self.n_qubits)
        }
    }

    /// |φ(θ)⟩.
    pub fn prepare(&self, params: &[f64]) -> Result<StateVector> {
        let gates = self.bind(params)?;
        let mut state = self.initial_state();
        for g in &gates {
            apply_unchecked(state.amplitudes_mut(), g);
        }
        Ok(state)
    }

    /// ∂|φ(θ)⟩/∂θ_i (unnormalized).
    pub fn derivative_state(&self, params: &[f64], i: usize) -> Result<Vec<C64>> {
        let count = self.n_params();
        if count == 0 {
            return Err(Error::NoParameters);
        }
        if i >= count {
            return Err(Error::ParamIndex { index: i, count });
        }
        let gates = self.bind(params)?;
        let pos = self.rotation_positions()[i];
        let mut state = self.initial_state();
        for g in &gates[..=pos] {
            apply_unchecked(state.amplitudes_mut(), g);
        }
        let mut amps = state.into_amplitudes();
        apply_generator(&mut amps, &gates[pos]);
        for g in &gates[pos + 1..] {
            apply_unchecked(&mut amps, g);
        }
        Ok(amps)
    }

    /// |φ(θ)⟩ together with every derivative state, in parameter order.
    pub fn state_and_derivatives(&self, params: &[f64]) -> Result<(StateVector, Vec<Vec<C64>>)> {
        let gates = self.bind(params)?;
        let mut state = self.initial_state();
        let mut derivs: Vec<Vec<C64>> = Vec::with_capacity(self.n_params());
        for g in &gates {
            apply_unchecked(state.amplitudes_mut(), g);
            for d in &mut derivs {
                apply_unchecked(d, g);
            }
            if g.kind().is_rotation() {
                let mut d = state.amplitudes().to_vec();
                apply_generator(&mut d, g);
                derivs.push(d);
            }
        }
        Ok((state, derivs))
    }

    fn rotation_positions(&self) -> Vec<usize> {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, o)| o.kind.is_rotation())
            .map(|(k, _)| k)
            .collect()
    }

    /// Positions in `ops` of gates that act on qubit `q`.
    pub fn ops_on(&self, q: usize) -> impl Iterator<Item = (usize, &Op)> {
        self.ops
            .iter()
            .enumerate()
            .filter(move |(_, o)| o.touches(q))
    }
}

/// amps ← (−i/2)·σ·amps for the generator σ of a rotation gate.
fn apply_generator(amps: &mut [C64], gate: &Gate) {
    let sigma = gate.kind().generator().expect("rotation gate");
    apply_pauli(amps, gate.qubit(), sigma);
    for a in amps.iter_mut() {
        *a = C64::new(0.5 * a.im, -0.5 * a.re);
    }
}
