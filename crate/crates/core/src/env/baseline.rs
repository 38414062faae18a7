use super::grid::{CircuitGrid, COLUMNS, ROWS};
use crate::error::{Error, Result};
use crate::qsim::{Circuit, GateKind};

/// 4-qubit hardware-efficient SU(2) ansatz after the Hadamard layer:
/// an Ry/Rz layer, then `reps` blocks of a linear CNOT ladder followed by
/// another Ry/Rz layer.
pub fn su2_circuit(reps: usize) -> Circuit {
    let mut c = Circuit::new(ROWS);
    rotation_layer(&mut c);
    for _ in 0..reps {
        for q in 0..ROWS - 1 {
            c.push(GateKind::Cnot, q).expect("nearest-neighbour CNOT");
        }
        rotation_layer(&mut c);
    }
    c
}

fn rotation_layer(c: &mut Circuit) {
    for kind in [GateKind::Ry, GateKind::Rz] {
        for q in 0..ROWS {
            c.push(kind, q).expect("qubit in range");
        }
    }
}

/// The SU(2) ansatz laid out on a grid, widened past the standard ten
/// columns when its depth requires it (depth 11 for `reps = 2`).
pub fn su2_grid(reps: usize) -> Result<CircuitGrid> {
    if reps == 0 {
        return Err(Error::Config("SU(2) baseline needs reps ≥ 1".into()));
    }
    let c = su2_circuit(reps);
    CircuitGrid::from_circuit_layers(&c, c.depth().max(COLUMNS))
}
