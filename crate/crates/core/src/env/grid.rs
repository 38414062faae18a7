use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Circuit, GateKind, StateVector};

/// Qubit rows of the design grid.
pub const ROWS: usize = 4;
/// Columns of the agent's design grid.
pub const COLUMNS: usize = 10;
pub const N_ACTIONS: usize = 5;

/// Integer cell codes of the list representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Cell {
    Empty = 0,
    Rx = 1,
    Ry = 2,
    Rz = 3,
    I = 4,
    Control = 5,
    Target = 6,
}

impl Cell {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self> {
        Ok(match code {
            0 => Cell::Empty,
            1 => Cell::Rx,
            2 => Cell::Ry,
            3 => Cell::Rz,
            4 => Cell::I,
            5 => Cell::Control,
            6 => Cell::Target,
            other => return Err(Error::InvalidGrid(format!("unknown cell code {other}"))),
        })
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, Cell::Rx | Cell::Ry | Cell::Rz)
    }

    pub fn is_cnot(self) -> bool {
        matches!(self, Cell::Control | Cell::Target)
    }
}

/// Agent actions, in Q-network output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Rx = 0,
    Ry = 1,
    Rz = 2,
    I = 3,
    Cnot = 4,
}

impl Action {
    pub const ALL: [Action; N_ACTIONS] =
        [Action::Rx, Action::Ry, Action::Rz, Action::I, Action::Cnot];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL.get(i).copied().ok_or(Error::InvalidAction {
            action: i,
            row: 0,
            col: 0,
        })
    }

    fn cell(self) -> Cell {
        match self {
            Action::Rx => Cell::Rx,
            Action::Ry => Cell::Ry,
            Action::Rz => Cell::Rz,
            Action::I => Cell::I,
            Action::Cnot => Cell::Control,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Action::Rx => "Rx",
            Action::Ry => "Ry",
            Action::Rz => "Rz",
            Action::I => "I",
            Action::Cnot => "CNOT",
        };
        f.write_str(s)
    }
}

pub type ActionMask = [bool; N_ACTIONS];

/// 4-row gate grid filled column by column, top to bottom. Cells ahead of
/// the cursor are empty, cells behind it are not.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircuitGrid {
    columns: usize,
    /// Column-major: index = col · ROWS + row.
    cells: Vec<Cell>,
    /// Column-major fill position; equals `cells.len()` when full.
    fill: usize,
}

impl Default for CircuitGrid {
    fn default() -> Self {
        Self::new()
    }
}

impl CircuitGrid {
    /// Empty 4×10 grid.
    pub fn new() -> Self {
        Self::with_columns(COLUMNS)
    }

    pub fn with_columns(columns: usize) -> Self {
        assert!(columns > 0, "grid needs at least one column");
        Self {
            columns,
            cells: vec![Cell::Empty; columns * ROWS],
            fill: 0,
        }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        self.cells[col * ROWS + row]
    }

    /// Next (row, column) to fill, `None` once the grid is full.
    pub fn cursor(&self) -> Option<(usize, usize)> {
        (self.fill < self.cells.len()).then(|| (self.fill % ROWS, self.fill / ROWS))
    }

    pub fn is_full(&self) -> bool {
        self.fill == self.cells.len()
    }

    pub fn filled(&self) -> usize {
        self.fill
    }

    /// Legal actions at the cursor. Identity is always legal while the grid
    /// has room.
    pub fn valid_actions(&self) -> ActionMask {
        let Some((row, col)) = self.cursor() else {
            return [false; N_ACTIONS];
        };
        let last = self.last_single_qubit(row, col);
        let mut mask = [true; N_ACTIONS];
        for a in [Action::Rx, Action::Ry, Action::Rz] {
            mask[a.index()] = last != Some(a.cell());
        }
        mask[Action::Cnot.index()] = row + 1 < ROWS && self.cell(row + 1, col) == Cell::Empty;
        mask
    }

    /// Most recent rotation on `row` strictly left of `col`, looking through
    /// identities and stopping at CNOT endpoints.
    fn last_single_qubit(&self, row: usize, col: usize) -> Option<Cell> {
        for c in (0..col).rev() {
            match self.cell(row, c) {
                Cell::I => continue,
                cell if cell.is_rotation() => return Some(cell),
                _ => return None,
            }
        }
        None
    }

    pub fn place(&self, action: Action) -> Result<Self> {
        let mut next = self.clone();
        next.place_mut(action)?;
        Ok(next)
    }

    pub fn place_mut(&mut self, action: Action) -> Result<()> {
        let (row, col) = self.cursor().ok_or(Error::GridFull)?;
        if !self.valid_actions()[action.index()] {
            return Err(Error::InvalidAction {
                action: action.index(),
                row,
                col,
            });
        }
        self.cells[self.fill] = action.cell();
        self.fill += 1;
        if action == Action::Cnot {
            self.cells[self.fill] = Cell::Target;
            self.fill += 1;
        }
        Ok(())
    }

    /// Gate list in execution order: column by column, top to bottom.
    /// The Hadamard layer is implicit.
    pub fn to_circuit(&self) -> Circuit {
        let mut circuit = Circuit::new(ROWS);
        for col in 0..self.columns {
            for row in 0..ROWS {
                let kind = match self.cell(row, col) {
                    Cell::Rx => GateKind::Rx,
                    Cell::Ry => GateKind::Ry,
                    Cell::Rz => GateKind::Rz,
                    Cell::I => GateKind::I,
                    Cell::Control => GateKind::Cnot,
                    Cell::Target | Cell::Empty => continue,
                };
                circuit.push(kind, row).expect("grid rows are valid qubits");
            }
        }
        circuit
    }

    pub fn n_params(&self) -> usize {
        self.cells.iter().filter(|c| c.is_rotation()).count()
    }

    pub fn gate_count(&self) -> usize {
        gate_count(self)
    }

    pub fn depth(&self) -> usize {
        depth(self)
    }

    /// Row-major codes scaled by 1/6.
    pub fn encode_state(&self) -> Vec<f64> {
        encode_state(self)
    }

    /// Row-major integer codes.
    pub fn codes(&self) -> Vec<Vec<u8>> {
        (0..ROWS)
            .map(|r| (0..self.columns).map(|c| self.cell(r, c).code()).collect())
            .collect()
    }

    /// Builds a grid from row-major codes, checking every invariant.
    pub fn from_codes(rows: &[Vec<u8>]) -> Result<Self> {
        if rows.len() != ROWS {
            return Err(Error::InvalidGrid(format!(
                "expected {ROWS} rows, got {}",
                rows.len()
            )));
        }
        let columns = rows[0].len();
        if columns == 0 || rows.iter().any(|r| r.len() != columns) {
            return Err(Error::InvalidGrid(
                "rows must share a non-zero length".into(),
            ));
        }
        let mut cells = vec![Cell::Empty; columns * ROWS];
        for (r, row) in rows.iter().enumerate() {
            for (c, &code) in row.iter().enumerate() {
                cells[c * ROWS + r] = Cell::from_code(code)?;
            }
        }
        let fill = cells
            .iter()
            .position(|c| *c == Cell::Empty)
            .unwrap_or(cells.len());
        let grid = Self {
            columns,
            cells,
            fill,
        };
        let problems = grid.violations();
        if let Some(p) = problems.first() {
            return Err(Error::InvalidGrid(p.clone()));
        }
        Ok(grid)
    }

    /// Human-readable descriptions of every broken invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, cell) in self.cells.iter().enumerate() {
            let filled = *cell != Cell::Empty;
            if filled != (k < self.fill) {
                out.push(format!(
                    "fill-order violation at ({}, {})",
                    k % ROWS,
                    k / ROWS
                ));
            }
        }
        for col in 0..self.columns {
            for row in 0..ROWS {
                match self.cell(row, col) {
                    Cell::Control if row + 1 >= ROWS || self.cell(row + 1, col) != Cell::Target => {
                        out.push(format!("control at ({row}, {col}) without target below"));
                    }
                    Cell::Target if row == 0 || self.cell(row - 1, col) != Cell::Control => {
                        out.push(format!("target at ({row}, {col}) without control above"));
                    }
                    _ => {}
                }
            }
        }
        for row in 0..ROWS {
            let mut last: Option<Cell> = None;
            for col in 0..self.columns {
                let cell = self.cell(row, col);
                match cell {
                    Cell::I | Cell::Empty => {}
                    c if c.is_rotation() => {
                        if last == Some(c) {
                            out.push(format!("repeated {c:?} on row {row} at column {col}"));
                        }
                        last = Some(c);
                    }
                    _ => last = None,
                }
            }
        }
        out
    }

    /// Lays a 4-qubit gate list out column by column in ASAP order, one
    /// column per layer, padding idle slots with identities up to the last
    /// gate. Fails if more than `columns` layers are needed.
    pub fn from_circuit_layers(circuit: &Circuit, columns: usize) -> Result<Self> {
        if circuit.n_qubits() != ROWS {
            return Err(Error::DimensionMismatch {
                expected: ROWS,
                got: circuit.n_qubits(),
            });
        }
        let layers = circuit.layers();
        let needed = layers.iter().flatten().copied().max().unwrap_or(0);
        if needed > columns {
            return Err(Error::InvalidGrid(format!(
                "circuit needs {needed} columns, grid has {columns}"
            )));
        }
        let mut cells = vec![Cell::Empty; columns * ROWS];
        for (op, layer) in circuit.ops().iter().zip(&layers) {
            let Some(layer) = layer else { continue };
            let base = (layer - 1) * ROWS;
            let code = match op.kind {
                GateKind::Rx => Cell::Rx,
                GateKind::Ry => Cell::Ry,
                GateKind::Rz => Cell::Rz,
                GateKind::Cnot => {
                    cells[base + op.qubit + 1] = Cell::Target;
                    Cell::Control
                }
                GateKind::I | GateKind::H => continue,
            };
            cells[base + op.qubit] = code;
        }
        let last = cells
            .iter()
            .rposition(|c| *c != Cell::Empty)
            .map(|k| k + 1)
            .unwrap_or(0);
        for c in &mut cells[..last] {
            if *c == Cell::Empty {
                *c = Cell::I;
            }
        }
        let grid = Self {
            columns,
            cells,
            fill: last,
        };
        match grid.violations().first() {
            Some(p) => Err(Error::InvalidGrid(p.clone())),
            None => Ok(grid),
        }
    }
}

impl fmt::Debug for CircuitGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CircuitGrid(cursor {:?})", self.cursor())?;
        for r in 0..ROWS {
            let line: Vec<String> = (0..self.columns)
                .map(|c| self.cell(r, c).code().to_string())
                .collect();
            writeln!(f, "  q{r}: {}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Display for CircuitGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..ROWS {
            write!(f, "q{r}: H")?;
            for c in 0..self.columns {
                let s = match self.cell(r, c) {
                    Cell::Empty => " .  ",
                    Cell::Rx => " Rx ",
                    Cell::Ry => " Ry ",
                    Cell::Rz => " Rz ",
                    Cell::I => " ─  ",
                    Cell::Control => " ●  ",
                    Cell::Target => " ⊕  ",
                };
                write!(f, "{s}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Non-identity cells, with each CNOT counted once.
pub fn gate_count(grid: &CircuitGrid) -> usize {
    grid.cells
        .iter()
        .filter(|c| c.is_rotation() || **c == Cell::Control)
        .count()
}

/// ASAP depth over non-identity gates, excluding the Hadamard layer.
pub fn depth(grid: &CircuitGrid) -> usize {
    grid.to_circuit().depth()
}

pub fn encode_state(grid: &CircuitGrid) -> Vec<f64> {
    let mut v = Vec::with_capacity(ROWS * grid.columns);
    for r in 0..ROWS {
        for c in 0..grid.columns {
            v.push(f64::from(grid.cell(r, c).code()) / 6.0);
        }
    }
    v
}

/// |φ(θ)⟩ for the grid: H on every qubit, then the grid gates.
pub fn run_circuit(grid: &CircuitGrid, params: &[f64]) -> Result<StateVector> {
    grid.to_circuit().prepare(params)
}

/// JSON interchange form of a designed circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitJson {
    /// Row-major integer codes, `ROWS` rows.
    pub cells: Vec<Vec<u8>>,
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub episode: Option<usize>,
}

impl CircuitJson {
    pub fn new(grid: &CircuitGrid, params: &[f64]) -> Self {
        Self {
            cells: grid.codes(),
            params: params.to_vec(),
            energy: None,
            gate_count: Some(grid.gate_count()),
            depth: Some(grid.depth()),
            trial: None,
            episode: None,
        }
    }

    pub fn with_energy(mut self, energy: f64) -> Self {
        self.energy = Some(energy);
        self
    }

    pub fn grid(&self) -> Result<CircuitGrid> {
        let grid = CircuitGrid::from_codes(&self.cells)?;
        if grid.n_params() != self.params.len() {
            return Err(Error::ParamCount {
                expected: grid.n_params(),
                got: self.params.len(),
            });
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(actions: &[Action]) -> CircuitGrid {
        let mut g = CircuitGrid::new();
        for a in actions {
            g.place_mut(*a).unwrap();
        }
        g
    }

    #[test]
    fn reset_grid_is_empty() {
        let g = CircuitGrid::new();
        assert_eq!(g.cursor(), Some((0, 0)));
        assert_eq!((g.gate_count(), g.depth()), (0, 0));
        assert!(g.encode_state().iter().all(|x| *x == 0.0));
        assert_eq!(g.encode_state().len(), 40);
        assert!(g.valid_actions().iter().all(|v| *v));
    }

    #[test]
    fn workflow_example_sequence() {
        let g = build(&[Action::Rx, Action::Ry, Action::Rx, Action::Rz, Action::Cnot]);
        assert_eq!(g.codes()[0][..2], [1, 5]);
        assert_eq!(g.codes()[1][..2], [2, 6]);
        assert_eq!(g.codes()[2][..2], [1, 0]);
        assert_eq!(g.codes()[3][..2], [3, 0]);
        assert_eq!(g.cursor(), Some((2, 1)));
        assert_eq!((g.gate_count(), g.depth()), (5, 2));
    }

    #[test]
    fn cnot_at_row_two_wraps_cursor() {
        let g = build(&[Action::I, Action::I, Action::Cnot]);
        assert_eq!(g.cell(2, 0), Cell::Control);
        assert_eq!(g.cell(3, 0), Cell::Target);
        assert_eq!(g.cursor(), Some((0, 1)));
    }

    #[test]
    fn cnot_masked_on_bottom_row() {
        let g = build(&[Action::I, Action::I, Action::I]);
        assert_eq!(g.cursor(), Some((3, 0)));
        assert!(!g.valid_actions()[Action::Cnot.index()]);
        assert!(g.place(Action::Cnot).is_err());
    }

    #[test]
    fn adjacency_looks_through_identities() {
        // row 0: Rx I I, cursor back on row 0 at column 3
        let mut g = CircuitGrid::new();
        for a in [Action::Rx, Action::I, Action::I, Action::I] {
            g.place_mut(a).unwrap();
        }
        for _ in 0..2 {
            for _ in 0..4 {
                g.place_mut(Action::I).unwrap();
            }
        }
        assert_eq!(g.cursor(), Some((0, 3)));
        let m = g.valid_actions();
        assert_eq!(m, [false, true, true, true, true]);
    }

    #[test]
    fn cnot_endpoint_resets_adjacency() {
        let mut g = build(&[
            Action::Rx,
            Action::I,
            Action::I,
            Action::I,
            Action::Cnot,
            Action::I,
            Action::I,
        ]);
        assert_eq!(g.cursor(), Some((0, 2)));
        assert!(g.valid_actions()[Action::Rx.index()]);
        g.place_mut(Action::Rx).unwrap();
    }

    #[test]
    fn forty_identities_fill_the_grid() {
        let mut g = CircuitGrid::new();
        for _ in 0..40 {
            g.place_mut(Action::I).unwrap();
        }
        assert!(g.is_full());
        assert_eq!(g.gate_count(), 0);
        assert!(g.codes().iter().flatten().all(|c| *c == 4));
        assert!(matches!(g.place(Action::I), Err(Error::GridFull)));
        assert_eq!(g.valid_actions(), [false; 5]);
    }

    #[test]
    fn encoding_is_row_major_scaled() {
        let g = build(&[Action::Rz]);
        let v = g.encode_state();
        assert_eq!(v[0], 3.0 / 6.0);
        assert!(v[1..].iter().all(|x| *x == 0.0));
        let g = build(&[Action::I, Action::Ry]);
        assert_eq!(g.encode_state()[COLUMNS], 2.0 / 6.0);
    }

    #[test]
    fn codes_round_trip_and_validation() {
        let g = build(&[Action::Rx, Action::Ry, Action::Cnot, Action::Rz, Action::I]);
        assert_eq!(CircuitGrid::from_codes(&g.codes()).unwrap(), g);
        let mut bad = g.codes();
        bad[3][0] = 5;
        assert!(CircuitGrid::from_codes(&bad).is_err());
        let mut gap = g.codes();
        gap[0][0] = 0;
        assert!(CircuitGrid::from_codes(&gap).is_err());
        let mut rep = CircuitGrid::new().codes();
        rep[0][0] = 1;
        rep[1][0] = 4;
        rep[2][0] = 4;
        rep[3][0] = 4;
        rep[0][1] = 1;
        assert!(CircuitGrid::from_codes(&rep)
            .unwrap_err()
            .to_string()
            .contains("repeated"));
    }

    #[test]
    fn empty_grid_runs_to_plus_state() {
        let s = run_circuit(&CircuitGrid::new(), &[]).unwrap();
        assert!(s.fidelity(&StateVector::plus(4)) > 1.0 - 1e-14);
    }
}
