use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::env::{Cell, CircuitGrid, CircuitJson, ROWS};
use crate::error::{Error, Result};
use crate::qsim::{Circuit, GateKind, PauliHamiltonian};
use crate::vite::{run_vite, ViteConfig};

pub const SKELETON_ENERGY_TOL: f64 = 1e-3;

/// Per-cell gate frequencies over a corpus. Identities and empty cells are
/// not counted: they carry no gate.
#[derive(Clone, Debug)]
pub struct CellFrequencies {
    pub columns: usize,
    pub corpus_size: usize,
    /// `modal[col * ROWS + row]` = (most frequent gate code, fraction of the corpus).
    pub modal: Vec<Option<(Cell, f64)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SkeletonCandidate {
    /// Smallest modal frequency among the kept cells.
    pub support: f64,
    #[serde(skip)]
    pub grid: CircuitGrid,
    pub circuit: CircuitJson,
    pub gate_count: usize,
    pub depth: usize,
    /// Fresh VITE energy of the candidate.
    pub energy: f64,
    /// The candidate comes within [`SKELETON_ENERGY_TOL`] of the corpus's best energy.
    pub reaches_best_energy: bool,
}

/// Recursively collects every circuit JSON under `dir`. Other JSON files
/// (summaries, checkpoints) are skipped.
pub fn load_corpus(dir: &Path) -> Result<Vec<CircuitJson>> {
    let mut paths = Vec::new();
    collect_json(dir, &mut paths)?;
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let text = fs::read_to_string(&p)?;
        match serde_json::from_str::<CircuitJson>(&text) {
            Ok(c) => out.push(c),
            Err(e) => log::debug!("skipping {}: {e}", p.display()),
        }
    }
    Ok(out)
}

fn collect_json(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_json(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
    Ok(())
}

pub fn cell_frequencies(corpus: &[CircuitGrid]) -> Result<CellFrequencies> {
    let first = corpus
        .first()
        .ok_or_else(|| Error::Empty("skeleton corpus".into()))?;
    let columns = first.columns();
    if corpus.iter().any(|g| g.columns() != columns) {
        return Err(Error::InvalidGrid("corpus circuits differ in width".into()));
    }
    let n = corpus.len() as f64;
    let mut modal = Vec::with_capacity(columns * ROWS);
    for col in 0..columns {
        for row in 0..ROWS {
            let mut counts = [0usize; 7];
            for g in corpus {
                counts[g.cell(row, col).code() as usize] += 1;
            }
            let best = [Cell::Rx, Cell::Ry, Cell::Rz, Cell::Control, Cell::Target]
                .into_iter()
                .map(|c| (c, counts[c.code() as usize]))
                .filter(|(_, k)| *k > 0)
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.code().cmp(&a.0.code())));
            modal.push(best.map(|(c, k)| (c, k as f64 / n)));
        }
    }
    Ok(CellFrequencies {
        columns,
        corpus_size: corpus.len(),
        modal,
    })
}

/// Gates of the cells whose modal frequency is at least `support`, in
/// execution order, with a rotation dropped when it would repeat the
/// previous rotation on its qubit.
fn consensus_circuit(freq: &CellFrequencies, support: f64) -> Circuit {
    let kept = |row: usize, col: usize| {
        freq.modal[col * ROWS + row]
            .filter(|(_, f)| *f >= support)
            .map(|(c, _)| c)
    };
    let mut circuit = Circuit::new(ROWS);
    let mut last: [Option<Cell>; ROWS] = [None; ROWS];
    for col in 0..freq.columns {
        for row in 0..ROWS {
            let Some(cell) = kept(row, col) else { continue };
            let kind = match cell {
                Cell::Rx => GateKind::Rx,
                Cell::Ry => GateKind::Ry,
                Cell::Rz => GateKind::Rz,
                Cell::Control if row + 1 < ROWS && kept(row + 1, col) == Some(Cell::Target) => {
                    GateKind::Cnot
                }
                _ => continue,
            };
            if kind == GateKind::Cnot {
                last[row] = None;
                last[row + 1] = None;
            } else {
                if last[row] == Some(cell) {
                    continue;
                }
                last[row] = Some(cell);
            }
            circuit.push(kind, row).expect("grid rows are valid qubits");
        }
    }
    circuit
}

/// Consensus skeletons of a corpus of designed circuits.
///
/// The first candidate keeps every cell whose modal gate reaches `support`;
/// further candidates raise the cut to each higher frequency level present.
/// Every candidate is laid out left-compacted, checked against the grid
/// constraints and re-optimized with VITE. An empty list means no cell
/// reached the support.
pub fn extract_skeleton(
    corpus: &[CircuitJson],
    support: f64,
    ham: &PauliHamiltonian,
    vite: &ViteConfig,
) -> Result<Vec<SkeletonCandidate>> {
    if corpus.is_empty() {
        return Err(Error::Empty("skeleton corpus".into()));
    }
    if !(0.0..=1.0).contains(&support) {
        return Err(Error::Config(format!(
            "support must lie in [0, 1], got {support}"
        )));
    }
    let grids: Vec<CircuitGrid> = corpus.iter().map(|c| c.grid()).collect::<Result<_>>()?;
    let best = corpus
        .iter()
        .map(|c| {
            c.energy
                .ok_or_else(|| Error::Config("corpus circuit without an energy tag".into()))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let freq = cell_frequencies(&grids)?;

    let mut levels: Vec<f64> = freq
        .modal
        .iter()
        .flatten()
        .map(|(_, f)| *f)
        .filter(|f| *f >= support)
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for level in levels {
        let circuit = consensus_circuit(&freq, level);
        if circuit.gate_count() == 0 {
            continue;
        }
        let grid = CircuitGrid::from_circuit_layers(&circuit, freq.columns)?;
        if !seen.insert(grid.codes()) {
            continue;
        }
        if let Some(v) = grid.violations().first() {
            return Err(Error::InvalidGrid(v.clone()));
        }
        let result = run_vite(&grid.to_circuit(), ham, vite)?;
        let energy = result.final_energy();
        out.push(SkeletonCandidate {
            support: level,
            circuit: CircuitJson::new(&grid, &result.final_params).with_energy(energy),
            gate_count: grid.gate_count(),
            depth: grid.depth(),
            energy,
            reaches_best_energy: energy <= best + SKELETON_ENERGY_TOL,
            grid,
        });
    }
    Ok(out)
}
