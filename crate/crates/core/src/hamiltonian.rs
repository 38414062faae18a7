//! Benchmark Hamiltonians: weighted Max-Cut graphs and the 4-qubit
//! Bravyi-Kitaev H₂ table shipped in `data/h2_bk_sto3g.json`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::qsim::{Gate, Pauli, PauliHamiltonian, PauliString};

const H2_TABLE: &str = include_str!("../data/h2_bk_sto3g.json");
const H2_TABLE_NAME: &str = "h2_bk_sto3g.json";

/// Undirected weighted graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    #[serde(rename = "n")]
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let g = Self { n_vertices, edges };
        g.validate()?;
        Ok(g)
    }

    /// The 4-vertex unit-weight path 0–1–2–3.
    pub fn default_instance() -> Self {
        Self {
            n_vertices: 4,
            edges: vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: Self = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.n_vertices == 0 {
            return Err(Error::Graph("graph needs at least one vertex".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v, w) in &self.edges {
            if u >= self.n_vertices || v >= self.n_vertices {
                return Err(Error::Graph(format!(
                    "edge ({u}, {v}) out of range for {} vertices",
                    self.n_vertices
                )));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop on vertex {u}")));
            }
            if !w.is_finite() {
                return Err(Error::Graph(format!(
                    "edge ({u}, {v}) has non-finite weight"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Graph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Total weight of edges crossing the bipartition encoded by `side`
    /// (bit v set ⇔ vertex v in S).
    pub fn cut_value(&self, side: usize) -> f64 {
        self.edges
            .iter()
            .filter(|(u, v, _)| ((side >> u) ^ (side >> v)) & 1 == 1)
            .map(|(_, _, w)| w)
            .sum()
    }
}

/// H = Σ_{(u,v,w)} w · Z_u Z_v on one qubit per vertex.
pub fn maxcut_hamiltonian(graph: &Graph) -> Result<PauliHamiltonian> {
    graph.validate()?;
    let n = graph.n_vertices();
    let mut h = PauliHamiltonian::zero(n);
    for &(u, v, w) in graph.edges() {
        let mut ops = vec![Pauli::I; n];
        ops[u] = Pauli::Z;
        ops[v] = Pauli::Z;
        h.add_term(w, PauliString::from_paulis(&ops))?;
    }
    Ok(h)
}

/// Operator-space lower bound −Σ_α |λ_α|.
pub fn e_bound(ham: &PauliHamiltonian) -> f64 {
    -ham.abs_coefficient_sum()
}

/// Lowest-energy computational basis state, as (energy, basis index).
pub fn min_basis_state(ham: &PauliHamiltonian) -> (f64, usize) {
    ham.diagonal()
        .into_iter()
        .enumerate()
        .map(|(k, e)| (e, k))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty diagonal")
}

/// Gates preparing the basis state `index` from |0…0⟩ (X as Rx(π), up to phase).
pub fn basis_prep_gates(n_qubits: usize, index: usize) -> Vec<Gate> {
    (0..n_qubits)
        .filter(|q| index >> q & 1 == 1)
        .map(|q| Gate::rx(q, std::f64::consts::PI))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEnergies {
    pub e_hf: f64,
    pub e_fci: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub molecule: String,
    pub geometry: String,
    pub basis: String,
    pub mapping: String,
    #[serde(default)]
    pub qubit_order: String,
    pub reference_energies: ReferenceEnergies,
    #[serde(default)]
    pub generator: String,
    pub version: u32,
    pub checksum: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub pauli: String,
    pub coeff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct TableFile {
    metadata: TableMetadata,
    terms: Vec<PauliTerm>,
}

/// A molecular qubit Hamiltonian with its reference energies.
#[derive(Clone, Debug, PartialEq)]
pub struct MoleculeSpec {
    pub name: String,
    pub hamiltonian: PauliHamiltonian,
    pub reference: ReferenceEnergies,
    pub metadata: TableMetadata,
}

/// SHA-256 over lines `"<pauli> <coeff>\n"`, coefficients in shortest
/// round-trip decimal form.
pub fn table_checksum(terms: &[PauliTerm]) -> String {
    let mut hasher = Sha256::new();
    for t in terms {
        hasher.update(format!("{} {:?}\n", t.pauli, t.coeff).as_bytes());
    }
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn parse_table(text: &str, source: PathBuf) -> Result<MoleculeSpec> {
    let data_err = |reason: String| Error::Data {
        path: source.clone(),
        reason,
    };
    let file: TableFile = serde_json::from_str(text).map_err(|e| data_err(e.to_string()))?;
    if file.terms.is_empty() {
        return Err(data_err("no Pauli terms".into()));
    }
    let sum = table_checksum(&file.terms);
    if sum != file.metadata.checksum {
        return Err(data_err(format!(
            "checksum mismatch: file says {}, contents hash to {sum}",
            file.metadata.checksum
        )));
    }
    let terms = file
        .terms
        .iter()
        .map(|t| Ok((t.coeff, t.pauli.parse::<PauliString>()?)))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| data_err(e.to_string()))?;
    let n = terms[0].1.n_qubits();
    let hamiltonian = PauliHamiltonian::new(n, terms).map_err(|e| data_err(e.to_string()))?;
    let reference = file.metadata.reference_energies;
    if !(reference.e_hf > reference.e_fci) {
        return Err(data_err(
            "reference energies must satisfy E_HF > E_FCI".into(),
        ));
    }
    Ok(MoleculeSpec {
        name: file.metadata.molecule.clone(),
        hamiltonian,
        reference,
        metadata: file.metadata,
    })
}

/// The embedded STO-3G / Bravyi-Kitaev H₂ table.
pub fn h2_molecule() -> Result<MoleculeSpec> {
    parse_table(H2_TABLE, PathBuf::from(H2_TABLE_NAME))
}

pub fn load_molecule(path: &Path) -> Result<MoleculeSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::Data {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    parse_table(&text, path.to_path_buf())
}

/// 4-qubit H₂ Hamiltonian at equilibrium bond length.
pub fn h2_hamiltonian() -> Result<PauliHamiltonian> {
    Ok(h2_molecule()?.hamiltonian)
}
