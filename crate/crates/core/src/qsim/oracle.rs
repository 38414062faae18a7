//! Brute-force references: dense diagonalization and exact imaginary-time
//! evolution. Both build the full 2^n × 2^n matrix, so they are meant for
//! registers of at most ten qubits.

use nalgebra::{DMatrix, DVector};

use super::pauli::PauliHamiltonian;
use super::state::{StateVector, C64};
use crate::error::{Error, Result};

pub const MAX_ORACLE_QUBITS: usize = 10;

/// Eigenpairs of a Hamiltonian sorted by ascending eigenvalue.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column k is the eigenvector for `values[k]`.
    pub vectors: DMatrix<C64>,
}

pub fn spectrum(ham: &PauliHamiltonian) -> Result<Spectrum> {
    if ham.n_qubits() > MAX_ORACLE_QUBITS {
        return Err(Error::Numerical(format!(
            "dense diagonalization limited to {MAX_ORACLE_QUBITS} qubits, got {}",
            ham.n_qubits()
        )));
    }
    let eig = ham
        .matrix()
        .try_symmetric_eigen(1e-14, 100_000)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok(Spectrum { values, vectors })
}

/// Smallest eigenvalue and a unit-norm eigenvector.
pub fn exact_ground_energy(ham: &PauliHamiltonian) -> Result<(f64, StateVector)> {
    let eig = spectrum(ham)?;
    let v: Vec<C64> = eig.vectors.column(0).iter().copied().collect();
    let mut state = StateVector::from_amplitudes(v)?;
    state.normalize()?;
    Ok((eig.values[0], state))
}

/// e^{−Hτ}|ψ₀⟩ / ‖e^{−Hτ}|ψ₀⟩‖.
pub fn exact_ite(ham: &PauliHamiltonian, initial: &StateVector, tau: f64) -> Result<StateVector> {
    let eig = spectrum(ham)?;
    exact_ite_with(&eig, initial, tau)
}

/// [`exact_ite`] reusing a precomputed spectrum.
pub fn exact_ite_with(eig: &Spectrum, initial: &StateVector, tau: f64) -> Result<StateVector> {
    if !(tau >= 0.0) {
        return Err(Error::Numerical(format!(
            "imaginary time must be non-negative, got {tau}"
        )));
    }
    if initial.dim() != eig.vectors.nrows() {
        return Err(Error::DimensionMismatch {
            expected: eig.vectors.nrows(),
            got: initial.dim(),
        });
    }
    let psi = DVector::from_column_slice(initial.amplitudes());
    let mut coeffs = eig.vectors.adjoint() * psi;
    // shift by the ground energy so the largest factor is 1
    let e0 = eig.values[0];
    for (c, &e) in coeffs.iter_mut().zip(&eig.values) {
        *c *= (-(e - e0) * tau).exp();
    }
    let out = &eig.vectors * coeffs;
    let norm = out.norm();
    if !(norm > 1e-300) {
        return Err(Error::Numerical(
            "state annihilated by imaginary-time evolution".into(),
        ));
    }
    StateVector::from_amplitudes(out.iter().map(|a| a / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::pauli::expectation;

    #[test]
    fn scalar_hamiltonian() {
        let h = PauliHamiltonian::from_strs(&[(2.5, "IIII")]).unwrap();
        let (e, s) = exact_ground_energy(&h).unwrap();
        assert!((e - 2.5).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ground_state_is_eigenvector() {
        let h = PauliHamiltonian::from_strs(&[(0.4, "XZ"), (-1.0, "ZI"), (0.3, "YY"), (0.2, "IX")])
            .unwrap();
        let (e, s) = exact_ground_energy(&h).unwrap();
        let hs = h.apply(s.amplitudes()).unwrap();
        for (a, b) in hs.iter().zip(s.amplitudes()) {
            assert!((a - b * e).norm() < 1e-10);
        }
        assert!((expectation(&s, &h).unwrap() - e).abs() < 1e-10);
    }

    #[test]
    fn ite_tau_zero_is_identity() {
        let h = PauliHamiltonian::from_strs(&[(0.4, "XZ"), (-1.0, "ZI")]).unwrap();
        let psi = StateVector::plus(2);
        let out = exact_ite(&h, &psi, 0.0).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(exact_ite(&h, &psi, -1.0).is_err());
    }

    #[test]
    fn ite_single_z_closed_form() {
        let h = PauliHamiltonian::from_strs(&[(1.0, "Z")]).unwrap();
        for tau in [0.1, 0.7, 3.0] {
            let out = exact_ite(&h, &StateVector::plus(1), tau).unwrap();
            let n = ((-2.0 * tau).exp() + (2.0 * tau).exp()).sqrt();
            assert!((out.amplitudes()[0] - C64::new((-tau).exp() / n, 0.0)).norm() < 1e-12);
            assert!((out.amplitudes()[1] - C64::new(tau.exp() / n, 0.0)).norm() < 1e-12);
        }
    }
}
