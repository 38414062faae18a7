use crate::error::{Error, Result};
use nalgebra::Complex;

pub type C64 = Complex<f64>;

/// Dense amplitude vector over `n` qubits.
///
/// Qubit 0 is the least-significant bit of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// |0…0⟩.
    pub fn zero(n_qubits: usize) -> Self {
        assert!(
            n_qubits > 0 && n_qubits <= 24,
            "unsupported register size {n_qubits}"
        );
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits);
        if index >= s.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: s.amps.len(),
                got: index,
            });
        }
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[index] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// |+⟩^⊗n.
    pub fn plus(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let a = (dim as f64).sqrt().recip();
        Self {
            n_qubits,
            amps: vec![C64::new(a, 0.0); dim],
        }
    }

    /// Wraps raw amplitudes without normalizing them.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                got: dim,
            });
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::Numerical(format!(
                "cannot normalize state of norm {n}"
            )));
        }
        let inv = n.recip();
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.amps, &other.amps)
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }
}

/// ⟨a|b⟩ for raw amplitude slices.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Re⟨a|b⟩ without forming the imaginary part.
pub fn inner_re(a: &[C64], b: &[C64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_are_normalized() {
        assert!((StateVector::zero(3).norm() - 1.0).abs() < 1e-15);
        assert!((StateVector::plus(4).norm() - 1.0).abs() < 1e-15);
        assert_eq!(StateVector::plus(4).dim(), 16);
        assert_eq!(
            StateVector::basis(2, 3).unwrap().amplitudes()[3],
            C64::new(1.0, 0.0)
        );
        assert!(StateVector::basis(2, 4).is_err());
    }

    #[test]
    fn from_amplitudes_rejects_bad_length() {
        assert!(StateVector::from_amplitudes(vec![C64::new(1.0, 0.0); 3]).is_err());
        assert_eq!(
            StateVector::from_amplitudes(vec![C64::new(0.5, 0.0); 4])
                .unwrap()
                .n_qubits(),
            2
        );
    }

    #[test]
    fn normalize_zero_vector_fails() {
        let mut s = StateVector::from_amplitudes(vec![C64::new(0.0, 0.0); 4]).unwrap();
        assert!(s.normalize().is_err());
    }
}
