//! State vectors and the small dense matrices acting on them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Norms below this are treated as zero.
pub(crate) const ZERO_NORM: f64 = 1e-300;

pub(crate) fn check_dimension(dim: usize) -> Result<()> {
    match dim {
        2 | 3 => Ok(()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// Amplitudes of a 2- or 3-level system at a given time.
///
/// Under non-Hermitian evolution the vector is generally not normalized;
/// [`QuantumState::renormalized`] gives the direction `ψ/‖ψ‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: CVector,
    time: f64,
}

impl QuantumState {
    pub fn new(amplitudes: Vec<Complex64>, time: f64) -> Result<Self> {
        Self::from_vector(CVector::from_vec(amplitudes), time)
    }

    pub fn from_vector(amplitudes: CVector, time: f64) -> Result<Self> {
        check_dimension(amplitudes.len())?;
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        Ok(Self { amplitudes, time })
    }

    /// Real amplitudes, convenient for tests and examples.
    pub fn from_real(amplitudes: &[f64], time: f64) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(), time)
    }

    /// The basis state `|level⟩`.
    pub fn basis(dim: usize, level: usize) -> Result<Self> {
        check_dimension(dim)?;
        if level >= dim {
            return Err(Error::InvalidState(format!("level {level} out of range for dimension {dim}")));
        }
        let mut v = CVector::zeros(dim);
        v[level] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v, time: 0.0 })
    }

    pub(crate) fn from_vector_unchecked(amplitudes: CVector, time: f64) -> Self {
        Self { amplitudes, time }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, level: usize) -> Complex64 {
        self.amplitudes[level]
    }

    /// Euclidean norm `‖ψ‖`.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Total population `⟨ψ|ψ⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn population(&self, level: usize) -> f64 {
        self.amplitudes[level].norm_sqr()
    }

    pub fn renormalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > ZERO_NORM) {
            return Err(Error::DegenerateState { time: self.time });
        }
        Ok(Self { amplitudes: self.amplitudes.unscale(n), time: self.time })
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }
}

/// `A†` equals `A` up to `tol` (max-entry metric); returns the deviation.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()).scale(0.5);
    herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn real_diagonal(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(entries[i], 0.0) } else { Complex64::new(0.0, 0.0) })
}

pub fn real_matrix(n: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(n, n, entries.iter().map(|&x| Complex64::new(x, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsupported_dimensions() {
        assert!(matches!(QuantumState::from_real(&[1.0], 0.0), Err(Error::UnsupportedDimension(1))));
        assert!(QuantumState::from_real(&[1.0, 0.0, 0.0, 0.0], 0.0).is_err());
        assert!(QuantumState::from_real(&[1.0, 0.0, 0.0], 0.0).is_ok());
    }

    #[test]
    fn zero_state_cannot_be_renormalized() {
        let s = QuantumState::from_real(&[0.0, 0.0], 0.25).unwrap();
        assert_eq!(s.renormalized(), Err(Error::DegenerateState { time: 0.25 }));
    }

    #[test]
    fn overlap_checks_dimensions() {
        let a = QuantumState::basis(2, 0).unwrap();
        let b = QuantumState::basis(3, 0).unwrap();
        assert!(matches!(a.overlap(&b), Err(Error::Dimension { .. })));
    }

    #[test]
    fn eigenvalue_of_diagonal() {
        let m = real_diagonal(&[0.3, -0.1, 2.0]);
        assert!((min_eigenvalue(&m) + 0.1).abs() < 1e-14);
        assert_eq!(hermiticity_defect(&m), 0.0);
    }
}
