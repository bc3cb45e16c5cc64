use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{check_dimension, hermiticity_defect, min_eigenvalue, CMatrix};

pub type MatrixFn = dyn Fn(f64) -> CMatrix + Send + Sync;

/// A time-dependent non-Hermitian generator `H(t) = H₀(t) − iΓ(t)` (ħ = 1).
///
/// `H₀` is the Hermitian drive and `Γ` the Hermitian, positive semidefinite
/// damping operator. Both are sampled on demand, so RK substages see the exact
/// waveform rather than an interpolated table.
#[derive(Clone)]
pub struct Generator {
    dim: usize,
    label: String,
    h0: Arc<MatrixFn>,
    gamma: Arc<MatrixFn>,
}

impl Generator {
    pub fn new<H, G>(dim: usize, label: impl Into<String>, h0: H, gamma: G) -> Result<Self>
    where
        H: Fn(f64) -> CMatrix + Send + Sync + 'static,
        G: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        check_dimension(dim)?;
        Ok(Self { dim, label: label.into(), h0: Arc::new(h0), gamma: Arc::new(gamma) })
    }

    /// A generator with no damping.
    pub fn unitary<H>(dim: usize, label: impl Into<String>, h0: H) -> Result<Self>
    where
        H: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        Self::new(dim, label, h0, move |_| CMatrix::zeros(dim, dim))
    }

    pub(crate) fn from_parts(dim: usize, label: String, h0: Arc<MatrixFn>, gamma: Arc<MatrixFn>) -> Self {
        Self { dim, label, h0, gamma }
    }

    pub(crate) fn h0_fn(&self) -> Arc<MatrixFn> {
        Arc::clone(&self.h0)
    }

    pub(crate) fn gamma_fn(&self) -> Arc<MatrixFn> {
        Arc::clone(&self.gamma)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn h0(&self, t: f64) -> CMatrix {
        (self.h0)(t)
    }

    pub fn gamma(&self, t: f64) -> CMatrix {
        (self.gamma)(t)
    }

    /// `H₀(t) − iΓ(t)`.
    pub fn hamiltonian(&self, t: f64) -> CMatrix {
        let minus_i = Complex64::new(0.0, -1.0);
        self.h0(t) + self.gamma(t) * minus_i
    }

    /// Replace the damping operator, keeping the drive.
    pub fn with_gamma<G>(&self, gamma: G) -> Self
    where
        G: Fn(f64) -> CMatrix + Send + Sync + 'static,
    {
        Self { dim: self.dim, label: self.label.clone(), h0: Arc::clone(&self.h0), gamma: Arc::new(gamma) }
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Check the structural invariants (`H₀ = H₀†`, `Γ = Γ† ⪰ 0`) at the given times.
    pub fn validate(&self, times: &[f64], tol: f64) -> Result<()> {
        for &t in times {
            let h = self.h0(t);
            let g = self.gamma(t);
            for m in [&h, &g] {
                if m.nrows() != self.dim || m.ncols() != self.dim {
                    return Err(Error::Dimension { expected: self.dim, found: m.nrows() });
                }
            }
            let dh = hermiticity_defect(&h);
            if dh > tol {
                return Err(Error::NonHermitian { time: t, deviation: dh });
            }
            let dg = hermiticity_defect(&g);
            if dg > tol {
                return Err(Error::NonHermitian { time: t, deviation: dg });
            }
            let lo = min_eigenvalue(&g);
            if lo < -tol {
                return Err(Error::NotPositive { time: t, min_eigenvalue: lo });
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator").field("dim", &self.dim).field("label", &self.label).finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{real_diagonal, real_matrix};

    #[test]
    fn validate_flags_non_hermitian_drive() {
        let g = Generator::unitary(2, "bad", |_| real_matrix(2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(matches!(g.validate(&[0.0], 1e-12), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn validate_flags_negative_damping() {
        let g = Generator::new(2, "gain", |_| real_matrix(2, &[0.0; 4]), |_| real_diagonal(&[0.1, -0.2])).unwrap();
        assert!(matches!(g.validate(&[0.5], 1e-12), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn hamiltonian_combines_parts() {
        let g = Generator::new(2, "x", |_| real_matrix(2, &[0.0, 1.0, 1.0, 0.0]), |_| real_diagonal(&[0.2, 0.0])).unwrap();
        let h = g.hamiltonian(0.0);
        assert_eq!(h[(0, 0)], Complex64::new(0.0, -0.2));
        assert_eq!(h[(0, 1)], Complex64::new(1.0, 0.0));
        assert!(g.validate(&[0.0, 1.0], 1e-12).is_ok());
    }
}
