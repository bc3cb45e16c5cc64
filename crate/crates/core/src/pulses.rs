//! Control waveforms, split into the drive and the dissipation correction.
//!
//! The split matters under time scaling: the drive picks up a factor `Λ̇`
//! while the geometric correction is only composed with `Λ`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::state::CMatrix;
use crate::table::Table;
use crate::timescale::ScalingFunction;

pub type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// How a pair of waveforms enters the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseKind {
    /// `(Ω, δ)` in `H₀ = [[δ, Ω], [Ω, −δ]]` on `{|e⟩, |g⟩}`.
    TwoLevel,
    /// `(Ω_p, Ω_s)` in `H₀ = ½ [[0, Ω_p, 0], [Ω_p, 0, Ω_s], [0, Ω_s, 0]]`.
    Stirap,
}

impl PulseKind {
    pub fn dim(self) -> usize {
        match self {
            PulseKind::TwoLevel => 2,
            PulseKind::Stirap => 3,
        }
    }

    pub fn names(self) -> [&'static str; 2] {
        match self {
            PulseKind::TwoLevel => ["omega", "detuning"],
            PulseKind::Stirap => ["omega_p", "omega_s"],
        }
    }

    pub fn hamiltonian(self, a: f64, b: f64) -> CMatrix {
        let c = |x: f64| Complex64::new(x, 0.0);
        match self {
            PulseKind::TwoLevel => CMatrix::from_row_slice(2, 2, &[c(b), c(a), c(a), c(-b)]),
            PulseKind::Stirap => {
                let (p, s) = (0.5 * a, 0.5 * b);
                CMatrix::from_row_slice(3, 3, &[c(0.0), c(p), c(0.0), c(p), c(0.0), c(s), c(0.0), c(s), c(0.0)])
            }
        }
    }
}

/// Drive waveforms plus (possibly zero) correction waveforms on `[0, duration]`.
#[derive(Clone)]
pub struct PulseSet {
    kind: PulseKind,
    duration: f64,
    drive: [Arc<ScalarFn>; 2],
    correction: Option<[Arc<ScalarFn>; 2]>,
}

impl PulseSet {
    pub fn new<A, B>(kind: PulseKind, duration: f64, a: A, b: B) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { kind, duration, drive: [Arc::new(a), Arc::new(b)], correction: None }
    }

    /// A set whose drive is identically zero.
    pub fn correction_only<A, B>(kind: PulseKind, duration: f64, a: A, b: B) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { kind, duration, drive: [Arc::new(|_| 0.0), Arc::new(|_| 0.0)], correction: Some([Arc::new(a), Arc::new(b)]) }
    }

    /// Drive of `self` with the correction of `other`.
    pub fn with_correction_from(&self, other: &PulseSet) -> Result<Self> {
        if other.kind != self.kind {
            return Err(Error::InvalidParameter("pulse kinds differ".into()));
        }
        Ok(Self { correction: other.correction.clone(), ..self.clone() })
    }

    /// Same drive, no correction.
    pub fn drive_only(&self) -> Self {
        Self { correction: None, ..self.clone() }
    }

    pub fn kind(&self) -> PulseKind {
        self.kind
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn has_correction(&self) -> bool {
        self.correction.is_some()
    }

    pub fn drive_at(&self, t: f64) -> (f64, f64) {
        ((self.drive[0])(t), (self.drive[1])(t))
    }

    pub fn correction_at(&self, t: f64) -> (f64, f64) {
        match &self.correction {
            Some(c) => ((c[0])(t), (c[1])(t)),
            None => (0.0, 0.0),
        }
    }

    pub fn total_at(&self, t: f64) -> (f64, f64) {
        let (a, b) = self.drive_at(t);
        let (da, db) = self.correction_at(t);
        (a + da, b + db)
    }

    pub fn drive_hamiltonian(&self, t: f64) -> CMatrix {
        let (a, b) = self.drive_at(t);
        self.kind.hamiltonian(a, b)
    }

    pub fn correction_hamiltonian(&self, t: f64) -> CMatrix {
        let (a, b) = self.correction_at(t);
        self.kind.hamiltonian(a, b)
    }

    /// Generator with `H₀ = drive + correction` and a constant damping operator.
    pub fn generator(&self, gamma: CMatrix, label: impl Into<String>) -> Result<Generator> {
        let dim = self.kind.dim();
        if gamma.nrows() != dim {
            return Err(Error::Dimension { expected: dim, found: gamma.nrows() });
        }
        let pulses = self.clone();
        Generator::new(dim, label, move |t| {
            let (a, b) = pulses.total_at(t);
            pulses.kind.hamiltonian(a, b)
        }, move |_| gamma.clone())
    }

    /// Pulses of the scaled protocol: drive `Λ̇·f(Λ(t))`, correction `f(Λ(t))`.
    pub fn rescaled(&self, scaling: &ScalingFunction) -> PulseSet {
        let drive = self.drive.clone();
        let sc = scaling.clone();
        let sc2 = scaling.clone();
        let d0 = Arc::clone(&drive[0]);
        let d1 = Arc::clone(&drive[1]);
        let correction = self.correction.as_ref().map(|c| {
            let (c0, c1) = (Arc::clone(&c[0]), Arc::clone(&c[1]));
            let (s0, s1) = (scaling.clone(), scaling.clone());
            [
                Arc::new(move |t| c0(s0.lambda(t))) as Arc<ScalarFn>,
                Arc::new(move |t| c1(s1.lambda(t))) as Arc<ScalarFn>,
            ]
        });
        PulseSet {
            kind: self.kind,
            duration: scaling.duration(),
            drive: [
                Arc::new(move |t| {
                    let (l, ld) = sc.sample(t);
                    ld * d0(l)
                }),
                Arc::new(move |t| {
                    let (l, ld) = sc2.sample(t);
                    ld * d1(l)
                }),
            ],
            correction,
        }
    }

    /// Columns `t, a, b, δa, δb` on the given grid.
    pub fn table(&self, grid: &[f64]) -> Table {
        let [na, nb] = self.kind.names();
        let mut cols: [Vec<f64>; 4] = Default::default();
        for &t in grid {
            let (a, b) = self.drive_at(t);
            let (da, db) = self.correction_at(t);
            cols[0].push(a);
            cols[1].push(b);
            cols[2].push(da);
            cols[3].push(db);
        }
        let [a, b, da, db] = cols;
        Table::new()
            .with_column("t", grid.to_vec())
            .with_column(na, a)
            .with_column(nb, b)
            .with_column(format!("delta_{na}"), da)
            .with_column(format!("delta_{nb}"), db)
    }
}

impl fmt::Debug for PulseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PulseSet")
            .field("kind", &self.kind)
            .field("duration", &self.duration)
            .field("corrected", &self.has_correction())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::hermiticity_defect;

    #[test]
    fn hamiltonians_are_hermitian_with_expected_entries() {
        let h = PulseKind::TwoLevel.hamiltonian(2.0, 0.5);
        assert_eq!(h[(0, 0)].re, 0.5);
        assert_eq!(h[(0, 1)].re, 2.0);
        assert_eq!(h[(1, 1)].re, -0.5);
        let h3 = PulseKind::Stirap.hamiltonian(2.0, 4.0);
        assert_eq!(h3[(0, 1)].re, 1.0);
        assert_eq!(h3[(1, 2)].re, 2.0);
        assert_eq!(hermiticity_defect(&h3), 0.0);
    }

    #[test]
    fn correction_defaults_to_zero() {
        let p = PulseSet::new(PulseKind::Stirap, 1.0, |t| t, |t| 1.0 - t);
        assert_eq!(p.correction_at(0.3), (0.0, 0.0));
        let c = PulseSet::correction_only(PulseKind::Stirap, 1.0, |_| 0.1, |_| -0.1);
        let both = p.with_correction_from(&c).unwrap();
        assert_eq!(both.total_at(0.5), (0.6, 0.4));
        assert!(p.with_correction_from(&PulseSet::correction_only(PulseKind::TwoLevel, 1.0, |_| 0.0, |_| 0.0)).is_err());
    }
}
