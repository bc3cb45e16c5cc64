//! Inverse-engineered STIRAP transfer `|1⟩ → |3⟩` through a lossy level `|2⟩`.
//!
//! The dissipation-free state is parametrized by two angles,
//! `ψ₀ = (cos γ cos β, −i sin γ, −cos γ sin β)`, with a cubic `β(t)` and a
//! quartic `γ(t)` fixed by their boundary conditions. The pump and Stokes
//! pulses follow from the angles, and a geometric correction keeps the
//! renormalized state on the same path when `|2⟩` decays.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::pulses::{PulseKind, PulseSet};
use crate::state::{real_diagonal, QuantumState};
use crate::timescale::DampingProfile;

use super::spin::{correction_field, DissipationTensor, Vec3};

/// Transfer target `|3⟩`.
pub const TARGET: usize = 2;
/// The lossy intermediate level `|2⟩`.
pub const INTERMEDIATE: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirapParams {
    /// `γ(0) = γ(T) = ε`.
    pub epsilon: f64,
    /// `γ(T/2)`, the peak mixing angle toward `|2⟩`.
    pub delta_peak: f64,
    pub duration: f64,
    /// Amplitude damping rate of `|2⟩`.
    pub gamma2: f64,
}

impl Default for StirapParams {
    fn default() -> Self {
        Self { epsilon: 0.05, delta_peak: std::f64::consts::FRAC_PI_4, duration: 1.0, gamma2: 0.1 }
    }
}

impl StirapParams {
    pub fn validate(&self) -> Result<()> {
        if self.duration == 0.0 {
            return Err(Error::DegenerateDuration(self.duration));
        }
        if !(self.duration > 0.0) {
            return Err(Error::InvalidParameter(format!("duration must be positive, got {}", self.duration)));
        }
        if !(0.0 < self.epsilon && self.epsilon < self.delta_peak && self.delta_peak < FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < epsilon < delta_peak < pi/2, got epsilon = {}, delta_peak = {}",
                self.epsilon, self.delta_peak
            )));
        }
        if !(self.gamma2 >= 0.0) {
            return Err(Error::InvalidParameter(format!("gamma2 must be non-negative, got {}", self.gamma2)));
        }
        Ok(())
    }
}

fn poly(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn poly_derivative(c: &[f64], t: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (j, &a)| acc * t + j as f64 * a)
}

/// Angles `β(t)`, `γ(t)` as power series in `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularTrajectory {
    pub duration: f64,
    pub beta: [f64; 4],
    pub gamma: [f64; 5],
}

impl AngularTrajectory {
    pub fn beta(&self, t: f64) -> f64 {
        poly(&self.beta, t)
    }

    pub fn gamma(&self, t: f64) -> f64 {
        poly(&self.gamma, t)
    }

    pub fn beta_dot(&self, t: f64) -> f64 {
        poly_derivative(&self.beta, t)
    }

    pub fn gamma_dot(&self, t: f64) -> f64 {
        poly_derivative(&self.gamma, t)
    }

    /// The dissipation-free state `(cos γ cos β, −i sin γ, −cos γ sin β)`.
    pub fn state(&self, t: f64) -> QuantumState {
        let (b, g) = (self.beta(t), self.gamma(t));
        QuantumState::new(
            vec![
                Complex64::new(g.cos() * b.cos(), 0.0),
                Complex64::new(0.0, -g.sin()),
                Complex64::new(-g.cos() * b.sin(), 0.0),
            ],
            t,
        )
        .expect("finite 3-level state")
    }

    /// Effective spin `S₀ = (cos γ sin β, −sin γ, cos γ cos β)`.
    pub fn spin(&self, t: f64) -> Vec3 {
        let (b, g) = (self.beta(t), self.gamma(t));
        [g.cos() * b.sin(), -g.sin(), g.cos() * b.cos()]
    }

    /// `β̇² cot²γ + γ̇²`, a quarter of `Ω_p² + Ω_s²`.
    pub fn field_strength_sq(&self, t: f64) -> f64 {
        let cot = 1.0 / self.gamma(t).tan();
        let (bd, gd) = (self.beta_dot(t), self.gamma_dot(t));
        bd * bd * cot * cot + gd * gd
    }
}

fn solve(rows: Vec<Vec<f64>>, rhs: Vec<f64>, duration: f64) -> Result<DVector<f64>> {
    let n = rhs.len();
    let a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let lu = a.lu();
    if !lu.is_invertible() {
        return Err(Error::DegenerateDuration(duration));
    }
    lu.solve(&DVector::from_vec(rhs)).ok_or(Error::DegenerateDuration(duration))
}

fn value_row(t: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| t.powi(j as i32)).collect()
}

fn slope_row(t: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| if j == 0 { 0.0 } else { j as f64 * t.powi(j as i32 - 1) }).collect()
}

/// Polynomial angles meeting
/// `β(0) = 0, β(T) = π/2, β̇(0) = β̇(T) = 0` and
/// `γ(0) = γ(T) = ε, γ̇(0) = γ̇(T) = 0, γ(T/2) = δ`,
/// each obtained from an LU solve with partial pivoting.
pub fn stirap_angles(params: &StirapParams) -> Result<AngularTrajectory> {
    params.validate()?;
    let t = params.duration;
    let b = solve(
        vec![value_row(0.0, 4), value_row(t, 4), slope_row(0.0, 4), slope_row(t, 4)],
        vec![0.0, FRAC_PI_2, 0.0, 0.0],
        t,
    )?;
    let g = solve(
        vec![value_row(0.0, 5), value_row(t, 5), slope_row(0.0, 5), slope_row(t, 5), value_row(0.5 * t, 5)],
        vec![params.epsilon, params.epsilon, 0.0, 0.0, params.delta_peak],
        t,
    )?;
    Ok(AngularTrajectory {
        duration: t,
        beta: [b[0], b[1], b[2], b[3]],
        gamma: [g[0], g[1], g[2], g[3], g[4]],
    })
}

/// Pump and Stokes pulses that drive the angles exactly:
/// `Ω_p = 2(β̇ sin β / tan γ + γ̇ cos β)`, `Ω_s = 2(β̇ cos β / tan γ − γ̇ sin β)`.
pub fn stirap_pulses(angles: &AngularTrajectory) -> Result<PulseSet> {
    let probes = 1_000;
    for i in 0..=probes {
        let t = angles.duration * i as f64 / probes as f64;
        let g = angles.gamma(t);
        if !(g > 1e-12 && g < FRAC_PI_2) {
            return Err(Error::PulseBlowup { time: t });
        }
    }
    let a = *angles;
    let b = *angles;
    Ok(PulseSet::new(
        PulseKind::Stirap,
        angles.duration,
        move |t| {
            let (be, g) = (a.beta(t), a.gamma(t));
            2.0 * (a.beta_dot(t) * be.sin() / g.tan() + a.gamma_dot(t) * be.cos())
        },
        move |t| {
            let (be, g) = (b.beta(t), b.gamma(t));
            2.0 * (b.beta_dot(t) * be.cos() / g.tan() - b.gamma_dot(t) * be.sin())
        },
    ))
}

/// Geometric correction for damping of `|2⟩` at rate `gamma2`.
///
/// Computed as `δB = S₀ × Γ̄̄S₀` with `Γ̄̄ = Γ₂ŷŷ` and `B = ½(Ω_p x̂ + Ω_s ẑ)`,
/// which works out to `δΩ_p = Γ₂ sin 2γ cos β`, `δΩ_s = −Γ₂ sin 2γ sin β`.
pub fn stirap_corrections(angles: &AngularTrajectory, gamma2: f64) -> Result<PulseSet> {
    if !(gamma2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("gamma2 must be non-negative, got {gamma2}")));
    }
    Ok(corrections_for(angles, DissipationTensor::transverse(gamma2)))
}

/// Correction pulses for a general diagonal dissipation tensor.
pub fn corrections_for(angles: &AngularTrajectory, tensor: DissipationTensor) -> PulseSet {
    let a = *angles;
    let b = *angles;
    PulseSet::correction_only(
        PulseKind::Stirap,
        angles.duration,
        move |t| 2.0 * correction_field(a.spin(t), &tensor)[0],
        move |t| 2.0 * correction_field(b.spin(t), &tensor)[2],
    )
}

/// A fully assembled STIRAP protocol.
#[derive(Debug, Clone)]
pub struct StirapProtocol {
    pub params: StirapParams,
    pub angles: AngularTrajectory,
    /// Drive only.
    pub drive: PulseSet,
    /// Correction only (zero when `gamma2 = 0` or corrections are off).
    pub corrections: PulseSet,
    /// `H₀` from the drive, `Γ = Γ₂|2⟩⟨2|`.
    pub drive_generator: Generator,
}

impl StirapProtocol {
    pub fn new(params: StirapParams) -> Result<Self> {
        Self::with_corrections(params, true)
    }

    pub fn with_corrections(params: StirapParams, corrected: bool) -> Result<Self> {
        let angles = stirap_angles(&params)?;
        let drive = stirap_pulses(&angles)?;
        let corrections = stirap_corrections(&angles, if corrected { params.gamma2 } else { 0.0 })?;
        let drive_generator = drive.generator(real_diagonal(&[0.0, params.gamma2, 0.0]), "stirap")?;
        Ok(Self { params, angles, drive, corrections, drive_generator })
    }

    /// Start of the parametrized path, `(cos ε, −i sin ε, 0)`.
    pub fn initial_state(&self) -> QuantumState {
        self.angles.state(0.0)
    }

    pub fn target_level(&self) -> usize {
        TARGET
    }

    /// Drive plus correction, unscaled.
    pub fn pulses(&self) -> PulseSet {
        self.drive.with_correction_from(&self.corrections).expect("same pulse kind")
    }

    /// `rate = Γ₂ sin²γ`, `drive_speed = β̇`: norm loss per unit of `β`.
    pub fn damping_profile(&self) -> DampingProfile {
        let (a, b) = (self.angles, self.angles);
        let g2 = self.params.gamma2;
        DampingProfile::new(move |s| g2 * a.gamma(s).sin().powi(2), move |s| b.beta_dot(s))
    }
}
