//! Fast quasi-adiabatic (FAQUAD) passage in a damped two-level system.
//!
//! With a constant Rabi frequency `Ω₀` and mixing angle `θ(t)` defined by
//! `cos θ(t) = f_ε(t) = (1 − ε)(1 − 2t/T)`, the adiabaticity quotient
//! `θ̇·|⟨φ₊|∂_θφ₋⟩| / |E₊ − E₋|` is the constant `c = (1 − ε)/(2Ω₀T)`.
//! The detuning follows as `δ(t) = Ω₀ / tan θ(t)`.

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::pulses::{PulseKind, PulseSet};
use crate::state::{real_diagonal, QuantumState};
use crate::timescale::DampingProfile;

/// Level index of `|e⟩`.
pub const EXCITED: usize = 0;
/// Level index of `|g⟩`, the transfer target.
pub const GROUND: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaquadParams {
    /// Rabi frequency `Ω₀`.
    pub omega0: f64,
    /// Boundary regularizer: `cos θ(0) = 1 − ε`, `cos θ(T) = −(1 − ε)`.
    pub epsilon: f64,
    pub duration: f64,
    pub gamma_e: f64,
    pub gamma_g: f64,
}

impl Default for FaquadParams {
    fn default() -> Self {
        Self { omega0: 10.0, epsilon: 0.01, duration: 1.0, gamma_e: 0.1, gamma_g: 0.001 }
    }
}

impl FaquadParams {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon == 0.0 {
            return Err(Error::SingularDetuning);
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if !(self.omega0 > 0.0) || !(self.duration > 0.0) {
            return Err(Error::InvalidParameter("omega0 and duration must be positive".into()));
        }
        if !(self.gamma_e >= 0.0) || !(self.gamma_g >= 0.0) {
            return Err(Error::InvalidParameter("damping rates must be non-negative".into()));
        }
        Ok(())
    }

    /// `c = (1 − ε)/(2Ω₀T)`.
    pub fn adiabaticity_constant(&self) -> f64 {
        (1.0 - self.epsilon) / (2.0 * self.omega0 * self.duration)
    }
}

/// The FAQUAD protocol: pulses, generator and the damping profile used to
/// build its quasi-unitary scaling.
#[derive(Debug, Clone)]
pub struct FaquadSchedule {
    pub params: FaquadParams,
    pub pulses: PulseSet,
    pub generator: Generator,
    pub profile: DampingProfile,
}

fn f_eps(p: &FaquadParams, t: f64) -> f64 {
    (1.0 - p.epsilon) * (1.0 - 2.0 * t / p.duration)
}

impl FaquadSchedule {
    pub fn f(&self, t: f64) -> f64 {
        f_eps(&self.params, t)
    }

    pub fn theta(&self, t: f64) -> f64 {
        self.f(t).acos()
    }

    /// `θ̇ = 2(1 − ε) / (T √(1 − f²))`.
    pub fn theta_dot(&self, t: f64) -> f64 {
        let f = self.f(t);
        2.0 * (1.0 - self.params.epsilon) / (self.params.duration * (1.0 - f * f).sqrt())
    }

    pub fn detuning(&self, t: f64) -> f64 {
        let f = self.f(t);
        self.params.omega0 * f / (1.0 - f * f).sqrt()
    }

    /// `⟨φ₊(θ)|γ̂|φ₊(θ)⟩ = ½(γ_e + γ_g) + ½(γ_e − γ_g)f_ε`.
    pub fn damping_rate(&self, t: f64) -> f64 {
        let p = &self.params;
        0.5 * (p.gamma_e + p.gamma_g) + 0.5 * (p.gamma_e - p.gamma_g) * self.f(t)
    }

    pub fn adiabaticity_constant(&self) -> f64 {
        self.params.adiabaticity_constant()
    }

    /// The protocol starts in `|e⟩`.
    pub fn initial_state(&self) -> QuantumState {
        QuantumState::basis(2, EXCITED).expect("2-level basis state")
    }

    pub fn target_level(&self) -> usize {
        GROUND
    }
}

pub fn faquad_schedule(params: FaquadParams) -> Result<FaquadSchedule> {
    params.validate()?;
    let p = params;
    let omega0 = p.omega0;
    let pulses = PulseSet::new(PulseKind::TwoLevel, p.duration, move |_| omega0, move |t| {
        let f = f_eps(&p, t);
        omega0 * f / (1.0 - f * f).sqrt()
    });
    let generator = pulses.generator(real_diagonal(&[p.gamma_e, p.gamma_g]), "faquad")?;
    let profile = DampingProfile::new(
        move |s| 0.5 * (p.gamma_e + p.gamma_g) + 0.5 * (p.gamma_e - p.gamma_g) * f_eps(&p, s),
        move |s| {
            let f = f_eps(&p, s);
            2.0 * (1.0 - p.epsilon) / (p.duration * (1.0 - f * f).sqrt())
        },
    );
    Ok(FaquadSchedule { params, pulses, generator, profile })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_epsilon_is_singular() {
        let p = FaquadParams { epsilon: 0.0, ..Default::default() };
        assert!(matches!(faquad_schedule(p), Err(Error::SingularDetuning)));
    }

    #[test]
    fn midpoint_and_boundaries() {
        let s = faquad_schedule(FaquadParams::default()).unwrap();
        assert!((s.theta(0.5) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(s.detuning(0.5).abs() < 1e-14);
        assert_eq!(s.theta(0.0).cos(), 0.99);
        assert_eq!(s.theta(1.0).cos(), -0.99);
        // arccos(0.99)
        assert!((s.theta(0.0) - 0.141_539_473_324_427_3).abs() < 1e-15);
    }

    #[test]
    fn adiabaticity_constant_value() {
        let c = FaquadParams::default().adiabaticity_constant();
        assert!((c - 0.0495).abs() < 1e-15);
    }

    #[test]
    fn theta_dot_matches_finite_difference() {
        let s = faquad_schedule(FaquadParams::default()).unwrap();
        let h = 1e-6;
        for i in 1..20 {
            let t = i as f64 / 20.0;
            let fd = (s.theta(t + h) - s.theta(t - h)) / (2.0 * h);
            assert!((fd - s.theta_dot(t)).abs() < 1e-6 * s.theta_dot(t));
        }
    }
}
