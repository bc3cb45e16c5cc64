//! Pulse energy of a scaled protocol and the scaling that minimizes it.
//!
//! The energy is `E = ∫ (Ω_p² + Ω_s²) dt` over the scaled pulses
//! `Λ̇·Ω(Λ(t)) + δΩ(Λ(t))`. The field form `∫ ‖B‖² dt` is a quarter of it.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::numeric::simpson;
use crate::protocols::{corrections_for, stirap_pulses, AngularTrajectory, DissipationTensor};
use crate::pulses::PulseSet;
use crate::table::Table;
use crate::timescale::ScalingFunction;

/// Minimum Simpson panel count for energy integrals.
pub const ENERGY_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub total: f64,
    /// `∫ Λ̇² (Ω_p² + Ω_s²)`.
    pub drive_part: f64,
    /// `∫ (δΩ_p² + δΩ_s²)`.
    pub correction_part: f64,
    /// `2 ∫ Λ̇ (Ω_p δΩ_p + Ω_s δΩ_s)`.
    pub cross_term: f64,
    /// `correction_part / drive_part`.
    pub overhead_fraction: f64,
    /// `∫ ‖B‖² = total / 4`.
    pub field_energy: f64,
}

/// Energy of `pulses` (defined on `[0, T]`) played through `scaling`.
pub fn protocol_energy(pulses: &PulseSet, scaling: &ScalingFunction) -> EnergyReport {
    let d = scaling.duration();
    let part = |f: &dyn Fn(f64, f64, (f64, f64), (f64, f64)) -> f64| {
        simpson(
            |t| {
                let (l, ld) = scaling.sample(t);
                f(l, ld, pulses.drive_at(l), pulses.correction_at(l))
            },
            0.0,
            d,
            ENERGY_PANELS,
        )
    };
    let drive_part = part(&|_, ld, (a, b), _| ld * ld * (a * a + b * b));
    let correction_part = if pulses.has_correction() { part(&|_, _, _, (da, db)| da * da + db * db) } else { 0.0 };
    let cross_term =
        if pulses.has_correction() { part(&|_, ld, (a, b), (da, db)| 2.0 * ld * (a * da + b * db)) } else { 0.0 };
    let total = drive_part + correction_part + cross_term;
    let overhead_fraction = if drive_part > 0.0 { correction_part / drive_part } else { 0.0 };
    EnergyReport { total, drive_part, correction_part, cross_term, overhead_fraction, field_energy: 0.25 * total }
}

/// Energy-optimal scaling `Λ̇ = c / √(β̇²cot²γ + γ̇²)` evaluated at `Λ`, mapping
/// `[0, duration]` onto `[0, T]`. The scaled drive then has constant
/// amplitude `√(Ω_p² + Ω_s²) = 2c`. Returns the scaling and `c`.
pub fn optimal_scaling(angles: &AngularTrajectory, duration: f64) -> Result<(ScalingFunction, f64)> {
    let target = angles.duration;
    let probes = 2_000;
    for i in 1..probes {
        let s = target * i as f64 / probes as f64;
        let g = angles.gamma(s);
        if !(g > 0.0 && g < FRAC_PI_2) {
            return Err(Error::InvalidTrajectory(format!("mixing angle {g} outside (0, pi/2) at s = {s}")));
        }
    }
    let a = *angles;
    ScalingFunction::from_speed_law(duration, target, "optimal", move |s| a.field_strength_sq(s).sqrt())
}

/// `∫ δΩ² / ∫ Ω²` for the unscaled STIRAP drive and the correction of a
/// general dissipation tensor.
pub fn correction_overhead(angles: &AngularTrajectory, tensor: DissipationTensor) -> Result<f64> {
    if !(tensor.transverse >= 0.0 && tensor.in_plane >= 0.0) {
        return Err(Error::InvalidParameter("dissipation rates must be non-negative".into()));
    }
    let pulses = stirap_pulses(angles)?.with_correction_from(&corrections_for(angles, tensor))?;
    Ok(protocol_energy(&pulses, &ScalingFunction::identity(angles.duration)).overhead_fraction)
}

/// Columns `t, lambda, omega_p, omega_s` of the scaled drive, each pulse
/// divided by `norm` (the constant amplitude `2c` for the optimal scaling).
pub fn scaled_drive_table(pulses: &PulseSet, scaling: &ScalingFunction, norm: f64, points: usize) -> Table {
    let grid = crate::dynamics::uniform_grid(scaling.duration(), points.max(1));
    let mut lambda = Vec::with_capacity(grid.len());
    let mut p = Vec::with_capacity(grid.len());
    let mut s = Vec::with_capacity(grid.len());
    for &t in &grid {
        let (l, ld) = scaling.sample(t);
        let (a, b) = pulses.drive_at(l);
        lambda.push(scaling.lambda(t));
        p.push(ld * a / norm);
        s.push(ld * b / norm);
    }
    let [na, nb] = pulses.kind().names();
    Table::new().with_column("t", grid).with_column("lambda", lambda).with_column(na, p).with_column(nb, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{stirap_angles, StirapParams};
    use crate::pulses::PulseKind;

    #[test]
    fn constant_drive_energy() {
        let p = PulseSet::new(PulseKind::TwoLevel, 2.0, |_| 3.0, |_| 0.0);
        let e = protocol_energy(&p, &ScalingFunction::identity(2.0));
        assert!((e.total - 18.0).abs() < 1e-10);
        assert_eq!(e.correction_part, 0.0);
        assert!((e.field_energy - 4.5).abs() < 1e-10);
    }

    #[test]
    fn uniform_stretch_scales_inversely() {
        let a = stirap_angles(&StirapParams::default()).unwrap();
        let p = stirap_pulses(&a).unwrap();
        let e0 = protocol_energy(&p, &ScalingFunction::identity(1.0)).total;
        let e = protocol_energy(&p, &ScalingFunction::uniform(1.6, 1.0).unwrap()).total;
        assert!((e - e0 / 1.6).abs() < 1e-9 * e0);
    }

    #[test]
    fn zero_rates_have_no_overhead() {
        let a = stirap_angles(&StirapParams::default()).unwrap();
        assert_eq!(correction_overhead(&a, DissipationTensor::transverse(0.0)).unwrap(), 0.0);
    }
}
