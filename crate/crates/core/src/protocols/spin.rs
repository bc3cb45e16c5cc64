//! Effective-spin picture of the three-level Λ system.
//!
//! A state of the form `(S_z, i S_y, −S_x)` with real `S` evolves as
//! `dS/dt = B × S − Γ̄̄S` with `B = ½(Ω_p x̂ + Ω_s ẑ)` and, for damping of the
//! intermediate level, `Γ̄̄ = Γ₂ŷŷ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pulses::{PulseKind, PulseSet};
use crate::state::QuantumState;

pub type Vec3 = [f64; 3];

/// Tolerance on the imaginary/real parts that must vanish after phase fixing.
pub const MANIFOLD_TOL: f64 = 1e-6;

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Spin vector of a (possibly unnormalized) 3-level state; its length is `‖ψ‖`.
///
/// The global phase is fixed so that `c₁ − c₃` is real and positive, which
/// is non-vanishing along the whole transfer (the bare `c₁` vanishes at the
/// end). If that combination vanishes the phase is fixed by `c₂ = −i|c₂|`.
pub fn spin_vector(state: &QuantumState) -> Result<Vec3> {
    if state.dim() != 3 {
        return Err(Error::Dimension { expected: 3, found: state.dim() });
    }
    let n = state.norm();
    if !(n > 0.0) {
        return Err(Error::DegenerateState { time: state.time() });
    }
    let (c1, c2, c3) = (state.amplitude(0), state.amplitude(1), state.amplitude(2));
    let anchor = c1 - c3;
    let phase = if anchor.norm() > 1e-8 * n {
        anchor.conj() / anchor.norm()
    } else {
        // c₂ → −i|c₂|
        let c2n = c2.norm();
        if c2n == 0.0 {
            return Err(Error::DegenerateState { time: state.time() });
        }
        Complex64::new(0.0, -1.0) * c2.conj() / c2n
    };
    let (c1, c2, c3) = (c1 * phase, c2 * phase, c3 * phase);
    let off = c1.im.abs().max(c2.re.abs()).max(c3.im.abs()) / n;
    if off > MANIFOLD_TOL {
        return Err(Error::OffManifold { deviation: off });
    }
    Ok([-c3.re, c2.im, c1.re])
}

/// Unit spin vector of a state on the parametrized manifold.
pub fn spin_map(state: &QuantumState) -> Result<Vec3> {
    let s = spin_vector(state)?;
    let n = norm(s);
    Ok([s[0] / n, s[1] / n, s[2] / n])
}

/// `B(t) = ½(Ω_p x̂ + Ω_s ẑ)` from the total (drive plus correction) pulses.
pub fn effective_field(pulses: &PulseSet) -> Result<impl Fn(f64) -> Vec3 + '_> {
    if pulses.kind() != PulseKind::Stirap {
        return Err(Error::Dimension { expected: 3, found: pulses.kind().dim() });
    }
    Ok(move |t| {
        let (p, s) = pulses.total_at(t);
        [0.5 * p, 0.0, 0.5 * s]
    })
}

/// Diagonal dissipation tensor `Γ̄̄ = Γ⊥ ŷŷ + Γ∥ (x̂x̂ + ẑẑ)`.
///
/// Damping of `|2⟩` alone is `Γ⊥ = Γ₂`, `Γ∥ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationTensor {
    pub transverse: f64,
    pub in_plane: f64,
}

impl DissipationTensor {
    pub fn transverse(rate: f64) -> Self {
        Self { transverse: rate, in_plane: 0.0 }
    }

    pub fn apply(&self, s: Vec3) -> Vec3 {
        [self.in_plane * s[0], self.transverse * s[1], self.in_plane * s[2]]
    }
}

/// Geometric correction `δB = S × Γ̄̄S`. Only `Γ⊥ − Γ∥` survives, and `δB`
/// has no `ŷ` component, so it is realizable with the pump and Stokes fields.
pub fn correction_field(s: Vec3, tensor: &DissipationTensor) -> Vec3 {
    cross(s, tensor.apply(s))
}
