//! Quantum speed limit for non-Hermitian dynamics.
//!
//! The angle `φ(t)` between the renormalized state and its initial direction
//! (`cos φ = |⟨ψ̃(t)|ψ̃(0)⟩|`) moves no faster than
//! `χ = √(ΔH₀² + ΔΓ² − i⟨[H₀, Γ]⟩)`, all expectations taken in `ψ̃`.

use num_complex::Complex64;

use crate::dynamics::{expectation_complex, uncertainty, variance, Trajectory};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::state::{check_dimension, CMatrix, QuantumState};
use crate::table::Table;

/// Largest step in `φ` between neighbouring grid points.
pub const MAX_PHI_STEP: f64 = 0.1;

/// `χ` for the state `ψ` under `H₀ − iΓ`.
pub fn chi(state: &QuantumState, h0: &CMatrix, gamma: &CMatrix) -> Result<f64> {
    let psi = state.renormalized()?;
    let var_h = variance(&psi, h0)?;
    let var_g = variance(&psi, gamma)?;
    let comm = h0 * gamma - gamma * h0;
    let c = expectation_complex(&psi, &comm)?;
    // ⟨[H₀, Γ]⟩ is purely imaginary, so −i⟨[H₀, Γ]⟩ = Im⟨[H₀, Γ]⟩.
    let radicand = var_h + var_g + c.im;
    if radicand < -1e-9 {
        return Err(Error::InternalInconsistency { radicand });
    }
    Ok(radicand.max(0.0).sqrt())
}

/// `φ = arccos |⟨ψ̃₀|ψ̃⟩|`, evaluated as `atan2(‖ψ̃ − oψ̃₀‖, |o|)` which keeps
/// full precision near `φ = 0`.
fn angle(psi0: &QuantumState, psi: &QuantumState) -> Result<f64> {
    let psi = psi.renormalized()?;
    let o = psi0.overlap(&psi)?;
    let perp = (psi.amplitudes() - psi0.amplitudes() * o).norm();
    Ok(perp.atan2(o.norm().clamp(0.0, 1.0)))
}

/// Centered differences, one-sided at the ends.
fn derivative(grid: &[f64], y: &[f64]) -> Vec<f64> {
    let n = grid.len();
    (0..n)
        .map(|i| {
            if n < 2 {
                0.0
            } else if i == 0 {
                (y[1] - y[0]) / (grid[1] - grid[0])
            } else if i == n - 1 {
                (y[n - 1] - y[n - 2]) / (grid[n - 1] - grid[n - 2])
            } else {
                (y[i + 1] - y[i - 1]) / (grid[i + 1] - grid[i - 1])
            }
        })
        .collect()
}

/// Speed-limit diagnostics along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct QslTrace {
    pub grid: Vec<f64>,
    pub chi: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_dot: Vec<f64>,
    /// `φ̇ / χ` (zero where both vanish).
    pub ratio: Vec<f64>,
    pub fdot_r: Vec<f64>,
    pub fdot_theta: Vec<f64>,
    /// `F = |⟨ψ(t)|ψ(0)⟩|²` of the raw state.
    pub fidelity_raw: Vec<f64>,
    /// `F̃ = cos²φ` of the renormalized state.
    pub fidelity_renormalized: Vec<f64>,
}

impl QslTrace {
    /// Columns `t, chi, phi, phi_dot, ratio, fdot_r, fdot_theta`.
    pub fn table(&self) -> Table {
        Table::new()
            .with_column("t", self.grid.clone())
            .with_column("chi", self.chi.clone())
            .with_column("phi", self.phi.clone())
            .with_column("phi_dot", self.phi_dot.clone())
            .with_column("ratio", self.ratio.clone())
            .with_column("fdot_r", self.fdot_r.clone())
            .with_column("fdot_theta", self.fdot_theta.clone())
    }
}

fn ratio(phi_dot: f64, chi: f64) -> f64 {
    if chi > 0.0 {
        phi_dot / chi
    } else if phi_dot.abs() == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// `φ`, `φ̇`, `χ` and the fidelity-rate decomposition on the trajectory grid.
pub fn quantum_speed(traj: &Trajectory) -> Result<QslTrace> {
    let gen = traj.generator();
    let grid = traj.grid().to_vec();
    let psi0 = traj.initial().renormalized()?;
    let mut phi: Vec<f64> = Vec::with_capacity(grid.len());
    let mut chis = Vec::with_capacity(grid.len());
    for (&t, psi) in grid.iter().zip(traj.states()) {
        // The first state is ψ₀ itself.
        let p = if phi.is_empty() { 0.0 } else { angle(&psi0, psi)? };
        if let Some(&prev) = phi.last() {
            if (p - prev).abs() > MAX_PHI_STEP {
                return Err(Error::Resolution { time: t, jump: (p - prev).abs() });
            }
        }
        phi.push(p);
        chis.push(chi(psi, &gen.h0(t), &gen.gamma(t))?);
    }
    let phi_dot = derivative(&grid, &phi);
    let ratio = phi_dot.iter().zip(&chis).map(|(&d, &c)| ratio(d, c)).collect();
    let (fdot_r, fdot_theta) = fidelity_decomposition(traj)?;
    let fidelity_raw = traj.states().iter().map(|s| psi0.overlap(s).map(|o| o.norm_sqr())).collect::<Result<_>>()?;
    let fidelity_renormalized = phi.iter().map(|p| p.cos().powi(2)).collect();
    Ok(QslTrace { grid, chi: chis, phi, phi_dot, ratio, fdot_r, fdot_theta, fidelity_raw, fidelity_renormalized })
}

/// `(Ḟ_r, Ḟ_θ)` for `F = |⟨ψ(t)|ψ(0)⟩|²` of the raw state:
/// `Ḟ_r = −2⟨Γ⟩F`, `Ḟ_θ = 2 Re[⟨ψ|ψ₀⟩⟨ψ₀|−i(H − ⟨H⟩)|ψ⟩]`, `H = H₀ − iΓ`.
pub fn fidelity_decomposition(traj: &Trajectory) -> Result<(Vec<f64>, Vec<f64>)> {
    let gen = traj.generator();
    let psi0 = traj.initial().renormalized()?;
    let mut fr = Vec::with_capacity(traj.len());
    let mut ft = Vec::with_capacity(traj.len());
    for (&t, psi) in traj.grid().iter().zip(traj.states()) {
        let tilde = psi.renormalized()?;
        let h = gen.hamiltonian(t);
        let mean = expectation_complex(&tilde, &h)?;
        let g = expectation_complex(&tilde, &gen.gamma(t))?.re;
        let o = psi0.overlap(psi)?;
        let shifted = &h * psi.amplitudes() - psi.amplitudes() * mean;
        let proj = psi0.amplitudes().dotc(&shifted) * Complex64::new(0.0, -1.0);
        fr.push(-2.0 * g * o.norm_sqr());
        ft.push(2.0 * (o.conj() * proj).re);
    }
    Ok((fr, ft))
}

/// First time at which the state is orthogonal to its initial direction.
///
/// Candidates are grid intervals where `Re[o(t_{i+1}) o*(t_i)]` changes sign,
/// `o(t) = ⟨ψ̃₀|ψ(t)⟩`; the crossing is refined by bisection of
/// `Re[o(t) o*(t_i)]` using single RK4 steps from the grid.
pub fn orthogonality_time(traj: &Trajectory) -> Result<f64> {
    let psi0 = traj.initial().renormalized()?;
    let grid = traj.grid();
    let states = traj.states();
    let overlap = |s: &QuantumState| -> Result<Complex64> { Ok(psi0.overlap(&s.renormalized()?)?) };
    for i in 0..grid.len().saturating_sub(1) {
        let a = overlap(&states[i])?;
        let b = overlap(&states[i + 1])?;
        if (b * a.conj()).re > 0.0 {
            continue;
        }
        let signed = |t: f64| -> f64 {
            traj.state_at(t).and_then(|s| overlap(&s)).map(|o| (o * a.conj()).re).unwrap_or(f64::NAN)
        };
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        let tol = 1e-12 * grid[grid.len() - 1].abs().max(1.0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if signed(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        if overlap(&traj.state_at(t)?)?.norm() < 1e-6 {
            return Ok(t);
        }
    }
    Err(Error::NoOrthogonalState)
}

/// `χ` of the corrected run next to `ΔH₀` of the uncorrected drive.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedChi {
    pub grid: Vec<f64>,
    pub chi: Vec<f64>,
    pub delta_h0: Vec<f64>,
}

impl CorrectedChi {
    /// `max |χ − ΔH₀| / ΔH₀` over the central `fraction` of the run.
    pub fn max_relative_gap(&self, fraction: f64) -> f64 {
        let t_end = *self.grid.last().unwrap_or(&0.0);
        let margin = 0.5 * (1.0 - fraction) * t_end;
        self.grid
            .iter()
            .zip(self.chi.iter().zip(&self.delta_h0))
            .filter(|(&t, _)| t >= margin && t <= t_end - margin)
            .map(|(_, (&c, &d))| (c - d).abs() / d)
            .fold(0.0, f64::max)
    }
}

/// `χ` with the full generator of `traj` (drive, correction and damping) and
/// `ΔH₀` with the drive of `uncorrected`, both on the states of `traj`.
pub fn corrected_chi(traj: &Trajectory, uncorrected: &Generator) -> Result<CorrectedChi> {
    if uncorrected.dim() != traj.dim() {
        return Err(Error::Dimension { expected: traj.dim(), found: uncorrected.dim() });
    }
    check_dimension(traj.dim())?;
    let gen = traj.generator();
    let mut chis = Vec::with_capacity(traj.len());
    let mut dh = Vec::with_capacity(traj.len());
    for (&t, psi) in traj.grid().iter().zip(traj.states()) {
        chis.push(chi(psi, &gen.h0(t), &gen.gamma(t))?);
        dh.push(uncertainty(psi, &uncorrected.h0(t))?);
    }
    Ok(CorrectedChi { grid: traj.grid().to_vec(), chi: chis, delta_h0: dh })
}

/// Linear interpolation of a sampled series.
pub fn interpolate(grid: &[f64], values: &[f64], t: f64) -> f64 {
    let n = grid.len();
    if t <= grid[0] {
        return values[0];
    }
    if t >= grid[n - 1] {
        return values[n - 1];
    }
    let i = grid.partition_point(|&g| g <= t) - 1;
    let w = (t - grid[i]) / (grid[i + 1] - grid[i]);
    values[i] + w * (values[i + 1] - values[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, uniform_grid};
    use crate::state::{real_diagonal, real_matrix};
    use std::f64::consts::PI;

    fn sigma_x(omega: f64) -> CMatrix {
        real_matrix(2, &[0.0, 0.5 * omega, 0.5 * omega, 0.0])
    }

    #[test]
    fn chi_reductions() {
        let e = QuantumState::basis(2, 0).unwrap();
        let zero = real_diagonal(&[0.0, 0.0]);
        assert!((chi(&e, &sigma_x(3.0), &zero).unwrap() - 1.5).abs() < 1e-15);
        assert!((chi(&e, &sigma_x(3.0), &real_diagonal(&[0.2, 0.01])).unwrap() - 1.5).abs() < 1e-15);
        // eigenstate of H₀: only ΔΓ remains
        let plus = QuantumState::from_real(&[1.0, 1.0], 0.0).unwrap().renormalized().unwrap();
        let g = real_diagonal(&[0.3, 0.1]);
        assert!((chi(&plus, &sigma_x(3.0), &g).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rabi_speed_saturates() {
        let gen = Generator::unitary(2, "rabi", |_| sigma_x(PI)).unwrap();
        let traj = evolve(&gen, &QuantumState::basis(2, 0).unwrap(), &uniform_grid(0.9, 2000)).unwrap();
        let q = quantum_speed(&traj).unwrap();
        assert_eq!(q.phi[0], 0.0);
        for i in 1..q.grid.len() - 1 {
            assert!((q.phi[i] - 0.5 * PI * q.grid[i]).abs() < 1e-10);
            assert!((q.ratio[i] - 1.0).abs() < 1e-6);
            assert_eq!(q.fdot_r[i], 0.0);
        }
        let full = evolve(&gen, &QuantumState::basis(2, 0).unwrap(), &uniform_grid(1.5, 3000)).unwrap();
        assert!((orthogonality_time(&full).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn no_crossing_is_reported() {
        let gen = Generator::unitary(2, "rabi", |_| sigma_x(PI)).unwrap();
        let traj = evolve(&gen, &QuantumState::basis(2, 0).unwrap(), &uniform_grid(0.5, 1000)).unwrap();
        assert!(matches!(orthogonality_time(&traj), Err(Error::NoOrthogonalState)));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let gen = Generator::unitary(2, "rabi", |_| sigma_x(40.0)).unwrap();
        let traj = evolve(&gen, &QuantumState::basis(2, 0).unwrap(), &uniform_grid(1.0, 100)).unwrap();
        assert!(matches!(quantum_speed(&traj), Err(Error::Resolution { .. })));
    }

    #[test]
    fn pure_damping_of_an_eigenstate_is_radial() {
        let gen = Generator::new(2, "decay", |_| real_diagonal(&[0.0, 0.0]), |_| real_diagonal(&[0.4, 0.1])).unwrap();
        let traj = evolve(&gen, &QuantumState::basis(2, 1).unwrap(), &uniform_grid(1.0, 500)).unwrap();
        let (fr, ft) = fidelity_decomposition(&traj).unwrap();
        for (r, th) in fr.iter().zip(&ft) {
            assert_eq!(*th, 0.0);
            assert!(*r < 0.0);
        }
    }

    #[test]
    fn interpolation() {
        let g = [0.0, 1.0, 2.0];
        let v = [0.0, 2.0, 0.0];
        assert_eq!(interpolate(&g, &v, 0.5), 1.0);
        assert_eq!(interpolate(&g, &v, 1.5), 1.0);
        assert_eq!(interpolate(&g, &v, 3.0), 0.0);
    }
}
