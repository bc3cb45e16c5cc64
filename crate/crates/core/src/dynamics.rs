//! Fixed-step RK4 integration of `iψ̇ = (H₀ − iΓ)ψ` and the observables
//! derived from the resulting trajectory.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::state::{CMatrix, CVector, QuantumState, ZERO_NORM};

/// Steps per protocol duration used when nothing else is requested.
pub const DEFAULT_STEPS: usize = 20_000;

/// `steps + 1` equally spaced times on `[0, duration]`.
pub fn uniform_grid(duration: f64, steps: usize) -> Vec<f64> {
    let h = duration / steps as f64;
    let mut grid: Vec<f64> = (0..=steps).map(|i| i as f64 * h).collect();
    grid[steps] = duration;
    grid
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("need at least two time points".into()));
    }
    if grid[0] != 0.0 {
        return Err(Error::InvalidGrid(format!("grid must start at 0, starts at {}", grid[0])));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
        return Err(Error::InvalidGrid(format!("grid not strictly increasing at {} -> {}", w[0], w[1])));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub generator: String,
    pub method: &'static str,
    pub steps: usize,
}

/// Grid, one state per grid point, and the generator that produced them.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: Vec<f64>,
    states: Vec<QuantumState>,
    generator: Generator,
    meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> &QuantumState {
        &self.states[0]
    }

    pub fn last(&self) -> &QuantumState {
        self.states.last().expect("trajectory has at least two states")
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// State at an arbitrary time, obtained by one RK4 step from the nearest
    /// grid point at or before `t`.
    pub fn state_at(&self, t: f64) -> Result<QuantumState> {
        let end = *self.grid.last().unwrap();
        if !(0.0..=end).contains(&t) {
            return Err(Error::InvalidGrid(format!("t = {t} outside [0, {end}]")));
        }
        let i = match self.grid.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return Ok(self.states[i].clone()),
            Err(i) => i - 1,
        };
        let t0 = self.grid[i];
        let psi = rk4_step(&self.generator, self.states[i].amplitudes(), t0, t - t0);
        QuantumState::from_vector(psi, t).map_err(|_| Error::Divergence { time: t })
    }
}

fn derivative(gen: &Generator, t: f64, psi: &CVector) -> CVector {
    // ψ̇ = −i H ψ
    (gen.hamiltonian(t) * psi) * Complex64::new(0.0, -1.0)
}

pub(crate) fn rk4_step(gen: &Generator, psi: &CVector, t: f64, h: f64) -> CVector {
    let c = |x: f64| Complex64::new(x, 0.0);
    let k1 = derivative(gen, t, psi);
    let k2 = derivative(gen, t + 0.5 * h, &(psi + &k1 * c(0.5 * h)));
    let k3 = derivative(gen, t + 0.5 * h, &(psi + &k2 * c(0.5 * h)));
    let k4 = derivative(gen, t + h, &(psi + &k3 * c(h)));
    psi + (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(h / 6.0)
}

/// Integrate from `psi0` across `grid`, one classical RK4 step per interval.
pub fn evolve(gen: &Generator, psi0: &QuantumState, grid: &[f64]) -> Result<Trajectory> {
    check_grid(grid)?;
    if psi0.dim() != gen.dim() {
        return Err(Error::Dimension { expected: gen.dim(), found: psi0.dim() });
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("initial state must be normalized, norm = {}", psi0.norm())));
    }

    let mut states = Vec::with_capacity(grid.len());
    states.push(psi0.clone().with_time(0.0));
    let mut psi = psi0.amplitudes().clone();
    for w in grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        psi = rk4_step(gen, &psi, t0, t1 - t0);
        if psi.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Divergence { time: t1 });
        }
        states.push(QuantumState::from_vector_unchecked(psi.clone(), t1));
    }

    Ok(Trajectory {
        grid: grid.to_vec(),
        states,
        generator: gen.clone(),
        meta: TrajectoryMeta { generator: gen.label().to_string(), method: "rk4", steps: grid.len() - 1 },
    })
}

fn check_op(state: &QuantumState, op: &CMatrix) -> Result<()> {
    if op.nrows() != state.dim() || op.ncols() != state.dim() {
        return Err(Error::Dimension { expected: state.dim(), found: op.nrows() });
    }
    Ok(())
}

/// Complex `⟨ψ̃|A|ψ̃⟩` on the renormalized state.
pub(crate) fn expectation_complex(state: &QuantumState, op: &CMatrix) -> Result<Complex64> {
    check_op(state, op)?;
    let s = state.renormalized()?;
    let v = s.amplitudes();
    Ok(v.dotc(&(op * v)))
}

/// `⟨A⟩` on the renormalized state. The imaginary part (round-off for
/// Hermitian `A`) is dropped.
pub fn expectation(state: &QuantumState, op: &CMatrix) -> Result<f64> {
    Ok(expectation_complex(state, op)?.re)
}

/// `⟨A²⟩ − ⟨A⟩²` on the renormalized state, clamped at zero.
pub fn variance(state: &QuantumState, op: &CMatrix) -> Result<f64> {
    check_op(state, op)?;
    let s = state.renormalized()?;
    let v = s.amplitudes();
    let av = op * v;
    let mean = v.dotc(&av).re;
    let second = av.norm_squared();
    Ok((second - mean * mean).max(0.0))
}

/// Standard deviation `ΔA`.
pub fn uncertainty(state: &QuantumState, op: &CMatrix) -> Result<f64> {
    Ok(variance(state, op)?.sqrt())
}

/// Per-grid-point observables of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub grid: Vec<f64>,
    /// Surviving population `⟨ψ|ψ⟩`.
    pub norm: Vec<f64>,
    /// `populations[k][i]`: population of level `k` in the renormalized state.
    pub populations: Vec<Vec<f64>>,
    /// Share of the surviving population in the target level.
    pub purity: Vec<f64>,
    /// Raw population `|⟨target|ψ⟩|²`; the transfer fidelity at the final time.
    pub target_population: Vec<f64>,
    /// `|⟨ψ̃(t)|ψ̃(0)⟩|²`.
    pub fidelity_vs_initial: Vec<f64>,
}

impl ObservableSeries {
    pub fn final_norm(&self) -> f64 {
        *self.norm.last().unwrap()
    }

    pub fn final_purity(&self) -> f64 {
        *self.purity.last().unwrap()
    }

    pub fn final_fidelity(&self) -> f64 {
        *self.target_population.last().unwrap()
    }
}

/// Fraction of the surviving population found in `target_level`.
pub fn purity(state: &QuantumState, target_level: usize) -> Result<f64> {
    if target_level >= state.dim() {
        return Err(Error::InvalidParameter(format!("target level {target_level} out of range")));
    }
    let total = state.norm_sqr();
    if !(total.sqrt() > ZERO_NORM) {
        return Err(Error::DegenerateState { time: state.time() });
    }
    Ok(state.population(target_level) / total)
}

pub fn observables(traj: &Trajectory, target_level: usize) -> Result<ObservableSeries> {
    if traj.is_empty() {
        return Err(Error::InvalidGrid("empty trajectory".into()));
    }
    let dim = traj.dim();
    if target_level >= dim {
        return Err(Error::InvalidParameter(format!("target level {target_level} out of range for dimension {dim}")));
    }
    let first = traj.initial().renormalized()?;
    let n = traj.len();
    let mut out = ObservableSeries {
        grid: traj.grid().to_vec(),
        norm: Vec::with_capacity(n),
        populations: vec![Vec::with_capacity(n); dim],
        purity: Vec::with_capacity(n),
        target_population: Vec::with_capacity(n),
        fidelity_vs_initial: Vec::with_capacity(n),
    };
    for s in traj.states() {
        let total = s.norm_sqr();
        if !(total.sqrt() > ZERO_NORM) {
            return Err(Error::DegenerateState { time: s.time() });
        }
        out.norm.push(total);
        for (k, pops) in out.populations.iter_mut().enumerate() {
            pops.push(s.population(k) / total);
        }
        out.purity.push(s.population(target_level) / total);
        out.target_population.push(s.population(target_level));
        let ov = first.overlap(&s.renormalized()?)?;
        out.fidelity_vs_initial.push(ov.norm_sqr());
    }
    Ok(out)
}
