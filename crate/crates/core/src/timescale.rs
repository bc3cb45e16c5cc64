//! Monotone time reparametrizations `Λ: [0, T_dur] → [0, T]` and the
//! transform `H_Λ(t) = Λ̇(t)·H(Λ(t))` they induce.
//!
//! Scalings defined by a speed law `Λ̇ = K / w(Λ)` (quasi-unitary and
//! energy-optimal) are built in the protocol parameter rather than by time
//! stepping: `t(Λ) = ∫₀^Λ w / K` is tabulated by composite Simpson and
//! inverted through a monotone cubic with exact node slopes. This stays
//! well-behaved where `w` vanishes and `Λ̇` diverges at the endpoints.

use std::fmt;
use std::sync::Arc;

use crate::energy;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::numeric::{bisect, cumulative_simpson, MonotoneCubic};
use crate::protocols::AngularTrajectory;
use crate::pulses::{PulseSet, ScalarFn};
use crate::table::Table;

/// Simpson panels used to tabulate speed-law scalings.
pub const REPARAM_PANELS: usize = 10_000;

/// Relative inward offset used when a speed law is singular at an endpoint.
const ENDPOINT_NUDGE: f64 = 1e-9;

type PairFn = dyn Fn(f64) -> (f64, f64) + Send + Sync;

#[derive(Clone)]
enum Kind {
    /// `Λ(t) = t·T/T_dur`.
    Uniform,
    /// `Λ(t) = T·P(t/T_dur)`, `P(x) = 3x² − 2x³`.
    Polynomial,
    SpeedLaw(Arc<SpeedLaw>),
    Analytic(Arc<PairFn>),
    Sampled(MonotoneCubic),
}

struct SpeedLaw {
    /// `t` as a function of `Λ`.
    table: MonotoneCubic,
    weight: Arc<ScalarFn>,
    constant: f64,
}

/// A monotone scaling function with its derivative.
#[derive(Clone)]
pub struct ScalingFunction {
    duration: f64,
    target: f64,
    label: String,
    kind: Kind,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

pub fn smoothstep(x: f64) -> f64 {
    x * x * (3.0 - 2.0 * x)
}

pub fn smoothstep_derivative(x: f64) -> f64 {
    6.0 * x * (1.0 - x)
}

impl ScalingFunction {
    /// `Λ(t) = t` on `[0, T]`.
    pub fn identity(target: f64) -> Self {
        Self { duration: target, target, label: "identity".into(), kind: Kind::Uniform }
    }

    /// Constant-speed map of `[0, duration]` onto `[0, target]`.
    pub fn uniform(duration: f64, target: f64) -> Result<Self> {
        check_positive("duration", duration)?;
        check_positive("target", target)?;
        Ok(Self { duration, target, label: "uniform".into(), kind: Kind::Uniform })
    }

    /// `Λ(t) = T·P(t/T_dur)` with `P(x) = 3x² − 2x³`: zero speed at both ends,
    /// peak speed `1.5·T/T_dur` at mid-time.
    pub fn polynomial(duration: f64, target: f64) -> Result<Self> {
        check_positive("duration", duration)?;
        check_positive("target", target)?;
        Ok(Self { duration, target, label: "polynomial".into(), kind: Kind::Polynomial })
    }

    /// A scaling given in closed form as `t ↦ (Λ(t), Λ̇(t))`.
    pub fn from_fn<F>(duration: f64, target: f64, label: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        check_positive("duration", duration)?;
        check_positive("target", target)?;
        let (l0, _) = f(0.0);
        let (l1, _) = f(duration);
        if l0.abs() > 1e-9 * target || (l1 - target).abs() > 1e-9 * target {
            return Err(Error::InvalidParameter(format!("scaling must map [0, {duration}] onto [0, {target}], got [{l0}, {l1}]")));
        }
        Ok(Self { duration, target, label: label.into(), kind: Kind::Analytic(Arc::new(f)) })
    }

    /// An externally supplied scaling, sampled at `times`, interpolated by a
    /// monotone cubic.
    pub fn from_samples(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.first() != Some(&0.0) || values.first() != Some(&0.0) {
            return Err(Error::InvalidParameter("sampled scaling must start at (0, 0)".into()));
        }
        let duration = *times.last().unwrap();
        let target = *values.last().unwrap();
        check_positive("duration", duration)?;
        check_positive("target", target)?;
        let interp = MonotoneCubic::new(times, values)?;
        Ok(Self { duration, target, label: "sampled".into(), kind: Kind::Sampled(interp) })
    }

    /// Scaling with speed law `Λ̇ = K / weight(Λ)`, `K` fixed by `Λ(duration) = target`.
    /// Returns the scaling and `K`.
    pub fn from_speed_law<W>(duration: f64, target: f64, label: impl Into<String>, weight: W) -> Result<(Self, f64)>
    where
        W: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_positive("duration", duration)?;
        check_positive("target", target)?;
        let (nodes, cum) = cumulative_simpson(&weight, 0.0, target, REPARAM_PANELS);
        let total = *cum.last().unwrap();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidParameter(format!("speed-law weight integrates to {total}")));
        }
        let constant = total / duration;
        let times: Vec<f64> = cum.iter().map(|c| c / constant).collect();
        let slopes: Vec<f64> = nodes.iter().map(|&l| weight(l) / constant).collect();
        let mut times = times;
        let last = times.len() - 1;
        times[last] = duration;
        // dt/dΛ is the interpolated quantity; it is finite everywhere.
        let table = MonotoneCubic::with_slopes(nodes, times, slopes)?;
        let law = SpeedLaw { table, weight: Arc::new(weight), constant };
        Ok((Self { duration, target, label: label.into(), kind: Kind::SpeedLaw(Arc::new(law)) }, constant))
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `Λ(t)`, with `t` clamped to `[0, T_dur]`.
    pub fn lambda(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        match &self.kind {
            Kind::Uniform => {
                if t == self.duration {
                    self.target
                } else {
                    t * self.target / self.duration
                }
            }
            Kind::Polynomial => self.target * smoothstep(t / self.duration),
            Kind::SpeedLaw(law) => {
                if t == self.duration {
                    self.target
                } else {
                    law.table.inverse(t)
                }
            }
            Kind::Analytic(f) => f(t).0,
            Kind::Sampled(m) => m.eval(t),
        }
    }

    fn raw_speed(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        match &self.kind {
            Kind::Uniform => self.target / self.duration,
            Kind::Polynomial => self.target / self.duration * smoothstep_derivative(t / self.duration),
            Kind::SpeedLaw(law) => law.constant / (law.weight)(self.lambda(t)),
            Kind::Analytic(f) => f(t).1,
            Kind::Sampled(m) => m.eval_with_derivative(t).1,
        }
    }

    /// `Λ̇(t)`. Where the speed law diverges (exact endpoints of the
    /// quasi-unitary and optimal scalings) the one-sided finite difference over
    /// `10⁻⁶·T_dur` is returned instead.
    pub fn lambda_dot(&self, t: f64) -> f64 {
        let v = self.raw_speed(t);
        if v.is_finite() {
            return v;
        }
        let h = 1e-6 * self.duration;
        if t < 0.5 * self.duration {
            (self.lambda(t + h) - self.lambda(t)) / h
        } else {
            (self.lambda(t) - self.lambda(t - h)) / h
        }
    }

    /// `(Λ, Λ̇)` for sampling a scaled generator. At a singular endpoint the
    /// pair is taken a hair inside the interval, so products such as
    /// `Λ̇·Ω(Λ)` approach their finite limit instead of `∞·0`.
    pub fn sample(&self, t: f64) -> (f64, f64) {
        let v = self.raw_speed(t);
        if v.is_finite() {
            return (self.lambda(t), v);
        }
        let d = ENDPOINT_NUDGE * self.duration;
        let t = t.clamp(d, self.duration - d);
        (self.lambda(t), self.raw_speed(t))
    }

    /// `t` such that `Λ(t) = s`.
    pub fn inverse(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.target);
        match &self.kind {
            Kind::Uniform => s * self.duration / self.target,
            Kind::SpeedLaw(law) => law.table.eval(s),
            _ => bisect(|t| self.lambda(t) - s, 0.0, self.duration, 1e-15).unwrap_or_else(|_| {
                if s <= 0.0 {
                    0.0
                } else {
                    self.duration
                }
            }),
        }
    }

    /// Columns `t, lambda, lambda_dot` on `points` equally spaced times.
    pub fn table(&self, points: usize) -> Table {
        let grid = crate::dynamics::uniform_grid(self.duration, points.max(1));
        let lambda = grid.iter().map(|&t| self.lambda(t)).collect();
        let speed = grid.iter().map(|&t| self.lambda_dot(t)).collect();
        Table::new().with_column("t", grid).with_column("lambda", lambda).with_column("lambda_dot", speed)
    }

    /// Two-column `t, lambda` CSV.
    pub fn to_csv(&self, points: usize) -> String {
        let t = self.table(points);
        Table::new().with_column("t", t.columns[0].clone()).with_column("lambda", t.columns[1].clone()).to_csv()
    }
}

impl fmt::Debug for ScalingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalingFunction")
            .field("label", &self.label)
            .field("duration", &self.duration)
            .field("target", &self.target)
            .finish()
    }
}

/// Instantaneous damping rate and drive speed of a protocol, both as functions
/// of the protocol parameter `s ∈ [0, T]`.
#[derive(Clone)]
pub struct DampingProfile {
    rate: Arc<ScalarFn>,
    drive_speed: Arc<ScalarFn>,
}

impl DampingProfile {
    pub fn new<R, V>(rate: R, drive_speed: V) -> Self
    where
        R: Fn(f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { rate: Arc::new(rate), drive_speed: Arc::new(drive_speed) }
    }

    pub fn rate(&self, s: f64) -> f64 {
        (self.rate)(s)
    }

    pub fn drive_speed(&self, s: f64) -> f64 {
        (self.drive_speed)(s)
    }
}

impl fmt::Debug for DampingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DampingProfile")
    }
}

/// Scaling that makes the geometric damping rate constant: along the
/// quasi-adiabatic path `Λ̇ = rate(Λ) / (c′·drive_speed(Λ))`, with `c′` fixed by
/// `Λ(duration) = target`. Returns the scaling and `c′`.
pub fn quasi_unitary_scaling(profile: &DampingProfile, duration: f64, target: f64) -> Result<(ScalingFunction, f64)> {
    check_positive("duration", duration)?;
    check_positive("target", target)?;
    let probes = 2_000;
    for i in 1..probes {
        let s = target * i as f64 / probes as f64;
        let r = profile.rate(s);
        if !(r > 0.0) {
            return Err(Error::NonInvertibleProfile { s, rate: r });
        }
    }
    let p = profile.clone();
    let (scaling, constant) =
        ScalingFunction::from_speed_law(duration, target, "quasi_unitary", move |s| p.drive_speed(s) / p.rate(s))?;
    Ok((scaling, 1.0 / constant))
}

/// Scaled generator: drive `Λ̇(t)·H₀(Λ(t))`, plus the correction pulses
/// composed with `Λ` but not multiplied by `Λ̇`. The damping operator is
/// sampled at `Λ(t)` and is not rescaled.
pub fn apply_scaling(gen: &Generator, corrections: Option<&PulseSet>, scaling: &ScalingFunction) -> Result<Generator> {
    if let Some(c) = corrections {
        if c.kind().dim() != gen.dim() {
            return Err(Error::Dimension { expected: gen.dim(), found: c.kind().dim() });
        }
    }
    let h0 = gen.h0_fn();
    let gamma = gen.gamma_fn();
    let s1 = scaling.clone();
    let s2 = scaling.clone();
    let corr = corrections.cloned();
    let label = format!("{} | {}", gen.label(), scaling.label());
    Ok(Generator::from_parts(
        gen.dim(),
        label,
        Arc::new(move |t| {
            let (l, ld) = s1.sample(t);
            let mut m = h0(l) * num_complex::Complex64::new(ld, 0.0);
            if let Some(c) = &corr {
                m += c.correction_hamiltonian(l);
            }
            m
        }),
        Arc::new(move |t| gamma(s2.lambda(t))),
    ))
}

/// A one-parameter family of scalings indexed by their duration.
#[derive(Clone, Debug)]
pub enum ScalingFamily {
    /// Constant speed; reduces to the identity at `T_dur = T`.
    Uniform,
    Polynomial,
    QuasiUnitary(DampingProfile),
    Optimal(AngularTrajectory),
}

impl ScalingFamily {
    pub fn build(&self, duration: f64, target: f64) -> Result<ScalingFunction> {
        match self {
            ScalingFamily::Uniform => ScalingFunction::uniform(duration, target),
            ScalingFamily::Polynomial => ScalingFunction::polynomial(duration, target),
            ScalingFamily::QuasiUnitary(p) => quasi_unitary_scaling(p, duration, target).map(|r| r.0),
            ScalingFamily::Optimal(a) => energy::optimal_scaling(a, duration).map(|r| r.0),
        }
    }
}

/// Duration `T_k` at which the family's scaled drive has energy `e_ref`.
///
/// For speed-law families the energy is exactly `∝ 1/T_k`, so the answer is
/// closed form. The polynomial family is root-found by bisection.
pub fn energy_matched_duration(pulses: &PulseSet, family: &ScalingFamily, e_ref: f64) -> Result<(f64, ScalingFunction)> {
    check_positive("reference energy", e_ref)?;
    let target = pulses.duration();
    let energy_at = |d: f64| -> Result<f64> { Ok(energy::protocol_energy(pulses, &family.build(d, target)?).drive_part) };
    let duration = match family {
        ScalingFamily::Polynomial => {
            let f = |d: f64| energy_at(d).map(|e| e - e_ref).unwrap_or(f64::NAN);
            let brackets = [(0.5, 3.0), (0.1, 10.0)];
            let mut found = None;
            for (lo, hi) in brackets {
                if let Ok(d) = bisect(f, lo * target, hi * target, 1e-10) {
                    found = Some(d);
                    break;
                }
            }
            found.ok_or_else(|| Error::NoSolution(format!("no duration in [0.1T, 10T] gives energy {e_ref}")))?
        }
        _ => {
            let d = target * energy_at(target)? / e_ref;
            if !(0.1 * target..=10.0 * target).contains(&d) {
                return Err(Error::NoSolution(format!("matched duration {d} outside [0.1T, 10T]")));
            }
            d
        }
    };
    Ok((duration, family.build(duration, target)?))
}
