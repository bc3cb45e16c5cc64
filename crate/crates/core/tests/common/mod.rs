#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qscale::state::CMatrix;
use qscale::{Generator, QuantumState, ScalingFunction};
use rand::Rng;

fn hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.random_range(-scale..scale), 0.0);
        for j in i + 1..dim {
            let z = Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// `H₀(t) = A + B cos(ωt) + C sin(νt)` with random Hermitian `A, B, C`.
pub fn random_drive<R: Rng>(rng: &mut R, dim: usize) -> impl Fn(f64) -> CMatrix + Send + Sync + 'static {
    let (a, b, c) = (hermitian(rng, dim, 2.0), hermitian(rng, dim, 2.0), hermitian(rng, dim, 1.0));
    let (w, v) = (rng.random_range(0.5..6.0), rng.random_range(0.5..6.0));
    move |t: f64| &a + &b * Complex64::new((w * t).cos(), 0.0) + &c * Complex64::new((v * t).sin(), 0.0)
}

/// Random smooth `H₀(t)` and diagonal `Γ(t) ≥ 0`.
pub fn random_generator<R: Rng>(rng: &mut R, dim: usize) -> Generator {
    let h0 = random_drive(rng, dim);
    let rates: Vec<(f64, f64, f64)> =
        (0..dim).map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.0..0.9), rng.random_range(0.5..5.0))).collect();
    Generator::new(dim, "random", h0, move |t| {
        let d: Vec<f64> = rates.iter().map(|&(g, a, w)| g * (1.0 + a * (w * t).sin())).collect();
        qscale::state::real_diagonal(&d)
    })
    .unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> QuantumState {
    let amps: Vec<Complex64> = (0..dim).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    QuantumState::new(amps, 0.0).unwrap().renormalized().unwrap()
}

/// A random monotone map of `[0, duration]` onto `[0, target]`:
/// `Λ = T·(x + a sin(2πx)/2π)` with `x` itself either `t/T_dur` or a smoothstep.
pub fn random_scaling<R: Rng>(rng: &mut R, target: f64) -> ScalingFunction {
    let duration = rng.random_range(0.5..2.0) * target;
    let a = rng.random_range(-0.9..0.9);
    let smooth = rng.random_bool(0.5);
    ScalingFunction::from_fn(duration, target, "random", move |t| {
        let u = t / duration;
        let (x, xd) = if smooth { (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u) / duration) } else { (u, 1.0 / duration) };
        let l = target * (x + a * (2.0 * PI * x).sin() / (2.0 * PI));
        let ld = target * (1.0 + a * (2.0 * PI * x).cos()) * xd;
        (l, ld)
    })
    .unwrap()
}
