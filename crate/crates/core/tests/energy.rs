use std::f64::consts::PI;

use proptest::prelude::*;
use qscale::energy::{correction_overhead, optimal_scaling, protocol_energy};
use qscale::protocols::{DissipationTensor, StirapParams, StirapProtocol};
use qscale::{PulseKind, PulseSet, ScalingFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn stirap() -> StirapProtocol {
    StirapProtocol::new(StirapParams::default()).unwrap()
}

#[test]
fn constant_drive_energy() {
    let pulses = PulseSet::new(PulseKind::Stirap, 2.0, |_| 3.0, |_| 0.0);
    let e = protocol_energy(&pulses, &ScalingFunction::identity(2.0));
    assert!((e.drive_part - 18.0).abs() < 1e-10);
    assert!((e.field_energy - 4.5).abs() < 1e-10);
}

#[test]
fn uniform_stretch_divides_the_energy() {
    let p = stirap();
    let e0 = protocol_energy(&p.drive, &ScalingFunction::identity(1.0)).drive_part;
    for d in [0.5, 2.0, 3.7] {
        let e = protocol_energy(&p.drive, &ScalingFunction::uniform(d, 1.0).unwrap()).drive_part;
        assert!((e * d - e0).abs() / e0 < 1e-9);
    }
}

#[test]
fn optimal_energy_is_four_c_squared_t() {
    let p = stirap();
    for d in [0.8, 1.0, 1.5] {
        let (s, c) = optimal_scaling(&p.angles, d).unwrap();
        let e = protocol_energy(&p.drive, &s).drive_part;
        assert!((e - 4.0 * c * c * d).abs() / e < 1e-6, "{e} vs {}", 4.0 * c * c * d);
        for i in 1..50 {
            let t = d * i as f64 / 50.0;
            let (l, ld) = s.sample(t);
            let (a, b) = p.drive.drive_at(l);
            assert!((ld * (a * a + b * b).sqrt() - 2.0 * c).abs() < 1e-6 * c);
        }
    }
}

#[test]
fn optimal_speed_peaks_at_the_endpoints() {
    let p = stirap();
    let (s, _) = optimal_scaling(&p.angles, 1.0).unwrap();
    let interior = (1..1000).map(|i| s.lambda_dot(i as f64 / 1000.0)).fold(0.0, f64::max);
    assert!(s.lambda_dot(0.0) >= interior);
    assert!(s.lambda_dot(1.0) >= interior);
}

/// `Λ_opt ∘ u` with `u(t) = t + a sin(ωt)/ω`, `ω = kπ/T_dur`, which is monotone
/// for `|a| < 1` and fixes both endpoints.
fn perturbed(opt: &ScalingFunction, rng: &mut ChaCha8Rng) -> ScalingFunction {
    let d = opt.duration();
    let w = rng.random_range(1..5) as f64 * PI / d;
    let a = rng.random_range(-0.9..0.9);
    let inner = opt.clone();
    ScalingFunction::from_fn(d, opt.target(), "perturbed", move |t| {
        let u = (t + a * (w * t).sin() / w).clamp(0.0, d);
        (inner.lambda(u), inner.sample(u).1 * (1.0 + a * (w * t).cos()))
    })
    .unwrap()
}

#[test]
fn optimal_beats_random_perturbations() {
    let p = stirap();
    let (opt, _) = optimal_scaling(&p.angles, 1.0).unwrap();
    let e_opt = protocol_energy(&p.drive, &opt).drive_part;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let s = perturbed(&opt, &mut rng);
        let e = protocol_energy(&p.drive, &s).drive_part;
        assert!(e >= e_opt * (1.0 - 1e-6), "{e} < {e_opt}");
    }
    let e0 = protocol_energy(&p.drive, &ScalingFunction::identity(1.0)).drive_part;
    let poly = protocol_energy(&p.drive, &ScalingFunction::polynomial(1.0, 1.0).unwrap()).drive_part;
    assert!(e_opt < e0 && e_opt < poly);
}

#[test]
fn energy_is_invariant_under_intermediate_reparametrization() {
    let p = stirap();
    let s = ScalingFunction::polynomial(1.3, 1.0).unwrap();
    let direct = protocol_energy(&p.drive, &s).drive_part;

    let mu = ScalingFunction::from_fn(1.0, 1.0, "mu", |x| (x + 0.3 * (2.0 * PI * x).sin() / (2.0 * PI), 1.0 + 0.3 * (2.0 * PI * x).cos()))
        .unwrap();
    let inner = p.drive.rescaled(&mu);
    let (mu2, s2) = (mu.clone(), s.clone());
    let outer = ScalingFunction::from_fn(1.3, 1.0, "outer", move |t| {
        let x = mu2.inverse(s2.lambda(t));
        (x, s2.lambda_dot(t) / mu2.lambda_dot(x))
    })
    .unwrap();
    let composed = protocol_energy(&inner, &outer).drive_part;
    assert!((composed - direct).abs() / direct < 1e-6, "{composed} vs {direct}");
}

#[test]
fn overhead_is_quadratic_in_the_rate() {
    let p = stirap();
    assert_eq!(correction_overhead(&p.angles, DissipationTensor::transverse(0.0)).unwrap(), 0.0);
    let a = correction_overhead(&p.angles, DissipationTensor::transverse(0.01)).unwrap();
    let b = correction_overhead(&p.angles, DissipationTensor::transverse(0.02)).unwrap();
    assert!((b / a - 4.0).abs() < 0.04, "{}", b / a);
    assert!(correction_overhead(&p.angles, DissipationTensor { transverse: -1.0, in_plane: 0.0 }).is_err());
}

#[test]
fn correction_energy_is_accounted_separately() {
    let p = stirap();
    let e = protocol_energy(&p.pulses(), &ScalingFunction::identity(1.0));
    assert!(e.correction_part > 0.0);
    assert!((e.total - (e.drive_part + e.correction_part + e.cross_term)).abs() < 1e-12 * e.total);
    assert!((e.field_energy - 0.25 * e.total).abs() < 1e-12 * e.total);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn optimal_energy_scales_inversely_with_duration(d in 0.3f64..4.0) {
        let p = stirap();
        let e1 = protocol_energy(&p.drive, &optimal_scaling(&p.angles, 1.0).unwrap().0).drive_part;
        let ed = protocol_energy(&p.drive, &optimal_scaling(&p.angles, d).unwrap().0).drive_part;
        prop_assert!((ed * d - e1).abs() / e1 < 1e-6);
    }
}
