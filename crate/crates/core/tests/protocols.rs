use std::f64::consts::FRAC_PI_4;

use proptest::prelude::*;
use qscale::protocols::spin::{cross, DissipationTensor};
use qscale::protocols::stirap::INTERMEDIATE;
use qscale::protocols::{
    corrections_for, faquad_schedule, spin_map, spin_vector, stirap_angles, FaquadParams, StirapParams, StirapProtocol,
};
use qscale::state::real_diagonal;
use qscale::{evolve, observables, uniform_grid, Error, PulseKind, PulseSet, Trajectory};

fn stirap_run(p: &StirapProtocol, pulses: &PulseSet) -> Trajectory {
    let gen = pulses.generator(real_diagonal(&[0.0, p.params.gamma2, 0.0]), "stirap").unwrap();
    evolve(&gen, &p.initial_state(), &uniform_grid(p.params.duration, 20_000)).unwrap()
}

/// Worst `1 − |⟨ψ̃(t)|ψ₀(t)⟩|²` along the run.
fn trajectory_infidelity(p: &StirapProtocol, traj: &Trajectory) -> f64 {
    traj.states()
        .iter()
        .map(|s| {
            let o = s.renormalized().unwrap().overlap(&p.angles.state(s.time())).unwrap();
            1.0 - o.norm_sqr()
        })
        .fold(0.0, f64::max)
}

#[test]
fn faquad_boundary_conditions() {
    let s = faquad_schedule(FaquadParams::default()).unwrap();
    assert!((s.theta(0.0).cos() - 0.99).abs() < 1e-15);
    assert!((s.theta(1.0).cos() + 0.99).abs() < 1e-15);
    assert!((s.theta(0.5) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!(s.detuning(0.5).abs() < 1e-12);
    assert!(matches!(faquad_schedule(FaquadParams { epsilon: 0.0, ..Default::default() }), Err(Error::SingularDetuning)));
}

#[test]
fn faquad_adiabaticity_is_constant() {
    let s = faquad_schedule(FaquadParams::default()).unwrap();
    let c = s.adiabaticity_constant();
    assert!((c - 0.0495).abs() < 1e-15);
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        let h = s.generator.h0(t);
        let gap = 2.0 * (h[(0, 0)].re.powi(2) + h[(0, 1)].re.powi(2)).sqrt();
        let quotient = 0.5 * s.theta_dot(t) / gap;
        assert!((quotient - c).abs() < 1e-9 * c, "t = {t}: {quotient}");
    }
}

#[test]
fn faquad_damping_rate_matches_the_eigenvector() {
    let s = faquad_schedule(FaquadParams::default()).unwrap();
    for i in 0..=20 {
        let t = i as f64 / 20.0;
        let half = 0.5 * s.theta(t);
        let (pe, pg) = (half.cos().powi(2), half.sin().powi(2));
        let direct = pe * s.params.gamma_e + pg * s.params.gamma_g;
        assert!((direct - s.damping_rate(t)).abs() < 1e-15);
        assert!((s.profile.rate(t) - direct).abs() < 1e-15);
    }
}

#[test]
fn stirap_without_damping_reaches_the_target() {
    let p = StirapProtocol::new(StirapParams { gamma2: 0.0, ..Default::default() }).unwrap();
    let traj = stirap_run(&p, &p.pulses());
    let obs = observables(&traj, p.target_level()).unwrap();
    assert!((obs.final_purity() - 0.998).abs() < 0.001, "{}", obs.final_purity());
    assert!((obs.final_norm() - 1.0).abs() < 1e-9);
}

#[test]
fn intermediate_population_follows_the_mixing_angle() {
    let p = StirapProtocol::new(StirapParams { gamma2: 0.0, ..Default::default() }).unwrap();
    let traj = stirap_run(&p, &p.pulses());
    let obs = observables(&traj, p.target_level()).unwrap();
    let pop = &obs.populations[INTERMEDIATE];
    for (i, &t) in obs.grid.iter().enumerate().step_by(250) {
        assert!((pop[i] - p.angles.gamma(t).sin().powi(2)).abs() < 1e-6, "t = {t}");
    }
    let peak = (0..pop.len()).max_by(|&a, &b| pop[a].total_cmp(&pop[b])).unwrap();
    assert!((obs.grid[peak] - 0.5).abs() < 1e-3);
    assert!((pop[peak] - FRAC_PI_4.sin().powi(2)).abs() < 1e-6);
}

#[test]
fn correction_restores_purity_and_trajectory() {
    let free = StirapProtocol::new(StirapParams { gamma2: 0.0, ..Default::default() }).unwrap();
    let reference = observables(&stirap_run(&free, &free.pulses()), 2).unwrap().final_purity();

    let p = StirapProtocol::new(StirapParams::default()).unwrap();
    let traj = stirap_run(&p, &p.pulses());
    let obs = observables(&traj, 2).unwrap();
    assert!((obs.final_purity() - reference).abs() < 5e-4, "{} vs {reference}", obs.final_purity());
    assert!(obs.final_norm() < 1.0);
    assert!(trajectory_infidelity(&p, &traj) < 1e-4);
}

#[test]
fn opposite_correction_sign_leaves_the_trajectory() {
    let p = StirapProtocol::new(StirapParams { gamma2: 1.0, ..Default::default() }).unwrap();
    let good = trajectory_infidelity(&p, &stirap_run(&p, &p.pulses()));
    let (c1, c2) = (p.corrections.clone(), p.corrections.clone());
    let flipped = PulseSet::correction_only(PulseKind::Stirap, 1.0, move |t| -c1.correction_at(t).0, move |t| -c2.correction_at(t).1);
    let bad = trajectory_infidelity(&p, &stirap_run(&p, &p.drive.with_correction_from(&flipped).unwrap()));
    let none = StirapProtocol::with_corrections(p.params, false).unwrap();
    let uncorrected = trajectory_infidelity(&none, &stirap_run(&none, &none.pulses()));
    assert!(good < 1e-4, "{good}");
    assert!(bad > 2.0 * uncorrected && bad > 1e3 * good, "flipped {bad}, none {uncorrected}");
}

#[test]
fn spin_map_round_trips_along_the_path() {
    let a = stirap_angles(&StirapParams::default()).unwrap();
    for i in 0..=40 {
        let t = i as f64 / 40.0;
        let s = spin_map(&a.state(t)).unwrap();
        let want = a.spin(t);
        for k in 0..3 {
            assert!((s[k] - want[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn spin_obeys_the_damped_bloch_equation() {
    let p = StirapProtocol::new(StirapParams { gamma2: 0.5, ..Default::default() }).unwrap();
    let pulses = p.pulses();
    let traj = stirap_run(&p, &pulses);
    let tensor = DissipationTensor::transverse(p.params.gamma2);
    let spins: Vec<_> = traj.states().iter().map(|s| spin_vector(s).unwrap()).collect();
    let grid = traj.grid();
    let mut worst: f64 = 0.0;
    for i in (1..grid.len() - 1).step_by(50) {
        let dt = grid[i + 1] - grid[i - 1];
        let (op, os) = pulses.total_at(grid[i]);
        let b = [0.5 * op, 0.0, 0.5 * os];
        let rhs = cross(b, spins[i]);
        let damp = tensor.apply(spins[i]);
        for k in 0..3 {
            let fd = (spins[i + 1][k] - spins[i - 1][k]) / dt;
            worst = worst.max((fd - (rhs[k] - damp[k])).abs());
        }
    }
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn in_plane_damping_only_enters_through_the_difference() {
    let a = stirap_angles(&StirapParams::default()).unwrap();
    let x = corrections_for(&a, DissipationTensor { transverse: 0.3, in_plane: 0.1 });
    let y = corrections_for(&a, DissipationTensor::transverse(0.2));
    for i in 0..=20 {
        let t = i as f64 / 20.0;
        let (p, q) = (x.correction_at(t), y.correction_at(t));
        assert!((p.0 - q.0).abs() < 1e-15 && (p.1 - q.1).abs() < 1e-15);
    }
}

#[test]
fn off_manifold_states_are_rejected() {
    let psi = qscale::QuantumState::new(
        vec![num_complex::Complex64::new(0.6, 0.0), num_complex::Complex64::new(0.48, 0.0), num_complex::Complex64::new(-0.64, 0.0)],
        0.0,
    )
    .unwrap();
    assert!(matches!(spin_map(&psi), Err(Error::OffManifold { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn angle_boundary_conditions_hold(eps in 0.01f64..0.3, extra in 0.05f64..1.0, duration in 0.3f64..3.0) {
        let delta = eps + extra;
        prop_assume!(delta < 1.5);
        let params = StirapParams { epsilon: eps, delta_peak: delta, duration, gamma2: 0.1 };
        let a = stirap_angles(&params).unwrap();
        prop_assert!(a.beta(0.0).abs() < 1e-12);
        prop_assert!((a.beta(duration) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        prop_assert!((a.gamma(0.0) - eps).abs() < 1e-12);
        prop_assert!((a.gamma(duration) - eps).abs() < 1e-12);
        prop_assert!((a.gamma(0.5 * duration) - delta).abs() < 1e-12);
        prop_assert!(a.beta_dot(0.0).abs() < 1e-9 && a.beta_dot(duration).abs() < 1e-9);
    }
}
