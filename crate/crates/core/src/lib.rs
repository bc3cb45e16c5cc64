//! Time scaling, dissipation corrections and quantum speed limits for
//! non-Hermitian two- and three-level systems.
//!
//! A protocol is a [`Generator`] `H(t) = H₀(t) − iΓ(t)` integrated with
//! fixed-step RK4 ([`evolve`]). A [`ScalingFunction`] `Λ` replaces it with
//! `Λ̇·H₀(Λ(t))`, which replays the unitary solution along `Λ` while letting
//! the damping act on a different clock.
//!
//! ```
//! use qscale::protocols::{faquad_schedule, FaquadParams};
//! use qscale::{evolve, observables, uniform_grid};
//!
//! let s = faquad_schedule(FaquadParams::default()).unwrap();
//! let traj = evolve(&s.generator, &s.initial_state(), &uniform_grid(1.0, 20_000)).unwrap();
//! let obs = observables(&traj, s.target_level()).unwrap();
//! assert!((obs.final_norm() - 0.90).abs() < 0.01);
//! ```

pub mod cli;
pub mod dynamics;
pub mod energy;
pub mod error;
pub mod generator;
pub mod numeric;
pub mod protocols;
pub mod pulses;
pub mod qsl;
pub mod state;
pub mod table;
pub mod timescale;

pub use dynamics::{evolve, expectation, observables, purity, uncertainty, uniform_grid, variance, ObservableSeries, Trajectory, DEFAULT_STEPS};
pub use energy::{correction_overhead, optimal_scaling, protocol_energy, EnergyReport};
pub use error::{Error, Result};
pub use generator::Generator;
pub use pulses::{PulseKind, PulseSet};
pub use qsl::{chi, corrected_chi, fidelity_decomposition, orthogonality_time, quantum_speed, QslTrace};
pub use state::QuantumState;
pub use table::Table;
pub use timescale::{apply_scaling, energy_matched_duration, quasi_unitary_scaling, DampingProfile, ScalingFamily, ScalingFunction};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/scaling.md")]
    mod scaling {}
    #[doc = include_str!("../../../book/src/faquad.md")]
    mod faquad {}
    #[doc = include_str!("../../../book/src/stirap.md")]
    mod stirap {}
    #[doc = include_str!("../../../book/src/energy.md")]
    mod energy {}
    #[doc = include_str!("../../../book/src/qsl.md")]
    mod qsl {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
