//! The two driven protocols and the effective-spin tools behind the
//! dissipation correction.

pub mod faquad;
pub mod spin;
pub mod stirap;

pub use faquad::{faquad_schedule, FaquadParams, FaquadSchedule};
pub use spin::{correction_field, effective_field, spin_map, spin_vector, DissipationTensor, Vec3};
pub use stirap::{corrections_for, stirap_angles, stirap_corrections, stirap_pulses, AngularTrajectory, StirapParams, StirapProtocol};
