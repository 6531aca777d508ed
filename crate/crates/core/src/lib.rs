//! Resonant and non-resonant tunneling through two equal rectangular
//! barriers: transmission, resonance energies and Breit-Wigner widths,
//! Wigner phase-times and their thick-barrier asymptotics, with an
//! independent transfer-matrix solver for cross-checks.
//!
//! All quantities are SI. [`PhysicalConstants`] converts to and from
//! ångström and neV.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod kinematics;
pub mod phase_time;
pub mod quadrature;
pub mod resonance;
pub mod roots;
pub mod scatter_oracle;
pub mod scenarios;
pub mod transmission;

pub use constants::PhysicalConstants;
pub use error::{Result, TunnelError};
pub use kinematics::{
    hyperbolic_state, kinematics, kinematics_at_wavenumber, BarrierSystem, HyperbolicState,
    Kinematics,
};
pub use phase_time::{
    average_phase_time, phase_time, phase_time_at_resonance, phase_time_numeric, phase_time_opaque,
    phase_time_opaque_terms, wigner_time, PhaseTimeBreakdown,
};
pub use resonance::{
    breit_wigner_width, bw_phase_time, bw_probability, find_resonances, find_resonances_with,
    fit_effective_mass, resonance_expansion, resonance_residual, Resonance, ResonanceExpansion,
    ScanOptions,
};
pub use scatter_oracle::{
    double_barrier_profile, solve, PotentialProfile, ScatterSolution, Segment, TransferMatrix,
};
pub use scenarios::{
    hartman_sweep, neutron_system, run_neutron_scenario, run_neutron_scenario_with, NeutronReport,
    SweepAxis, SweepRecord, SweepRow, SweepTable,
};
pub use transmission::{
    amplitude, denominator, probability, probability_opaque, DenominatorParts, TransmissionResult,
};

pub use num_complex::Complex64;
