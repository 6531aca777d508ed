//! Canned computations: the cold-neutron interference filter and the
//! thick-barrier (Hartman) sweeps.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Result, TunnelError};
use crate::kinematics::BarrierSystem;
use crate::phase_time::{
    average_phase_time, phase_time, phase_time_at_resonance, phase_time_opaque,
};
use crate::resonance::{find_resonances_with, fit_effective_mass, Resonance, ScanOptions};
use crate::transmission::amplitude;

/// Geometry of the neutron filter: two 300 Å, 230 neV barriers 195 Å apart.
pub mod neutron_filter {
    pub const BARRIER_WIDTH_ANGSTROM: f64 = 300.0;
    pub const BARRIER_HEIGHT_NEV: f64 = 230.0;
    pub const GAP_ANGSTROM: f64 = 195.0;
    /// Measured resonance energy the effective mass is fitted to.
    pub const TARGET_RESONANCE_NEV: f64 = 127.0;
    /// Resonance search window.
    pub const WINDOW_NEV: (f64, f64) = (1.0, 229.0);
    /// Mass bracket for the fit, in units of the free neutron mass.
    pub const MASS_BRACKET: (f64, f64) = (0.5, 2.0);

    pub const MEASURED_DELAY_S: f64 = 2.17e-7;
    pub const MEASURED_DELAY_UNCERTAINTY_S: f64 = 0.2e-7;
    pub const MEASURED_OFF_RESONANCE_S: f64 = 1.9e-8;
    pub const MEASURED_HALF_WIDTH_NEV: f64 = 4.0;
}

/// The neutron filter with mass `mass_ratio·m₀`.
pub fn neutron_system(constants: &PhysicalConstants, mass_ratio: f64) -> Result<BarrierSystem> {
    use neutron_filter::*;
    constants.validate()?;
    BarrierSystem::new(
        constants.angstrom_to_metre(BARRIER_WIDTH_ANGSTROM),
        constants.nev_to_joule(BARRIER_HEIGHT_NEV),
        constants.angstrom_to_metre(GAP_ANGSTROM),
        mass_ratio * constants.m_neutron,
    )?
    .with_hbar(constants.hbar)
}

/// Measured values quoted for comparison only; never used as targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredValues {
    pub tau_r_s: f64,
    pub tau_r_uncertainty_s: f64,
    pub off_resonance_s: f64,
    #[serde(rename = "half_width_neV")]
    pub half_width_nev: f64,
}

impl Default for MeasuredValues {
    fn default() -> Self {
        MeasuredValues {
            tau_r_s: neutron_filter::MEASURED_DELAY_S,
            tau_r_uncertainty_s: neutron_filter::MEASURED_DELAY_UNCERTAINTY_S,
            off_resonance_s: neutron_filter::MEASURED_OFF_RESONANCE_S,
            half_width_nev: neutron_filter::MEASURED_HALF_WIDTH_NEV,
        }
    }
}

/// Energies in neV, times in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutronReport {
    #[serde(rename = "E_r_free_mass")]
    pub e_r_free_mass: f64,
    pub fitted_mass_ratio: f64,
    pub beta: f64,
    pub tau_r: f64,
    pub tau_avg: f64,
    pub annotations: MeasuredValues,
}

pub fn run_neutron_scenario(constants: &PhysicalConstants) -> Result<NeutronReport> {
    run_neutron_scenario_with(constants, &ScanOptions::default())
}

pub fn run_neutron_scenario_with(
    constants: &PhysicalConstants,
    scan: &ScanOptions,
) -> Result<NeutronReport> {
    use neutron_filter::*;
    let window = (
        constants.nev_to_joule(WINDOW_NEV.0),
        constants.nev_to_joule(WINDOW_NEV.1),
    );
    let first = |sys: &BarrierSystem| -> Result<Resonance> {
        find_resonances_with(sys, window.0, window.1, scan)?
            .into_iter()
            .next()
            .ok_or_else(|| TunnelError::Domain("neutron filter shows no resonance".into()))
    };

    let free = neutron_system(constants, 1.0)?;
    let free_res = first(&free)?;

    let m0 = constants.m_neutron;
    let target = constants.nev_to_joule(TARGET_RESONANCE_NEV);
    let mass = fit_effective_mass(&free, target, (MASS_BRACKET.0 * m0, MASS_BRACKET.1 * m0))?;
    let fitted = free.with_mass(mass)?;
    let res = first(&fitted)?;

    let tau_r = phase_time_at_resonance(&fitted, &res)?;
    let tau_avg = average_phase_time(&fitted, res.energy - res.beta, res.energy + res.beta)?;

    Ok(NeutronReport {
        e_r_free_mass: constants.joule_to_nev(free_res.energy),
        fitted_mass_ratio: mass / m0,
        beta: constants.joule_to_nev(res.beta),
        tau_r,
        tau_avg,
        annotations: MeasuredValues::default(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    BarrierWidth,
    GapLength,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Swept length, metres.
    pub sweep_value: f64,
    pub probability: f64,
    pub tau_exact: f64,
    /// `None` when the thick-barrier bracket is degenerate.
    pub tau_asymptotic: Option<f64>,
    /// `τ − 2m/(ħkq)`, seconds.
    pub excess: f64,
    /// `|A_T|² ≥ 1/2` (within a half-width of a resonance) or no asymptotic value.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub energy: f64,
    pub rows: Vec<SweepRow>,
}

/// One sweep row in boundary units (Å, seconds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub sweep_value_angstrom: f64,
    pub probability: f64,
    pub tau_exact_s: f64,
    pub tau_asymptotic_s: Option<f64>,
    pub excess_s: f64,
    pub flagged: bool,
}

impl SweepTable {
    pub fn records(&self, constants: &PhysicalConstants) -> Vec<SweepRecord> {
        self.rows
            .iter()
            .map(|r| SweepRecord {
                sweep_value_angstrom: constants.metre_to_angstrom(r.sweep_value),
                probability: r.probability,
                tau_exact_s: r.tau_exact,
                tau_asymptotic_s: r.tau_asymptotic,
                excess_s: r.excess,
                flagged: r.flagged,
            })
            .collect()
    }
}

/// Exact and thick-barrier quantities at fixed `energy` while one length
/// of `sys` runs through `values` (metres, positive, ascending).
pub fn hartman_sweep(
    sys: &BarrierSystem,
    energy: f64,
    axis: SweepAxis,
    values: &[f64],
) -> Result<SweepTable> {
    sys.check_energy(energy)?;
    if values.iter().any(|v| !(*v > 0.0)) || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TunnelError::Domain(
            "sweep values must be positive and strictly ascending".into(),
        ));
    }
    let rows = values
        .iter()
        .map(|&value| {
            let swept = match axis {
                SweepAxis::BarrierWidth => sys.with_a(value)?,
                SweepAxis::GapLength => sys.with_l(value)?,
            };
            let probability = amplitude(&swept, energy)?.probability;
            let exact = phase_time(&swept, energy)?;
            let tau_asymptotic = match phase_time_opaque(&swept, energy) {
                Ok(t) => Some(t),
                Err(TunnelError::NearResonance { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepRow {
                sweep_value: value,
                probability,
                tau_exact: exact.total,
                tau_asymptotic,
                excess: exact.excess,
                flagged: probability >= 0.5 || tau_asymptotic.is_none(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { axis, energy, rows })
}
