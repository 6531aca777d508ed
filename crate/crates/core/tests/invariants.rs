mod common;

use std::f64::consts::PI;

use common::*;
use tunnelkit::constants::NEUTRON_MASS;
use tunnelkit::{
    average_phase_time, find_resonances, hartman_sweep, kinematics, neutron_system, phase_time,
    phase_time_at_resonance, phase_time_numeric, phase_time_opaque_terms, run_neutron_scenario,
    BarrierSystem, PhysicalConstants, Resonance, SweepAxis,
};

fn neutron() -> BarrierSystem {
    BarrierSystem::new(300e-10, 230.0 * NEV, 195e-10, NEUTRON_MASS).unwrap()
}

fn fitted() -> (BarrierSystem, Resonance) {
    let c = PhysicalConstants::CODATA_2018;
    let report = run_neutron_scenario(&c).unwrap();
    let sys = neutron_system(&c, report.fitted_mass_ratio).unwrap();
    let res = find_resonances(&sys, NEV, 229.0 * NEV).unwrap()[0];
    (sys, res)
}

#[test]
fn analytic_and_numeric_phase_time_agree_on_dense_grid() {
    for sys in [neutron(), fitted().0] {
        let res = find_resonances(&sys, NEV, 229.0 * NEV).unwrap();
        for i in 0..400 {
            let e = sys.u0 * (0.01 + 0.98 * i as f64 / 399.0);
            if res.iter().any(|r| (e - r.energy).abs() < 0.1 * r.beta) {
                continue;
            }
            let exact = phase_time(&sys, e).unwrap().total;
            let numeric = phase_time_numeric(&sys, e, 1e-6).unwrap();
            assert!(rel(exact, numeric) < 1e-6, "E = {e:e}");
        }
    }
}

#[test]
fn resonance_delay_exceeds_free_flight() {
    let (sys, res) = fitted();
    let tau_r = phase_time_at_resonance(&sys, &res).unwrap();
    assert!(tau_r - sys.time_per_length(res.k) * sys.l > 0.0);
    assert!(rel(tau_r, phase_time(&sys, res.energy).unwrap().total) < 1e-9);
}

#[test]
fn average_lies_between_extremes() {
    let (sys, res) = fitted();
    let (lo, hi) = (res.energy - res.beta, res.energy + res.beta);
    let mean = average_phase_time(&sys, lo, hi).unwrap();
    let samples: Vec<f64> = (0..=200)
        .map(|i| {
            phase_time(&sys, lo + (hi - lo) * i as f64 / 200.0)
                .unwrap()
                .total
        })
        .collect();
    let min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = samples.iter().cloned().fold(0.0, f64::max);
    assert!(min <= mean && mean <= max);
}

#[test]
fn narrow_average_tends_to_peak() {
    let (sys, res) = fitted();
    let half = res.beta / 200.0;
    let mean = average_phase_time(&sys, res.energy - half, res.energy + half).unwrap();
    let tau_r = phase_time_at_resonance(&sys, &res).unwrap();
    assert!(rel(mean, tau_r) < 1e-3);
}

/// In the opaque regime the exact excess over the plateau is a linear
/// drift in `L` plus a part periodic with period `π/k`: shifting the gap by
/// `π/k` adds exactly `(m/ħk)(1 + 2w)(π/k)/|D|²`.
#[test]
fn exact_excess_shift_by_half_wavelength() {
    let base = neutron();
    for e_nev in [30.0, 90.0, 160.0] {
        let e = e_nev * NEV;
        let kin = kinematics(&base, e).unwrap();
        let sys = base.with_a(20.0 / kin.q).unwrap();
        let shifted = sys.with_l(sys.l + PI / kin.k).unwrap();
        let b1 = phase_time(&sys, e).unwrap();
        let b2 = phase_time(&shifted, e).unwrap();
        let hs = tunnelkit::hyperbolic_state(&kin, sys.a);
        let drift = sys.time_per_length(kin.k) * hs.one() * (hs.one() + 2.0 * hs.w) * (PI / kin.k)
            / b1.mod_squared_scaled;
        assert!(rel(b2.excess - b1.excess, drift) < 1e-9, "{e_nev} neV");
        assert!(rel(b1.mod_squared_scaled, b2.mod_squared_scaled) < 1e-9);
    }
}

/// The thick-barrier correction is positive, proportional to `L` for a
/// fixed phase `2kL mod 2π` and periodic in between.
#[test]
fn opaque_correction_shape() {
    let base = neutron();
    let e = 90.0 * NEV;
    let kin = kinematics(&base, e).unwrap();
    let sys = base.with_a(20.0 / kin.q).unwrap();
    let period = PI / kin.k;
    let (_, c0) = phase_time_opaque_terms(&sys, e).unwrap();
    let (_, c1) = phase_time_opaque_terms(&sys.with_l(sys.l + period).unwrap(), e).unwrap();
    assert!(c0 > 0.0 && c1 > 0.0);
    assert!(rel(c1 / (sys.l + period), c0 / sys.l) < 1e-9);
    for i in 1..50 {
        let l = sys.l + period * i as f64 / 50.0;
        if let Ok((_, c)) = phase_time_opaque_terms(&sys.with_l(l).unwrap(), e) {
            assert!(c > 0.0);
        }
    }
}

#[test]
fn plateau_approached_with_growing_width() {
    let sys = neutron();
    let e = 60.0 * NEV;
    let q = kinematics(&sys, e).unwrap().q;
    let widths: Vec<f64> = (2..=30).map(|i| i as f64 / q).collect();
    let table = hartman_sweep(&sys, e, SweepAxis::BarrierWidth, &widths).unwrap();
    let last = table.rows.last().unwrap();
    let limit = last.tau_exact - last.excess;
    assert!(rel(last.tau_exact, limit) < 1e-12);
    // τ(qa = 2) is far from the plateau, τ(qa ≥ 15) sits on it.
    assert!(rel(table.rows[0].tau_exact, limit) > 1e-3);
    for row in table.rows.iter().filter(|r| r.sweep_value * q >= 15.0) {
        assert!(rel(row.tau_exact, limit) < 1e-5);
        assert!(!row.flagged);
    }
}
