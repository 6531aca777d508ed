#![allow(dead_code)]

use proptest::prelude::*;
use tunnelkit::constants::{JOULE_PER_NEV, NEUTRON_MASS};
use tunnelkit::scatter_oracle::{solve, PotentialProfile, Segment};
use tunnelkit::{find_resonances, hyperbolic_state, kinematics, probability, BarrierSystem};

pub const NEV: f64 = JOULE_PER_NEV;
pub const IDENTITY_CASES: u32 = 10_000;
/// Each case scans 2000 cells and bisects every root.
pub const RESONANCE_CASES: u32 = 500;

pub const SIGMA_TOL: f64 = 1e-12;
pub const MODULUS_TOL: f64 = 1e-10;
pub const DERIVATIVE_TOL: f64 = 1e-8;
pub const SECOND_ORDER_TOL: f64 = 1e-8;
pub const CERTIFY_TOL: f64 = 1e-9;
pub const UNITARITY_TOL: f64 = 1e-10;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// `|lhs − rhs|` relative to the largest individual term.
pub fn rel_to(lhs: f64, rhs: f64, terms: &[f64]) -> f64 {
    let scale = terms
        .iter()
        .fold(lhs.abs().max(rhs.abs()), |m, t| m.max(t.abs()));
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// Barrier height 1–1000 neV, energy anywhere below it, `qa` up to 700
/// (exercising the scaled representation), gap up to 2000 Å, mass 0.1–10 m₀.
pub fn valid_state() -> impl Strategy<Value = (BarrierSystem, f64)> {
    (
        1.0..1000.0f64,
        1e-3..0.999f64,
        1e-3..700.0f64,
        0.0..2000.0f64,
        0.1..10.0f64,
    )
        .prop_map(|(u0_nev, frac, qa, l_ang, mass_ratio)| {
            let u0 = u0_nev * NEV;
            let probe =
                BarrierSystem::new(1e-9, u0, l_ang * 1e-10, mass_ratio * NEUTRON_MASS).unwrap();
            let e = frac * u0;
            let q = kinematics(&probe, e).unwrap().q;
            (probe.with_a(qa / q).unwrap(), e)
        })
}

pub fn check_sigma(sys: &BarrierSystem, e: f64) -> Result<(), String> {
    let kin = kinematics(sys, e).map_err(|x| x.to_string())?;
    let s2 = kin.sigma * kin.sigma;
    let d2 = kin.delta * kin.delta + 4.0;
    let err = (s2 - d2).abs() / s2;
    (err < SIGMA_TOL)
        .then_some(())
        .ok_or(format!("σ² = {s2}, δ² + 4 = {d2}"))
}

pub fn check_modulus(sys: &BarrierSystem, e: f64) -> Result<(), String> {
    let hs = hyperbolic_state(&kinematics(sys, e).map_err(|x| x.to_string())?, sys.a);
    let lhs = hs.u * hs.u + hs.v * hs.v;
    let rhs = (hs.one() + hs.w).powi(2);
    (rel_to(lhs, rhs, &[]) < MODULUS_TOL)
        .then_some(())
        .ok_or(format!("u² + v² = {lhs}, (1 + w)² = {rhs}"))
}

/// Relative to the larger of `uu′`, `vv′` since the sum may cancel.
pub fn check_derivative(sys: &BarrierSystem, e: f64) -> Result<(), String> {
    let hs = hyperbolic_state(&kinematics(sys, e).map_err(|x| x.to_string())?, sys.a);
    let (uu, vv) = (hs.u * hs.du, hs.v * hs.dv);
    let lhs = uu + vv;
    let rhs = (hs.one() + hs.w) * hs.dw;
    (rel_to(lhs, rhs, &[uu, vv]) < DERIVATIVE_TOL)
        .then_some(())
        .ok_or(format!("uu′ + vv′ = {lhs}, (1 + w)w′ = {rhs}"))
}

pub fn check_second_order(sys: &BarrierSystem, e: f64) -> Result<(), String> {
    let hs = hyperbolic_state(&kinematics(sys, e).map_err(|x| x.to_string())?, sys.a);
    let (du2, dv2, dw2) = (hs.du * hs.du, hs.dv * hs.dv, hs.dw * hs.dw);
    let lhs = du2 + dv2 - dw2;
    let rhs = (hs.du * hs.v - hs.u * hs.dv).powi(2) / (hs.one() + hs.w).powi(2);
    (rel_to(lhs, rhs, &[du2, dv2, dw2]) < SECOND_ORDER_TOL)
        .then_some(())
        .ok_or(format!(
            "u′² + v′² − w′² = {lhs}, (u′v − uv′)²/(1 + w)² = {rhs}"
        ))
}

/// Up to seven layers 1–500 Å wide and −200..400 neV high, at 0.5–500 neV.
pub fn layered_profile() -> impl Strategy<Value = (PotentialProfile, f64)> {
    (
        prop::collection::vec((1.0..500.0f64, -200.0..400.0f64), 1..8),
        0.5..500.0f64,
    )
        .prop_filter_map("energy on a layer height", |(layers, e_nev)| {
            let e = e_nev * NEV;
            let segments: Vec<Segment> = layers
                .iter()
                .map(|&(w, h)| Segment {
                    width: w * 1e-10,
                    height: h * NEV,
                })
                .collect();
            if segments.iter().any(|s| (s.height - e).abs() <= 1e-9 * e) {
                return None;
            }
            Some((PotentialProfile::new(segments, NEUTRON_MASS).unwrap(), e))
        })
}

pub fn check_unitarity(profile: &PotentialProfile, e: f64) -> Result<(), String> {
    let sol = solve(profile, e).map_err(|x| x.to_string())?;
    let flux = sol.t.norm_sqr() + sol.r.norm_sqr();
    ((flux - 1.0).abs() < UNITARITY_TOL)
        .then_some(())
        .ok_or(format!("|t|² + |r|² = {flux}"))
}

/// Systems whose resonances in `(0.05 U0, 0.95 U0)` are resolvable in
/// double precision: `qa < 6` at the bottom of the window keeps every width
/// many orders of magnitude above the root tolerance.
pub fn resonant_system() -> impl Strategy<Value = BarrierSystem> {
    (
        10.0..1000.0f64,
        20.0..400.0f64,
        50.0..3000.0f64,
        0.5..2.0f64,
    )
        .prop_filter_map(
            "barrier too opaque",
            |(u0_nev, a_ang, l_ang, mass_ratio)| {
                let sys = BarrierSystem::new(
                    a_ang * 1e-10,
                    u0_nev * NEV,
                    l_ang * 1e-10,
                    mass_ratio * NEUTRON_MASS,
                )
                .unwrap();
                let q_max = kinematics(&sys, 0.05 * sys.u0).unwrap().q;
                (q_max * sys.a < 6.0).then_some(sys)
            },
        )
}

/// Returns the number of resonances checked.
pub fn check_certified(sys: &BarrierSystem) -> Result<usize, String> {
    let found = find_resonances(sys, 0.05 * sys.u0, 0.95 * sys.u0).map_err(|x| x.to_string())?;
    for res in &found {
        let p = probability(sys, res.energy).map_err(|x| x.to_string())?;
        if (p - 1.0).abs() > CERTIFY_TOL || res.beta.is_nan() || res.beta <= 0.0 {
            return Err(format!(
                "|A_T|² = {p}, β = {:e} at {:e} J",
                res.beta, res.energy
            ));
        }
    }
    Ok(found.len())
}
