//! Complex denominator `D(k)`, transmission amplitude and probability.
//!
//! `D = u + w cos 2kL + i (v + w sin 2kL)` and `A_T = exp(−2ika)/D`, where
//! `A_T` multiplies the transmitted plane wave with the coordinate origin at
//! the left edge of the first barrier.
//!
//! The squared modulus `1 + 2w[1 + w + u cos 2kL + v sin 2kL]` cancels
//! catastrophically near a resonance (the bracket is a difference of
//! `O(w)` terms). It factors as
//! `1 + 4w [cosh(qa) cos kL + (δ/2) sinh(qa) sin kL]²`, which is what
//! `|A_T|²` is computed from.

use num_complex::Complex64;

use crate::error::{Result, TunnelError};
use crate::kinematics::{hyperbolic_state, kinematics, BarrierSystem, HyperbolicState, Kinematics};

/// Real and imaginary parts of `D` and its squared modulus.
///
/// `re`/`im` carry the factor `exp(−2qa)` of [`HyperbolicState`]; the two
/// squared moduli carry `exp(−4qa)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenominatorParts {
    pub re: f64,
    pub im: f64,
    /// `|D|²` from the factored form `1 + 4w g²`.
    pub mod_squared_scaled: f64,
    /// `|D|²` from `1 + 2w[1 + w + u cos 2kL + v sin 2kL]`.
    pub expanded_mod_squared_scaled: f64,
    /// `|D|²` as `re² + im²`.
    pub direct_mod_squared_scaled: f64,
    pub log_scale: f64,
}

impl DenominatorParts {
    pub fn d1(&self) -> f64 {
        self.re * self.log_scale.exp()
    }

    pub fn d2(&self) -> f64 {
        self.im * self.log_scale.exp()
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.d1(), self.d2())
    }

    pub fn mod_squared(&self) -> f64 {
        self.mod_squared_scaled * (2.0 * self.log_scale).exp()
    }

    pub fn ln_mod_squared(&self) -> f64 {
        self.mod_squared_scaled.ln() + 2.0 * self.log_scale
    }

    /// `arg D`, independent of the scaling.
    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionResult {
    pub amplitude: Complex64,
    pub probability: f64,
    /// `ln |A_T|²`, finite even when `probability` underflows.
    pub ln_probability: f64,
}

pub fn denominator(sys: &BarrierSystem, energy: f64) -> Result<DenominatorParts> {
    let kin = kinematics(sys, energy)?;
    let hs = hyperbolic_state(&kin, sys.a);
    Ok(denominator_from(&kin, &hs, sys.l))
}

pub(crate) fn denominator_from(kin: &Kinematics, hs: &HyperbolicState, l: f64) -> DenominatorParts {
    let (s, c) = (2.0 * kin.k * l).sin_cos();
    let (s1, c1) = (kin.k * l).sin_cos();
    let one = hs.one();
    let re = hs.u + hs.w * c;
    let im = hs.v + hs.w * s;
    let g = hs.ch * c1 + 0.5 * kin.delta * hs.sh * s1;
    DenominatorParts {
        re,
        im,
        mod_squared_scaled: one * one + 4.0 * hs.w * g * g,
        expanded_mod_squared_scaled: one * one + 2.0 * hs.w * (one + hs.w + hs.u * c + hs.v * s),
        direct_mod_squared_scaled: re * re + im * im,
        log_scale: hs.log_scale(),
    }
}

pub fn amplitude(sys: &BarrierSystem, energy: f64) -> Result<TransmissionResult> {
    let kin = kinematics(sys, energy)?;
    let hs = hyperbolic_state(&kin, sys.a);
    let d = denominator_from(&kin, &hs, sys.l);
    Ok(transmission_from(&kin, &hs, &d, sys.a))
}

pub(crate) fn transmission_from(
    kin: &Kinematics,
    hs: &HyperbolicState,
    d: &DenominatorParts,
    a: f64,
) -> TransmissionResult {
    let phase = Complex64::from_polar(1.0, -2.0 * kin.k * a);
    let amplitude = phase * hs.one() / Complex64::new(d.re, d.im);
    TransmissionResult {
        amplitude,
        probability: (hs.one() * hs.one() / d.mod_squared_scaled).min(1.0),
        ln_probability: -d.ln_mod_squared(),
    }
}

/// `|A_T|²` only.
pub fn probability(sys: &BarrierSystem, energy: f64) -> Result<f64> {
    amplitude(sys, energy).map(|t| t.probability)
}

/// Bracket shared by the opaque-barrier asymptotics,
/// `σ²/4 + (1 − δ²/4) cos 2kL + δ sin 2kL`.
///
/// It is non-negative and vanishes where the thick-barrier resonance
/// condition `cot kL = −δ/2` holds.
pub fn opaque_bracket(kin: &Kinematics, l: f64) -> f64 {
    let (s, c) = (2.0 * kin.k * l).sin_cos();
    let d = kin.delta;
    0.25 * kin.sigma_squared() + (1.0 - 0.25 * d * d) * c + d * s
}

/// Rejects brackets below `(σ²/2)·exp(−qa)`, i.e. within a relative
/// `exp(−qa)` of its zero; there the neglected `O(exp(−2qa))` terms are no
/// longer small against the bracket.
pub(crate) fn checked_opaque_bracket(kin: &Kinematics, a: f64, l: f64) -> Result<f64> {
    let bracket = opaque_bracket(kin, l);
    if bracket <= 0.5 * kin.sigma_squared() * (-kin.q * a).exp() {
        return Err(TunnelError::NearResonance { bracket });
    }
    Ok(bracket)
}

/// Thick-barrier transmission probability,
/// `32 σ⁻² exp(−4qa) / [σ²/4 + (1 − δ²/4) cos 2kL + δ sin 2kL]`.
///
/// Only meaningful for `qa ≫ 1`; the caller decides whether that holds.
pub fn probability_opaque(sys: &BarrierSystem, energy: f64) -> Result<f64> {
    let kin = kinematics(sys, energy)?;
    let bracket = checked_opaque_bracket(&kin, sys.a, sys.l)?;
    Ok(32.0 / kin.sigma_squared() * (-4.0 * kin.q * sys.a).exp() / bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{JOULE_PER_NEV, NEUTRON_MASS};

    const NEV: f64 = JOULE_PER_NEV;

    fn neutron() -> BarrierSystem {
        BarrierSystem::new(300e-10, 230.0 * NEV, 195e-10, NEUTRON_MASS).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn free_propagation_when_barriers_vanish() {
        let sys = neutron().with_a(1e-30).unwrap();
        let d = denominator(&sys, 80.0 * NEV).unwrap();
        assert!((d.d1() - 1.0).abs() < 1e-14);
        assert!(d.d2().abs() < 1e-14);
        let t = amplitude(&sys, 80.0 * NEV).unwrap();
        assert!((t.probability - 1.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_modulus_matches_direct() {
        let sys = neutron();
        for i in 1..100 {
            let d = denominator(&sys, sys.u0 * i as f64 / 100.0).unwrap();
            assert!(rel(d.mod_squared_scaled, d.direct_mod_squared_scaled) < 1e-10);
            assert!(rel(d.mod_squared_scaled, d.expanded_mod_squared_scaled) < 1e-10);
            assert!(d.mod_squared() >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn single_barrier_when_gap_closes() {
        // L = 0 is one barrier of width 2a: |D| = |cosh 2qa + i δ/2 sinh 2qa|.
        let sys = neutron().with_l(0.0).unwrap();
        let e = 150.0 * NEV;
        let kin = kinematics(&sys, e).unwrap();
        let x = 2.0 * kin.q * sys.a;
        let expected = x.cosh().powi(2) + 0.25 * kin.delta.powi(2) * x.sinh().powi(2);
        assert!(rel(denominator(&sys, e).unwrap().mod_squared(), expected) < 1e-12);
    }

    #[test]
    fn ln_probability_tracks_probability() {
        let sys = neutron();
        let t = amplitude(&sys, 60.0 * NEV).unwrap();
        assert!(rel(t.ln_probability.exp(), t.probability) < 1e-12);
        assert!(rel(t.amplitude.norm_sqr(), t.probability) < 1e-12);
    }

    #[test]
    fn opaque_probability_scales_with_width() {
        let sys = neutron();
        let e = 60.0 * NEV;
        let kin = kinematics(&sys, e).unwrap();
        let thick = sys.with_a(20.0 / kin.q).unwrap();
        let thicker = sys.with_a(2.0 * thick.a).unwrap();
        let ratio =
            probability_opaque(&thicker, e).unwrap() / probability_opaque(&thick, e).unwrap();
        assert!(rel(ratio, (-4.0 * kin.q * thick.a).exp()) < 1e-12);
    }

    #[test]
    fn opaque_probability_matches_exact_at_qa_25() {
        let base = neutron();
        for e_nev in [20.0, 60.0, 100.0, 180.0] {
            let e = e_nev * NEV;
            let kin = kinematics(&base, e).unwrap();
            let sys = base.with_a(25.0 / kin.q).unwrap();
            let exact = probability(&sys, e).unwrap();
            let approx = probability_opaque(&sys, e).unwrap();
            assert!(rel(exact, approx) < 1e-3, "E = {e_nev} neV");
        }
    }

    #[test]
    fn opaque_probability_refuses_thick_limit_resonance() {
        // Place the gap so that the bracket vanishes exactly at E.
        let base = neutron();
        let e = 100.0 * NEV;
        let kin = kinematics(&base, e).unwrap();
        let phi = kin.delta.atan2(1.0 - 0.25 * kin.delta * kin.delta);
        let l = (std::f64::consts::PI + phi) / (2.0 * kin.k);
        let sys = base.with_a(20.0 / kin.q).unwrap().with_l(l).unwrap();
        assert!(opaque_bracket(&kin, l).abs() < 1e-12);
        assert!(matches!(
            probability_opaque(&sys, e),
            Err(TunnelError::NearResonance { .. })
        ));
    }

    #[test]
    fn bracket_is_never_negative() {
        let sys = neutron();
        for i in 1..200 {
            let kin = kinematics(&sys, sys.u0 * i as f64 / 200.0).unwrap();
            for j in 0..50 {
                assert!(opaque_bracket(&kin, j as f64 * 7e-10) >= -1e-12);
            }
        }
    }

    #[test]
    fn survives_extremely_opaque_barriers() {
        let base = neutron();
        let e = 100.0 * NEV;
        let kin = kinematics(&base, e).unwrap();
        let sys = base.with_a(500.0 / kin.q).unwrap();
        let t = amplitude(&sys, e).unwrap();
        assert_eq!(t.probability, 0.0);
        assert!(t.ln_probability.is_finite());
        let slope_check = t.ln_probability + 4.0 * 500.0;
        assert!(slope_check.abs() < 10.0);
    }
}
