//! Wigner phase-time `τ = ħ d/dE arg{A_T exp[ik(2a + L)]}` for the double
//! barrier.
//!
//! Since `A_T exp[ik(2a + L)] = exp(ikL)/D`, the exact result is
//! `τ = (m/ħk) P/|D|²` with
//!
//! ```text
//! P = (1 + 2w)L + u'v − uv' + (u'w − uw') sin 2kL + (vw' − v'w) cos 2kL
//! ```
//!
//! For thick barriers `τ` saturates at `2m/(ħkq)`. Computing the small
//! remainder as `τ − 2m/(ħkq)` loses everything below the rounding of `τ`,
//! so [`PhaseTimeBreakdown::excess`] is evaluated from an algebraically
//! reduced numerator `N = P − (2/q)|D|²` in which the `exp(4qa)` terms have
//! been cancelled by hand:
//!
//! ```text
//! N = (1 + 2w)L + b₀ + b_s sin 2kL + b_c cos 2kL
//! b₀ = [(1 + w)(δka + σ² S e^{−qa}) − 2] / q
//! b_s = (σ²/2q) [ak SC + δ S² e^{−2qa}]
//! b_c = −(σ²/4q) S² [δak + 4 e^{−qa}(C + δ²S/4)]
//! ```
//!
//! The phase-time assumes the constant-phase approximation; no validity
//! region is flagged here.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Result, TunnelError};
use crate::kinematics::{hyperbolic_state, kinematics, BarrierSystem};
use crate::quadrature::adaptive_simpson;
use crate::resonance::Resonance;
use crate::transmission::{checked_opaque_bracket, denominator, denominator_from};

/// Default relative energy step for [`phase_time_numeric`].
pub const DEFAULT_REL_STEP: f64 = 1e-6;
/// Step halvings attempted before giving up on phase unwrapping.
pub const MAX_HALVINGS: u32 = 30;
/// Relative accuracy requested from the energy average.
pub const AVERAGE_REL_TOL: f64 = 1e-9;
/// `|A_T(E_r)|²` must be within this of one before the resonance formula is used.
pub const RESONANCE_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTimeBreakdown {
    /// `τ` in seconds, from the `P/|D|²` formula.
    pub total: f64,
    /// `P·exp(−4qa)`, metres.
    pub p_scaled: f64,
    /// `|D|²·exp(−4qa)`.
    pub mod_squared_scaled: f64,
    /// `2qa`.
    pub log_scale: f64,
    /// Thick-barrier limit `2m/(ħkq)`.
    pub hartman_limit: f64,
    /// `τ − 2m/(ħkq)` computed without cancellation.
    pub excess: f64,
}

impl PhaseTimeBreakdown {
    pub fn p_value(&self) -> f64 {
        self.p_scaled * (2.0 * self.log_scale).exp()
    }

    pub fn mod_squared(&self) -> f64 {
        self.mod_squared_scaled * (2.0 * self.log_scale).exp()
    }
}

pub fn phase_time(sys: &BarrierSystem, energy: f64) -> Result<PhaseTimeBreakdown> {
    let kin = kinematics(sys, energy)?;
    let hs = hyperbolic_state(&kin, sys.a);
    let d = denominator_from(&kin, &hs, sys.l);
    let (s, c) = (2.0 * kin.k * sys.l).sin_cos();
    let one = hs.one();
    let l = sys.l;

    let p_scaled = (one * one + 2.0 * one * hs.w) * l
        + hs.wronskian()
        + (hs.du * hs.w - hs.u * hs.dw) * s
        + (hs.v * hs.dw - hs.dv * hs.w) * c;

    let (q, delta, sigma2) = (kin.q, kin.delta, kin.sigma_squared());
    let ak = sys.a * kin.k;
    let (ch, sh) = (hs.ch, hs.sh);
    let b0 = ((one + hs.w) * (delta * ak + sigma2 * sh) - 2.0 * one) / q;
    let bs = 0.5 * sigma2 / q * (ak * sh * ch + delta * sh * sh * one);
    let bc = -0.25 * sigma2 / q * sh * sh * (delta * ak + 4.0 * (ch + 0.25 * delta * delta * sh));
    let n_scaled = (one + 2.0 * hs.w) * l + b0 + bs * s + bc * c;

    let per_length = sys.time_per_length(kin.k);
    Ok(PhaseTimeBreakdown {
        total: per_length * p_scaled / d.mod_squared_scaled,
        p_scaled,
        mod_squared_scaled: d.mod_squared_scaled,
        log_scale: hs.log_scale(),
        hartman_limit: per_length * 2.0 / q,
        excess: per_length * one * n_scaled / d.mod_squared_scaled,
    })
}

/// `ħ dφ/dE` by central differences of an arbitrary phase function.
///
/// `phase` may return values on any branch; successive differences are
/// reduced to `(−π, π]`. The step starts at `energy·rel_step` and is
/// halved until both half-stencil jumps are below π/2 and agree with twice
/// the jumps at half the step. `window` is the open interval the stencil
/// must stay inside.
pub fn wigner_time<F>(
    hbar: f64,
    energy: f64,
    rel_step: f64,
    window: (f64, f64),
    mut phase: F,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut step = energy * rel_step;
    let (lo, hi) = (energy - step, energy + step);
    if !(step > 0.0 && lo > window.0 && hi < window.1) {
        return Err(TunnelError::Step { lo, hi });
    }
    let centre = phase(energy)?;
    let jumps = |phase: &mut F, h: f64| -> Result<(f64, f64)> {
        Ok((
            wrap(centre - phase(energy - h)?),
            wrap(phase(energy + h)? - centre),
        ))
    };
    let mut jump = 0.0;
    let mut current = jumps(&mut phase, step)?;
    for _ in 0..=MAX_HALVINGS {
        // A wrapped jump can alias to something small; the half step must
        // see half of it.
        let half = jumps(&mut phase, 0.5 * step)?;
        let (below, above) = current;
        jump = below.abs().max(above.abs());
        let consistent =
            (below - 2.0 * half.0).abs() < FRAC_PI_4 && (above - 2.0 * half.1).abs() < FRAC_PI_4;
        if jump < FRAC_PI_2 && consistent {
            return Ok(hbar * (below + above) / (2.0 * step));
        }
        step *= 0.5;
        current = half;
    }
    Err(TunnelError::Unwrap {
        energy,
        jump,
        halvings: MAX_HALVINGS,
    })
}

fn wrap(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

/// Phase-time from a finite-difference derivative of
/// `arg{A_T exp[ik(2a + L)]} = kL − arg D`.
pub fn phase_time_numeric(sys: &BarrierSystem, energy: f64, rel_step: f64) -> Result<f64> {
    sys.check_energy(energy)?;
    wigner_time(sys.hbar, energy, rel_step, (0.0, sys.u0), |e| {
        let k = kinematics(sys, e)?.k;
        Ok(k * sys.l - denominator(sys, e)?.arg())
    })
}

/// `τ_r = (m/ħkq)[σ² cosh(qa) sinh(qa) + δka + (1 + 2w)qL]` at a resonance.
pub fn phase_time_at_resonance(sys: &BarrierSystem, res: &Resonance) -> Result<f64> {
    let kin = kinematics(sys, res.energy)?;
    let hs = hyperbolic_state(&kin, sys.a);
    let d = denominator_from(&kin, &hs, sys.l);
    let probability = hs.one() * hs.one() / d.mod_squared_scaled;
    if (probability - 1.0).abs() > RESONANCE_CHECK_TOL {
        return Err(TunnelError::Validation {
            energy: res.energy,
            probability,
        });
    }
    let one = hs.one();
    let bracket = kin.sigma_squared() * hs.ch * hs.sh
        + kin.delta * kin.k * sys.a * one
        + (one + 2.0 * hs.w) * kin.q * sys.l;
    Ok(sys.time_per_length(kin.k) / kin.q * bracket * hs.log_scale().exp())
}

/// Two-term thick-barrier form
/// `2m/(ħkq) + (4m/ħk) L exp(−2qa) / [σ²/4 + (1 − δ²/4) cos 2kL + δ sin 2kL]`.
///
/// Only the part of the `exp(−2qa)` correction proportional to `L` is
/// kept; terms proportional to `a·exp(−2qa)` of the exact expansion are
/// not, so this reproduces the plateau and the weak `L` dependence but not
/// the full first correction.
pub fn phase_time_opaque(sys: &BarrierSystem, energy: f64) -> Result<f64> {
    let (limit, correction) = phase_time_opaque_terms(sys, energy)?;
    Ok(limit + correction)
}

/// The two terms of [`phase_time_opaque`] separately: the plateau
/// `2m/(ħkq)` and the `exp(−2qa)` correction, which is far below the
/// rounding of the sum for thick barriers.
pub fn phase_time_opaque_terms(sys: &BarrierSystem, energy: f64) -> Result<(f64, f64)> {
    let kin = kinematics(sys, energy)?;
    let bracket = checked_opaque_bracket(&kin, sys.a, sys.l)?;
    let per_length = sys.time_per_length(kin.k);
    Ok((
        per_length * 2.0 / kin.q,
        per_length * 4.0 * sys.l * (-2.0 * kin.q * sys.a).exp() / bracket,
    ))
}

/// Mean of `τ(E)` over `[e_lo, e_hi]` with uniform weight.
pub fn average_phase_time(sys: &BarrierSystem, e_lo: f64, e_hi: f64) -> Result<f64> {
    sys.check_energy(e_lo)?;
    sys.check_energy(e_hi)?;
    if !(e_lo < e_hi) {
        return Err(TunnelError::Domain(format!(
            "averaging window [{e_lo:e}, {e_hi:e}] J is empty"
        )));
    }
    let width = e_hi - e_lo;
    let tau = |e: f64| phase_time(sys, e).map(|b| b.total);
    let scale = [e_lo, 0.5 * (e_lo + e_hi), e_hi]
        .into_iter()
        .map(tau)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0_f64, |m, t| m.max(t.abs()));
    match adaptive_simpson(tau, e_lo, e_hi, AVERAGE_REL_TOL * scale * width) {
        Ok(integral) => Ok(integral / width),
        Err(TunnelError::Quadrature { partial }) => Err(TunnelError::Quadrature {
            partial: partial / width,
        }),
        Err(e) => Err(e),
    }
}
