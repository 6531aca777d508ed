//! Resonance search, effective-mass inversion and the Breit-Wigner
//! description of the transmission peak.
//!
//! Full transparency `|D|² = 1` is equivalent to
//! `1 + w + u cos 2kL + v sin 2kL = 0`, which factors as
//! `2[cosh(qa) cos kL + (δ/2) sinh(qa) sin kL]² = 0`. The residual used for
//! root finding is that factor divided by `cosh(qa)`:
//!
//! ```text
//! f(E) = cos kL + (δ/2) tanh(qa) sin kL
//! ```
//!
//! i.e. `cot kL = −(δ/2) tanh(qa)`. Hyperbolic tangent, not circular: `q` is
//! real below the barrier top. Every root is certified independently by
//! checking `|A_T|² = 1`.

use num_complex::Complex64;

use crate::error::{Result, TunnelError};
use crate::kinematics::{hyperbolic_state, kinematics, BarrierSystem};
use crate::roots::{bisect, sign_change_cells};
use crate::transmission::amplitude;

/// Cells of the uniform energy scan. Narrow resonances (large `L` or thick
/// barriers) may need more.
pub const DEFAULT_GRID_CELLS: usize = 2000;
/// Relative width at which root bisection in energy stops.
pub const ROOT_REL_TOL: f64 = 1e-12;
/// Allowed deviation of `|A_T|²` from one for a certified resonance.
pub const CERTIFY_TOL: f64 = 1e-9;
/// Relative width at which the mass bisection stops.
pub const MASS_REL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    /// `E_r`, joules.
    pub energy: f64,
    /// `k_r`, 1/m.
    pub k: f64,
    /// Breit-Wigner half-width `β`, joules.
    pub beta: f64,
    /// Position of the root within the search window, from zero.
    pub index: usize,
}

/// Linearisation `D(E) ≈ C_r (E − E_r + iβ)` around a resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceExpansion {
    /// `D(k_r) = (u_r + i v_r)/(1 + w_r)`.
    pub d_r: Complex64,
    /// `C_r = dD/dE` at `E_r` from differentiating `D` directly, 1/J.
    pub c_r: Complex64,
    /// `|C_r|` from the closed form `(m/ħ²k)[(u'v − uv')/(1 + w) + 2Lw]`, 1/J.
    pub c_r_mod: f64,
    /// `u'v − uv'` via `(1 + w)(δka + σ² cosh sinh)/q`, scaled by `exp(−4qa)`.
    pub wronskian_closed: f64,
    /// `u'v − uv'` from the stored derivatives, same scaling.
    pub wronskian_direct: f64,
}

impl ResonanceExpansion {
    /// `C_r (E − E_r + iβ)`.
    pub fn linearized_denominator(&self, res: &Resonance, energy: f64) -> Complex64 {
        self.c_r * Complex64::new(energy - res.energy, res.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub cells: usize,
    pub rel_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            cells: DEFAULT_GRID_CELLS,
            rel_tol: ROOT_REL_TOL,
        }
    }
}

pub fn resonance_residual(sys: &BarrierSystem, energy: f64) -> Result<f64> {
    let kin = kinematics(sys, energy)?;
    let (s, c) = (kin.k * sys.l).sin_cos();
    Ok(c + 0.5 * kin.delta * (kin.q * sys.a).tanh() * s)
}

pub fn find_resonances(sys: &BarrierSystem, e_min: f64, e_max: f64) -> Result<Vec<Resonance>> {
    find_resonances_with(sys, e_min, e_max, &ScanOptions::default())
}

pub fn find_resonances_with(
    sys: &BarrierSystem,
    e_min: f64,
    e_max: f64,
    options: &ScanOptions,
) -> Result<Vec<Resonance>> {
    sys.check_energy(e_min)?;
    sys.check_energy(e_max)?;
    if !(e_min < e_max) {
        return Err(TunnelError::Domain(format!(
            "search window [{e_min:e}, {e_max:e}] J is empty"
        )));
    }
    let residual = |e: f64| resonance_residual(sys, e);
    let cells = sign_change_cells(residual, e_min, e_max, options.cells)?;

    let mut found = Vec::with_capacity(cells.len());
    for (index, (lo, hi)) in cells.into_iter().enumerate() {
        let Some(mut energy) = bisect(residual, lo, hi, options.rel_tol)? else {
            continue;
        };
        let mut probability = amplitude(sys, energy)?.probability;
        if (probability - 1.0).abs() > CERTIFY_TOL {
            // Narrow resonances in long gaps need more than the requested
            // tolerance; polish to the last representable bracket first.
            if let Some(polished) = bisect(residual, lo, hi, 0.0)? {
                energy = polished;
                probability = amplitude(sys, energy)?.probability;
            }
        }
        if (probability - 1.0).abs() > CERTIFY_TOL {
            return Err(TunnelError::Validation {
                energy,
                probability,
            });
        }
        let mut res = Resonance {
            energy,
            k: kinematics(sys, energy)?.k,
            beta: 0.0,
            index,
        };
        res.beta = breit_wigner_width(sys, &res)?;
        found.push(res);
    }
    Ok(found)
}

/// Mass for which `sys` (geometry and `ħ` kept, mass replaced) resonates
/// at `target`. `bracket` is `(m_lo, m_hi)` in kilograms.
pub fn fit_effective_mass(sys: &BarrierSystem, target: f64, bracket: (f64, f64)) -> Result<f64> {
    sys.check_energy(target)?;
    let (lo, hi) = bracket;
    let residual = |m: f64| resonance_residual(&sys.with_mass(m)?, target);
    bisect(residual, lo, hi, MASS_REL_TOL)?.ok_or(TunnelError::NoSignChange { lo, hi })
}

/// `β = (ħ²k_r q_r/m) / [δ_r k_r a + 2 q_r L w_r + σ_r² cosh(q_r a) sinh(q_r a)]`.
pub fn breit_wigner_width(sys: &BarrierSystem, res: &Resonance) -> Result<f64> {
    let kin = kinematics(sys, res.energy)?;
    let hs = hyperbolic_state(&kin, sys.a);
    let one = hs.one();
    let bracket = kin.delta * kin.k * sys.a * one
        + 2.0 * kin.q * sys.l * hs.w
        + kin.sigma_squared() * hs.ch * hs.sh;
    if !(bracket > 0.0) {
        return Err(TunnelError::DegenerateResonance {
            energy: res.energy,
            reason: format!("width bracket {bracket:e} is not positive"),
        });
    }
    let beta = sys.energy_per_wavenumber(kin.k) * kin.q * one / bracket;
    if !(beta > 0.0) {
        return Err(TunnelError::DegenerateResonance {
            energy: res.energy,
            reason: "width underflows".into(),
        });
    }
    Ok(beta)
}

pub fn resonance_expansion(sys: &BarrierSystem, res: &Resonance) -> Result<ResonanceExpansion> {
    let kin = kinematics(sys, res.energy)?;
    let hs = hyperbolic_state(&kin, sys.a);
    let one = hs.one();
    let (s, c) = (2.0 * kin.k * sys.l).sin_cos();
    let l = sys.l;

    let dd_scaled = Complex64::new(
        hs.du + hs.dw * c - 2.0 * l * hs.w * s,
        hs.dv + hs.dw * s + 2.0 * l * hs.w * c,
    );
    let dk_de = 1.0 / sys.energy_per_wavenumber(kin.k);
    let unscale = hs.log_scale().exp();

    let core = kin.delta * kin.k * sys.a * one + kin.sigma_squared() * hs.ch * hs.sh;
    Ok(ResonanceExpansion {
        d_r: Complex64::new(hs.u, hs.v) / (one + hs.w),
        c_r: dd_scaled * dk_de * unscale,
        c_r_mod: dk_de * (core / kin.q + 2.0 * l * hs.w) * unscale,
        wronskian_closed: (one + hs.w) * core / kin.q,
        wronskian_direct: hs.wronskian(),
    })
}

/// Breit-Wigner transmission `β²/((E − E_r)² + β²)`.
pub fn bw_probability(res: &Resonance, energy: f64) -> f64 {
    let b2 = res.beta * res.beta;
    let de = energy - res.energy;
    b2 / (de * de + b2)
}

/// Near-resonance phase-time `mL/(ħk) + ħβ/((E − E_r)² + β²)`: free flight
/// across the gap plus the quasi-bound-state delay.
pub fn bw_phase_time(sys: &BarrierSystem, res: &Resonance, energy: f64) -> f64 {
    let k = (sys.two_m_over_hbar2() * energy).sqrt();
    let de = energy - res.energy;
    sys.time_per_length(k) * sys.l + sys.hbar * res.beta / (de * de + res.beta * res.beta)
}
