//! Barrier geometry, wave quantities and the hyperbolic helper functions
//! `u`, `v`, `w` together with their analytic `k`-derivatives.
//!
//! Convention: `k = √(2mE)/ħ`, `q = √(2m(U0 − E))/ħ`, so `dq/dk = −k/q`.
//!
//! `u`, `v`, `w` grow like `exp(2qa)` and overflow an `f64` once `qa`
//! passes ~355. [`HyperbolicState`] therefore stores every one of them
//! multiplied by `exp(−2qa)`; in that representation the number one is
//! [`HyperbolicState::one`]. All downstream formulas are homogeneous in this
//! factor, so they work unchanged for any `qa`.

use crate::constants::HBAR;
use crate::error::{Result, TunnelError};

/// Two equal rectangular barriers of width `a` and height `u0`, separated by
/// a field-free gap `l`, probed by a particle of mass `m`. SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSystem {
    pub a: f64,
    pub u0: f64,
    pub l: f64,
    pub m: f64,
    pub hbar: f64,
}

impl BarrierSystem {
    pub fn new(a: f64, u0: f64, l: f64, m: f64) -> Result<Self> {
        let sys = BarrierSystem {
            a,
            u0,
            l,
            m,
            hbar: HBAR,
        };
        sys.validate()?;
        Ok(sys)
    }

    /// Replace the reduced Planck constant (e.g. from a constants file).
    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        self.hbar = hbar;
        self.validate()?;
        Ok(self)
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        Self { a, ..self }.checked()
    }

    pub fn with_l(self, l: f64) -> Result<Self> {
        Self { l, ..self }.checked()
    }

    pub fn with_mass(self, m: f64) -> Result<Self> {
        Self { m, ..self }.checked()
    }

    fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("a", self.a),
            ("U0", self.u0),
            ("m", self.m),
            ("hbar", self.hbar),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(TunnelError::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {value}"),
                });
            }
        }
        if !(self.l.is_finite() && self.l >= 0.0) {
            return Err(TunnelError::InvalidParameter {
                name: "L",
                reason: format!("must be finite and >= 0, got {}", self.l),
            });
        }
        Ok(())
    }

    /// `2m/ħ²`, the factor turning an energy into a squared wavenumber.
    pub(crate) fn two_m_over_hbar2(&self) -> f64 {
        2.0 * self.m / (self.hbar * self.hbar)
    }

    /// `dE/dk = ħ²k/m`.
    pub fn energy_per_wavenumber(&self, k: f64) -> f64 {
        self.hbar * self.hbar * k / self.m
    }

    /// `m/(ħk)`: converts a length derivative of the phase into a time.
    pub fn time_per_length(&self, k: f64) -> f64 {
        self.m / (self.hbar * k)
    }

    pub fn energy_at_wavenumber(&self, k: f64) -> f64 {
        k * k / self.two_m_over_hbar2()
    }

    pub fn check_energy(&self, energy: f64) -> Result<()> {
        if !(energy > 0.0 && energy < self.u0) {
            return Err(TunnelError::Domain(format!(
                "energy {energy:e} J must lie strictly inside (0, U0 = {:e} J)",
                self.u0
            )));
        }
        Ok(())
    }
}

/// Wave quantities at one sub-barrier energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub energy: f64,
    pub k: f64,
    pub q: f64,
    pub delta: f64,
    pub sigma: f64,
}

impl Kinematics {
    pub fn sigma_squared(&self) -> f64 {
        self.sigma * self.sigma
    }
}

pub fn kinematics(sys: &BarrierSystem, energy: f64) -> Result<Kinematics> {
    sys.check_energy(energy)?;
    let scale = sys.two_m_over_hbar2();
    let k = (scale * energy).sqrt();
    let q = (scale * (sys.u0 - energy)).sqrt();
    Ok(from_wavenumbers(energy, k, q))
}

/// Kinematics parametrised by the wavenumber instead of the energy.
pub fn kinematics_at_wavenumber(sys: &BarrierSystem, k: f64) -> Result<Kinematics> {
    let energy = sys.energy_at_wavenumber(k);
    sys.check_energy(energy)?;
    let q = (sys.two_m_over_hbar2() * sys.u0 - k * k).sqrt();
    Ok(from_wavenumbers(energy, k, q))
}

fn from_wavenumbers(energy: f64, k: f64, q: f64) -> Kinematics {
    let kq = k * q;
    Kinematics {
        energy,
        k,
        q,
        delta: (q - k) * (q + k) / kq,
        sigma: (k * k + q * q) / kq,
    }
}

/// `u`, `v`, `w` and their `k`-derivatives, all scaled by `exp(−2qa)`.
///
/// With `C = cosh(qa)`, `S = sinh(qa)`:
///
/// ```text
/// u = C² − δ²S²/4        v = δCS        w = σ²S²/4
/// ```
///
/// Differentiating at fixed `a`, `U0`, `m` with `dq/dk = −k/q` gives
/// `δ' = −σ²/q`, `(σ²)' = −2σ²δ/q`, `d(qa)/dk = −ak/q`, hence
///
/// ```text
/// u' = −(2ak/q)(1 − δ²/4) CS + (δσ²/2q) S²
/// v' = −(σ²/q) CS − (δak/q)(C² + S²)
/// w' = −(σ²δ/2q) S² − (σ²ak/2q) CS
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub du: f64,
    pub dv: f64,
    pub dw: f64,
    /// `cosh(qa)·exp(−qa)`
    pub ch: f64,
    /// `sinh(qa)·exp(−qa)`
    pub sh: f64,
    pub qa: f64,
}

impl HyperbolicState {
    /// The number one in the scaled representation, `exp(−2qa)`.
    pub fn one(&self) -> f64 {
        (-2.0 * self.qa).exp()
    }

    /// Natural log of the factor removed from every stored value.
    pub fn log_scale(&self) -> f64 {
        2.0 * self.qa
    }

    /// Unscaled `(u, v, w)`; overflows to infinity for very opaque barriers.
    pub fn values(&self) -> (f64, f64, f64) {
        let s = self.log_scale().exp();
        (self.u * s, self.v * s, self.w * s)
    }

    /// Unscaled `(u', v', w')`.
    pub fn derivatives(&self) -> (f64, f64, f64) {
        let s = self.log_scale().exp();
        (self.du * s, self.dv * s, self.dw * s)
    }

    /// `u'v − uv'` straight from the stored components (scaled by `exp(−4qa)`).
    pub fn wronskian(&self) -> f64 {
        self.du * self.v - self.u * self.dv
    }
}

pub fn hyperbolic_state(kin: &Kinematics, a: f64) -> HyperbolicState {
    let Kinematics { k, q, delta, .. } = *kin;
    let sigma2 = kin.sigma_squared();
    let qa = q * a;
    let decay = (-2.0 * qa).exp();
    let ch = 0.5 * (1.0 + decay);
    let sh = -0.5 * (-2.0 * qa).exp_m1();
    let (c2, s2, cs) = (ch * ch, sh * sh, ch * sh);
    let dqa = -a * k / q;

    HyperbolicState {
        u: c2 - 0.25 * delta * delta * s2,
        v: delta * cs,
        w: 0.25 * sigma2 * s2,
        du: 2.0 * (1.0 - 0.25 * delta * delta) * cs * dqa + 0.5 * delta * sigma2 / q * s2,
        dv: -sigma2 / q * cs + delta * (c2 + s2) * dqa,
        dw: -0.5 * sigma2 * delta / q * s2 + 0.5 * sigma2 * cs * dqa,
        ch,
        sh,
        qa,
    }
}
