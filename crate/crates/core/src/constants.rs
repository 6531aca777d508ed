//! Physical constants and the unit conversions used at API boundaries.
//!
//! Everything inside the crate is SI. Ångström and neV only appear when
//! values enter or leave through [`PhysicalConstants`] helpers.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TunnelError};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Free neutron mass, kg (CODATA 2018).
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;
/// One nano-electronvolt in joules (exact).
pub const JOULE_PER_NEV: f64 = 1.602_176_634e-28;
/// One ångström in metres.
pub const METRE_PER_ANGSTROM: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub m_neutron: f64,
    #[serde(rename = "neV_per_J")]
    pub nev_per_joule: f64,
    pub m_per_angstrom: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        m_neutron: NEUTRON_MASS,
        nev_per_joule: 1.0 / JOULE_PER_NEV,
        m_per_angstrom: METRE_PER_ANGSTROM,
    };

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("hbar", self.hbar),
            ("m_neutron", self.m_neutron),
            ("neV_per_J", self.nev_per_joule),
            ("m_per_angstrom", self.m_per_angstrom),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(TunnelError::InvalidParameter {
                    name,
                    reason: format!("must be finite and strictly positive, got {value}"),
                });
            }
        }
        Ok(())
    }

    pub fn nev_to_joule(&self, nev: f64) -> f64 {
        nev / self.nev_per_joule
    }

    pub fn joule_to_nev(&self, joule: f64) -> f64 {
        joule * self.nev_per_joule
    }

    pub fn angstrom_to_metre(&self, angstrom: f64) -> f64 {
        angstrom * self.m_per_angstrom
    }

    pub fn metre_to_angstrom(&self, metre: f64) -> f64 {
        metre / self.m_per_angstrom
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codata_values_are_valid() {
        PhysicalConstants::CODATA_2018.validate().unwrap();
    }

    #[test]
    fn conversions_round_trip() {
        let c = PhysicalConstants::CODATA_2018;
        assert!((c.joule_to_nev(c.nev_to_joule(127.0)) - 127.0).abs() < 1e-12);
        assert!((c.nev_to_joule(1.0) - JOULE_PER_NEV).abs() < 1e-40);
        assert!((c.angstrom_to_metre(300.0) / 3e-8 - 1.0).abs() < 1e-15);
        assert!((c.metre_to_angstrom(1.95e-8) - 195.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive() {
        let mut c = PhysicalConstants::CODATA_2018;
        c.hbar = 0.0;
        assert!(matches!(
            c.validate(),
            Err(TunnelError::InvalidParameter { name: "hbar", .. })
        ));
        c = PhysicalConstants::CODATA_2018;
        c.m_per_angstrom = f64::NAN;
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_uses_documented_keys() {
        let json = serde_json::to_value(PhysicalConstants::CODATA_2018).unwrap();
        for key in ["hbar", "m_neutron", "neV_per_J", "m_per_angstrom"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
