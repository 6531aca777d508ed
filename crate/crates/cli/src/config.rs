//! JSON run configuration. Every value may also be given as a flag; flags
//! win over the file, the file wins over built-in defaults.

use std::path::Path;

use serde::Deserialize;
use tunnelkit::{BarrierSystem, PhysicalConstants};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub system: SystemSpec,
    #[serde(default)]
    pub transmission: GridSpec,
    #[serde(default)]
    pub resonances: ResonanceSpec,
    #[serde(default)]
    pub neutron: NeutronSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub oracle_check: OracleSpec,
}

/// Barrier geometry in Å and neV, mass in units of the neutron mass.
#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub a: Option<f64>,
    #[serde(rename = "U0")]
    pub u0: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub mass_ratio: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub points: Option<usize>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSpec {
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub fit_mass: Option<f64>,
    pub mass_bracket: Option<(f64, f64)>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeutronSpec {
    pub constants: Option<String>,
    pub check: Option<bool>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub energy: Option<f64>,
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
    pub format: Option<String>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub points: Option<usize>,
    pub amp_tol: Option<f64>,
    pub tau_tol: Option<f64>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        CliError::Parse(format!(
            "{}: field `{field}`: {}",
            path.display(),
            e.inner()
        ))
    })
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    path.map(read_json)
        .transpose()
        .map(Option::unwrap_or_default)
}

pub const DEFAULT_SYSTEM: (f64, f64, f64, f64) = (300.0, 230.0, 195.0, 1.0);

impl SystemSpec {
    /// `self` overrides `base` field by field.
    pub fn over(self, base: SystemSpec) -> SystemSpec {
        SystemSpec {
            a: self.a.or(base.a),
            u0: self.u0.or(base.u0),
            l: self.l.or(base.l),
            mass_ratio: self.mass_ratio.or(base.mass_ratio),
        }
    }

    pub fn build(&self, c: &PhysicalConstants) -> Result<BarrierSystem, CliError> {
        let (a, u0, l, mass) = DEFAULT_SYSTEM;
        let a = self.a.unwrap_or(a);
        let u0 = self.u0.unwrap_or(u0);
        let l = self.l.unwrap_or(l);
        let mass = self.mass_ratio.unwrap_or(mass);
        for (name, value, allow_zero) in [
            ("a", a, false),
            ("U0", u0, false),
            ("L", l, true),
            ("mass_ratio", mass, false),
        ] {
            if !(value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0))) {
                return Err(CliError::Parse(format!(
                    "system field `{name}` must be {}, got {value}",
                    if allow_zero {
                        "non-negative"
                    } else {
                        "positive"
                    }
                )));
            }
        }
        BarrierSystem::new(
            c.angstrom_to_metre(a),
            c.nev_to_joule(u0),
            c.angstrom_to_metre(l),
            mass * c.m_neutron,
        )
        .and_then(|s| s.with_hbar(c.hbar))
        .map_err(CliError::from)
    }
}
