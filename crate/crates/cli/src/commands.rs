use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use tunnelkit::scatter_oracle::solve;
use tunnelkit::{
    amplitude, double_barrier_profile, find_resonances_with, fit_effective_mass, hartman_sweep,
    kinematics, phase_time, phase_time_at_resonance, run_neutron_scenario_with, wigner_time,
    BarrierSystem, Complex64, NeutronReport, PhysicalConstants, Resonance, ScanOptions, SweepAxis,
};

use crate::config::{self, FileConfig};
use crate::format::{num, opt_num, write_csv, write_json, Format};
use crate::{
    CliError, Common, NeutronArgs, OracleArgs, ResonanceArgs, SweepArgs, TransmissionArgs,
};

const CONSTANTS: PhysicalConstants = PhysicalConstants::CODATA_2018;
const GRID_CELLS_VAR: &str = "TUNNELKIT_GRID_CELLS";

fn setup(common: &Common) -> Result<(FileConfig, BarrierSystem), CliError> {
    let file = config::load(common.config.as_deref())?;
    let sys = common.system().over(file.system).build(&CONSTANTS)?;
    Ok((file, sys))
}

fn scan_options() -> Result<ScanOptions, CliError> {
    let mut options = ScanOptions::default();
    if let Ok(raw) = std::env::var(GRID_CELLS_VAR) {
        options.cells = raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                CliError::Parse(format!(
                    "{GRID_CELLS_VAR} must be a positive integer, got `{raw}`"
                ))
            })?;
    }
    Ok(options)
}

/// `points` energies from `lo` to `hi` inclusive, in joules.
fn grid(lo_nev: f64, hi_nev: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Parse("field `points` must be at least 1".into()));
    }
    if !(lo_nev <= hi_nev) {
        return Err(CliError::Domain(format!(
            "energy grid [{lo_nev}, {hi_nev}] neV is empty"
        )));
    }
    Ok((0..points)
        .map(|i| {
            let t = if points == 1 {
                0.0
            } else {
                i as f64 / (points - 1) as f64
            };
            CONSTANTS.nev_to_joule(lo_nev + (hi_nev - lo_nev) * t)
        })
        .collect())
}

fn nev(joule: f64) -> f64 {
    CONSTANTS.joule_to_nev(joule)
}

#[derive(Serialize)]
struct TransmissionRow {
    #[serde(rename = "E_neV")]
    e_nev: f64,
    probability: f64,
    tau_s: f64,
}

pub fn transmission(args: TransmissionArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (file, sys) = setup(&args.common)?;
    let section = file.transmission;
    let u0 = nev(sys.u0);
    let energies = grid(
        args.e_min.or(section.e_min).unwrap_or(0.01 * u0),
        args.e_max.or(section.e_max).unwrap_or(0.99 * u0),
        args.points.or(section.points).unwrap_or(201),
    )?;
    let format = Format::parse(args.format.as_deref().or(section.format.as_deref()))?;
    let rows = energies
        .iter()
        .map(|&e| {
            Ok(TransmissionRow {
                e_nev: nev(e),
                probability: amplitude(&sys, e)?.probability,
                tau_s: phase_time(&sys, e)?.total,
            })
        })
        .collect::<Result<Vec<_>, tunnelkit::TunnelError>>()?;
    match format {
        Format::Json => write_json(out, &rows),
        Format::Csv => write_csv(
            out,
            &["E_neV", "probability", "tau_s"],
            &rows
                .iter()
                .map(|r| vec![num(r.e_nev), num(r.probability), num(r.tau_s)])
                .collect::<Vec<_>>(),
        ),
    }
}

#[derive(Serialize)]
struct ResonanceRow {
    #[serde(rename = "E_r_neV")]
    e_r_nev: f64,
    #[serde(rename = "beta_neV")]
    beta_nev: f64,
    tau_r_s: f64,
}

#[derive(Serialize)]
struct FittedResonances {
    fitted_mass_ratio: f64,
    resonances: Vec<ResonanceRow>,
}

fn resonance_rows(sys: &BarrierSystem, found: &[Resonance]) -> Result<Vec<ResonanceRow>, CliError> {
    found
        .iter()
        .map(|r| {
            Ok(ResonanceRow {
                e_r_nev: nev(r.energy),
                beta_nev: nev(r.beta),
                tau_r_s: phase_time_at_resonance(sys, r)?,
            })
        })
        .collect()
}

pub fn resonances(args: ResonanceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (file, sys) = setup(&args.common)?;
    let section = file.resonances;
    let options = scan_options()?;
    let window = (
        args.e_min
            .or(section.e_min)
            .map(|e| CONSTANTS.nev_to_joule(e))
            .unwrap_or(1e-3 * sys.u0),
        args.e_max
            .or(section.e_max)
            .map(|e| CONSTANTS.nev_to_joule(e))
            .unwrap_or((1.0 - 1e-3) * sys.u0),
    );
    match args.fit_mass.or(section.fit_mass) {
        None => {
            let found = find_resonances_with(&sys, window.0, window.1, &options)?;
            write_json(out, &resonance_rows(&sys, &found)?)
        }
        Some(target) => {
            let bracket = match args.mass_bracket {
                Some(v) => (v[0], v[1]),
                None => section.mass_bracket.unwrap_or((0.5, 2.0)),
            };
            let m0 = CONSTANTS.m_neutron;
            let mass = fit_effective_mass(
                &sys,
                CONSTANTS.nev_to_joule(target),
                (bracket.0 * m0, bracket.1 * m0),
            )?;
            let fitted = sys.with_mass(mass)?;
            let found = find_resonances_with(&fitted, window.0, window.1, &options)?;
            write_json(
                out,
                &FittedResonances {
                    fitted_mass_ratio: mass / m0,
                    resonances: resonance_rows(&fitted, &found)?,
                },
            )
        }
    }
}

/// Reference values for `neutron --check`: (key, value, tolerance, whether
/// the tolerance is relative).
const CHECKS: [(&str, f64, f64, bool); 4] = [
    ("E_r_free_mass", 123.0, 1.0, false),
    ("fitted_mass_ratio", 0.926883, 1e-4, false),
    ("tau_r", 2.36e-7, 0.02, true),
    ("tau_avg", 2.4e-7, 0.05, true),
];

fn check_report(report: &NeutronReport) -> Vec<String> {
    let values = [
        report.e_r_free_mass,
        report.fitted_mass_ratio,
        report.tau_r,
        report.tau_avg,
    ];
    CHECKS
        .iter()
        .zip(values)
        .filter_map(|(&(name, target, tol, relative), value)| {
            let gap = if relative {
                (value / target - 1.0).abs()
            } else {
                (value - target).abs()
            };
            (gap > tol).then(|| {
                let kind = if relative { "relative " } else { "" };
                format!("{name} = {value:e}, expected {target:e} within {kind}{tol:e}")
            })
        })
        .collect()
}

pub fn neutron(args: NeutronArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let section = config::load(args.config.as_deref())?.neutron;
    let constants = match args.constants.or(section.constants.map(PathBuf::from)) {
        Some(path) => {
            let c: PhysicalConstants = config::read_json(&path)?;
            c.validate()?;
            c
        }
        None => CONSTANTS,
    };
    let report = run_neutron_scenario_with(&constants, &scan_options()?)?;
    write_json(out, &report)?;
    if args.check || section.check.unwrap_or(false) {
        let failures = check_report(&report);
        if !failures.is_empty() {
            return Err(CliError::Acceptance(failures.join("; ")));
        }
    }
    Ok(())
}

pub fn sweep(args: SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (file, sys) = setup(&args.common)?;
    let section = file.sweep;
    let energy = args
        .energy
        .or(section.energy)
        .ok_or_else(|| CliError::Parse("field `energy` is required".into()))?;
    let axis = match args
        .axis
        .as_deref()
        .or(section.axis.as_deref())
        .unwrap_or("barrier-width")
    {
        "barrier-width" | "barrier_width" => SweepAxis::BarrierWidth,
        "gap-length" | "gap_length" => SweepAxis::GapLength,
        other => {
            return Err(CliError::Parse(format!(
                "field `axis`: expected `barrier-width` or `gap-length`, got `{other}`"
            )))
        }
    };
    let values: Vec<f64> = args
        .values
        .or(section.values)
        .ok_or_else(|| CliError::Parse("field `values` is required".into()))?
        .into_iter()
        .map(|v| CONSTANTS.angstrom_to_metre(v))
        .collect();
    let format = Format::parse(args.format.as_deref().or(section.format.as_deref()))?;
    let table = hartman_sweep(&sys, CONSTANTS.nev_to_joule(energy), axis, &values)?;
    let records = table.records(&CONSTANTS);
    match format {
        Format::Json => write_json(out, &records),
        Format::Csv => write_csv(
            out,
            &[
                "sweep_value_angstrom",
                "probability",
                "tau_exact_s",
                "tau_asymptotic_s",
                "excess_s",
                "flagged",
            ],
            &records
                .iter()
                .map(|r| {
                    vec![
                        num(r.sweep_value_angstrom),
                        num(r.probability),
                        num(r.tau_exact_s),
                        opt_num(r.tau_asymptotic_s),
                        num(r.excess_s),
                        r.flagged.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    }
}

/// Worst deviation seen so far and where.
#[derive(Default)]
struct Worst {
    value: f64,
    energy: f64,
}

impl Worst {
    fn update(&mut self, value: f64, energy: f64) {
        if value > self.value || value.is_nan() {
            *self = Worst { value, energy };
        }
    }
}

pub fn oracle_check(args: OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (file, sys) = setup(&args.common)?;
    let section = file.oracle_check;
    let u0 = nev(sys.u0);
    let (lo, hi) = (
        args.e_min.or(section.e_min).unwrap_or(0.05 * u0),
        args.e_max.or(section.e_max).unwrap_or(0.95 * u0),
    );
    // A single point probes the middle of the window.
    let energies = match args.points.or(section.points).unwrap_or(200) {
        1 => grid(0.5 * (lo + hi), 0.5 * (lo + hi), 1)?,
        n => grid(lo, hi, n)?,
    };
    let amp_tol = args.amp_tol.or(section.amp_tol).unwrap_or(1e-10);
    let tau_tol = args.tau_tol.or(section.tau_tol).unwrap_or(1e-6);

    let profile = double_barrier_profile(&sys);
    let shift = |e: f64| -> Result<Complex64, tunnelkit::TunnelError> {
        let k = kinematics(&sys, e)?.k;
        Ok(Complex64::from_polar(1.0, k * (2.0 * sys.a + sys.l)))
    };
    let (mut amp, mut tau) = (Worst::default(), Worst::default());
    for &e in &energies {
        let closed = amplitude(&sys, e)?.amplitude;
        let t = solve(&profile, e)?.t;
        amp.update((t - closed).norm() / closed.norm(), e);

        let numeric = wigner_time(sys.hbar, e, 1e-6, (0.0, sys.u0), |x| {
            Ok((solve(&profile, x)?.t * shift(x)?).arg())
        })?;
        let exact = phase_time(&sys, e)?.total;
        tau.update((numeric - exact).abs() / exact.abs(), e);
    }

    let mut text = String::new();
    let _ = writeln!(text, "points: {}", energies.len());
    let _ = writeln!(
        text,
        "max relative amplitude deviation: {:e} at E = {} neV (tolerance {amp_tol:e})",
        amp.value,
        nev(amp.energy)
    );
    let _ = writeln!(
        text,
        "max relative phase-time deviation: {:e} at E = {} neV (tolerance {tau_tol:e})",
        tau.value,
        nev(tau.energy)
    );
    out.write_all(text.as_bytes()).map_err(CliError::Io)?;

    let mut failures = Vec::new();
    if !(amp.value <= amp_tol) {
        failures.push(format!(
            "amplitude deviation {:e} at E = {} neV",
            amp.value,
            nev(amp.energy)
        ));
    }
    if !(tau.value <= tau_tol) {
        failures.push(format!(
            "phase-time deviation {:e} at E = {} neV",
            tau.value,
            nev(tau.energy)
        ));
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Oracle(failures.join("; ")))
    }
}
