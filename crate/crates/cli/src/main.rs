// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tunnelkit::TunnelError;

use crate::config::SystemSpec;

/// Transmission, resonances and phase-times for two equal rectangular
/// barriers. Lengths in Å, energies in neV, mass as a multiple of the
/// neutron mass.
#[derive(Debug, Parser)]
#[command(name = "tunnelkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate |A_T|² and the phase-time over an energy grid.
    Transmission(TransmissionArgs),
    /// List resonances with widths and delays; optionally fit the mass first.
    Resonances(ResonanceArgs),
    /// Reproduce the cold-neutron filter numbers.
    Neutron(NeutronArgs),
    /// Exact and thick-barrier phase-times while a width or gap varies.
    Sweep(SweepArgs),
    /// Compare closed forms against the transfer-matrix solver.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Barrier width a [Å].
    #[arg(long = "width")]
    a: Option<f64>,
    /// Barrier height U0 [neV].
    #[arg(long = "height")]
    u0: Option<f64>,
    /// Gap L between the barriers [Å].
    #[arg(long = "gap")]
    l: Option<f64>,
    /// Particle mass in units of the neutron mass.
    #[arg(long)]
    mass_ratio: Option<f64>,
}

impl Common {
    fn system(&self) -> SystemSpec {
        SystemSpec {
            a: self.a,
            u0: self.u0,
            l: self.l,
            mass_ratio: self.mass_ratio,
        }
    }
}

#[derive(Debug, Args)]
struct TransmissionArgs {
    #[command(flatten)]
    common: Common,
    /// Lowest grid energy [neV].
    #[arg(long)]
    e_min: Option<f64>,
    /// Highest grid energy [neV].
    #[arg(long)]
    e_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct ResonanceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    e_min: Option<f64>,
    #[arg(long)]
    e_max: Option<f64>,
    /// Fit the mass so that a resonance sits at this energy [neV].
    #[arg(long)]
    fit_mass: Option<f64>,
    /// Mass bracket for the fit, as `lo,hi` in units of the neutron mass.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    mass_bracket: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct NeutronArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON file with `hbar`, `m_neutron`, `neV_per_J`, `m_per_angstrom`.
    #[arg(long)]
    constants: Option<PathBuf>,
    /// Exit with status 4 unless every reference value is reproduced.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Fixed energy [neV].
    #[arg(long)]
    energy: Option<f64>,
    /// `barrier-width` or `gap-length`.
    #[arg(long)]
    axis: Option<String>,
    /// Swept lengths [Å], ascending.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    e_min: Option<f64>,
    #[arg(long)]
    e_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Largest accepted relative amplitude deviation.
    #[arg(long)]
    amp_tol: Option<f64>,
    /// Largest accepted relative phase-time deviation.
    #[arg(long)]
    tau_tol: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Domain(String),
    Acceptance(String),
    Oracle(String),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Acceptance(_) => 4,
            CliError::Oracle(_) => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "configuration error: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
            CliError::Acceptance(m) => write!(f, "check failed: {m}"),
            CliError::Oracle(m) => write!(f, "oracle check failed: {m}"),
            CliError::Io(e) => write!(f, "output error: {e}"),
        }
    }
}

impl From<TunnelError> for CliError {
    fn from(e: TunnelError) -> Self {
        match e {
            TunnelError::InvalidParameter { .. } => CliError::Parse(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Transmission(args) => commands::transmission(args, out),
        Command::Resonances(args) => commands::resonances(args, out),
        Command::Neutron(args) => commands::neutron(args, out),
        Command::Sweep(args) => commands::sweep(args, out),
        Command::OracleCheck(args) => commands::oracle_check(args, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("tunnelkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
