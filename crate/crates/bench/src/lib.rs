//! Fixtures shared by the benchmarks.

use tunnelkit::{neutron_system, BarrierSystem, PhysicalConstants};

pub fn neutron() -> BarrierSystem {
    neutron_system(&PhysicalConstants::CODATA_2018, 1.0).expect("neutron filter is valid")
}

/// `n` energies evenly spread strictly inside `(0, U0)`.
pub fn energy_grid(sys: &BarrierSystem, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| sys.u0 * i as f64 / (n + 1) as f64)
        .collect()
}
