//! Brute-force 1D scattering off piecewise-constant potentials.
//!
//! Each segment maps `(ψ, ψ')` at its left edge to `(ψ, ψ')` at its right
//! edge; the product over all segments is matched to an incident plus
//! reflected wave on the left and a transmitted wave on the right. Nothing
//! here reuses the closed-form double-barrier code, so agreement between the
//! two is evidence rather than tautology.

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::{Result, TunnelError};
use crate::kinematics::BarrierSystem;

/// Relative closeness of `E` to a segment height treated as singular.
pub const DEGENERATE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    /// Metres.
    pub width: f64,
    /// Joules.
    pub height: f64,
}

/// Potential that is zero outside `[0, Σ widths]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    pub segments: Vec<Segment>,
    pub mass: f64,
    pub hbar: f64,
}

impl PotentialProfile {
    pub fn new(segments: Vec<Segment>, mass: f64) -> Result<Self> {
        for s in &segments {
            if !(s.width > 0.0 && s.width.is_finite() && s.height.is_finite()) {
                return Err(TunnelError::InvalidParameter {
                    name: "segment",
                    reason: format!("width must be positive and finite, got {:?}", s),
                });
            }
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(TunnelError::InvalidParameter {
                name: "mass",
                reason: format!("must be positive, got {mass}"),
            });
        }
        Ok(PotentialProfile {
            segments,
            mass,
            hbar: HBAR,
        })
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.width).sum()
    }
}

/// `[(a, U0), (L, 0), (a, U0)]`, origin at the left edge of the first
/// barrier. A closed gap merges into one barrier of width `2a`.
pub fn double_barrier_profile(sys: &BarrierSystem) -> PotentialProfile {
    let barrier = Segment {
        width: sys.a,
        height: sys.u0,
    };
    let segments = if sys.l > 0.0 {
        vec![
            barrier,
            Segment {
                width: sys.l,
                height: 0.0,
            },
            barrier,
        ]
    } else {
        vec![Segment {
            width: 2.0 * sys.a,
            height: sys.u0,
        }]
    };
    PotentialProfile {
        segments,
        mass: sys.m,
        hbar: sys.hbar,
    }
}

/// Real 2×2 map of `(ψ, ψ')`, stored as `exp(log_scale)·m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: [[f64; 2]; 2],
    pub log_scale: f64,
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix {
        m: [[1.0, 0.0], [0.0, 1.0]],
        log_scale: 0.0,
    };

    /// Matrix of one segment at energy `energy`.
    pub fn segment(seg: &Segment, energy: f64, mass: f64, hbar: f64) -> Result<Self> {
        let gap = energy - seg.height;
        if gap.abs() <= DEGENERATE_REL * energy.abs().max(seg.height.abs()) {
            return Err(TunnelError::DegenerateMatching {
                energy,
                height: seg.height,
            });
        }
        let kappa = (2.0 * mass * gap.abs()).sqrt() / hbar;
        let x = kappa * seg.width;
        if gap > 0.0 {
            let (s, c) = x.sin_cos();
            Ok(TransferMatrix {
                m: [[c, s / kappa], [-kappa * s, c]],
                log_scale: 0.0,
            })
        } else {
            // cosh x = e^x (1 + e^{-2x})/2, sinh x = e^x (1 − e^{-2x})/2
            let e2 = (-2.0 * x).exp();
            let c = 0.5 * (1.0 + e2);
            let s = 0.5 * (1.0 - e2);
            Ok(TransferMatrix {
                m: [[c, s / kappa], [kappa * s, c]],
                log_scale: x,
            })
        }
    }

    /// Apply `self` first, then `next`.
    pub fn then(&self, next: &TransferMatrix) -> TransferMatrix {
        let (a, b) = (&next.m, &self.m);
        let mut m = [[0.0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let mut log_scale = self.log_scale + next.log_scale;
        let peak = m.iter().flatten().fold(0.0_f64, |p, v| p.max(v.abs()));
        if peak > 0.0 && !(1e-100..=1e100).contains(&peak) {
            m.iter_mut().flatten().for_each(|v| *v /= peak);
            log_scale += peak.ln();
        }
        TransferMatrix { m, log_scale }
    }

    /// Unscaled entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i][j] * self.log_scale.exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterSolution {
    /// Coefficient of `exp(ikx)` to the right of the structure.
    pub t: Complex64,
    /// Coefficient of `exp(−ikx)` to the left.
    pub r: Complex64,
}

pub fn transfer_matrix(profile: &PotentialProfile, energy: f64) -> Result<TransferMatrix> {
    profile
        .segments
        .iter()
        .try_fold(TransferMatrix::IDENTITY, |acc, seg| {
            Ok(acc.then(&TransferMatrix::segment(
                seg,
                energy,
                profile.mass,
                profile.hbar,
            )?))
        })
}

pub fn solve(profile: &PotentialProfile, energy: f64) -> Result<ScatterSolution> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(TunnelError::Domain(format!(
            "scattering energy must be positive, got {energy:e}"
        )));
    }
    let total = transfer_matrix(profile, energy)?;
    Ok(match_plane_waves(&total, energy, profile))
}

/// With `ψ = e^{ikx} + r e^{−ikx}` at `x = 0` and `ψ = T e^{ik(x − d)}` at
/// `x = d`, inverting the unimodular matrix gives
/// `T = 2 / [m₁₁ + m₂₂ + i(m₂₁/k − k m₁₂)]` and `r = T(m₂₂ − ik m₁₂) − 1`.
fn match_plane_waves(
    total: &TransferMatrix,
    energy: f64,
    profile: &PotentialProfile,
) -> ScatterSolution {
    let k = (2.0 * profile.mass * energy).sqrt() / profile.hbar;
    let [[m11, m12], [m21, m22]] = total.m;
    let den = Complex64::new(m11 + m22, m21 / k - k * m12);
    let r = 2.0 * Complex64::new(m22, -k * m12) / den - 1.0;
    let t_at_exit = 2.0 * (-total.log_scale).exp() / den;
    let t = t_at_exit * Complex64::from_polar(1.0, -k * profile.length());
    ScatterSolution { t, r }
}
