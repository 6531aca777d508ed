use thiserror::Error;

/// Errors raised by the tunneling calculations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TunnelError {
    /// An input lies outside the supported regime (e.g. `E >= U0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural parameter is invalid (non-positive width, mass, ...).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Finite-difference stencil would leave `(0, U0)`.
    #[error("finite-difference stencil [{lo:e}, {hi:e}] J leaves the sub-barrier window")]
    Step { lo: f64, hi: f64 },

    /// The phase jumps by more than π/2 between neighbouring stencil points
    /// even after repeated step halving.
    #[error("phase unwrapping failed at E = {energy:e} J (|Δφ| = {jump:.3} rad after {halvings} halvings)")]
    Unwrap {
        energy: f64,
        jump: f64,
        halvings: u32,
    },

    /// Adaptive quadrature hit its depth cap before meeting the tolerance.
    #[error("quadrature did not converge (partial estimate {partial:e})")]
    Quadrature { partial: f64 },

    /// A claimed resonance fails the |A_T|² = 1 certification.
    #[error("resonance at E = {energy:e} J failed validation: |A_T|^2 = {probability}")]
    Validation { energy: f64, probability: f64 },

    /// Breit-Wigner bracket is non-positive or the width underflowed.
    #[error("degenerate resonance at E = {energy:e} J: {reason}")]
    DegenerateResonance { energy: f64, reason: String },

    /// The opaque-barrier bracket is too small; the asymptotic form does not
    /// apply this close to a resonance.
    #[error("opaque-barrier asymptotics invalid near a resonance (bracket = {bracket:e})")]
    NearResonance { bracket: f64 },

    /// Root search bracket has no sign change.
    #[error("no sign change of the resonance residual over the bracket [{lo:e}, {hi:e}]")]
    NoSignChange { lo: f64, hi: f64 },

    /// Plane-wave matching is singular when `E` equals a segment height.
    #[error("energy {energy:e} J coincides with segment height {height:e} J")]
    DegenerateMatching { energy: f64, height: f64 },
}

pub type Result<T> = std::result::Result<T, TunnelError>;
