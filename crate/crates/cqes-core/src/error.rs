//! Error type shared across the library.
//!
//! Numerical diagnostics that are expected outcomes of a computation
//! (per-level convergence, discarded complex pairs, tracking warnings)
//! live in the result types instead; only conditions that prevent a
//! meaningful answer surface here.

use crate::irrep::Irrep;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// ζ = β² must be strictly positive; ζ ≤ 0 leaves β undefined.
    #[error("zeta must be > 0 (got {zeta}); beta = ±sqrt(zeta) is undefined otherwise")]
    NonPositiveZeta { zeta: f64 },

    /// Parameters outside their domain (non-finite, κ < 0, β = 0, …).
    #[error("invalid coupling parameters: {reason}")]
    InvalidParams { reason: String },

    /// κ is not a positive integer of the parity the irrep requires, so no
    /// finite analytic block exists.
    #[error("no analytic block: kappa = {kappa} is not C-QES for irrep {irrep}")]
    NotCqes { kappa: f64, irrep: Irrep },

    /// The operator carries no split index (non-integer κ or wrong parity).
    #[error("operator has no exact sub-diagonal zero to split at")]
    NoSplit,

    /// Requested dimension cannot hold the analytic block.
    #[error("dimension {dim} too small: the analytic block needs {required} basis functions")]
    DimensionTooSmall { dim: usize, required: usize },

    /// Exact closed-form root extraction is limited to blocks of size ≤ 4.
    #[error("block size {n} exceeds the quartic closed-form limit of 4")]
    BlockTooLarge { n: usize },

    /// A closed-form energy retained a non-negligible imaginary part.
    #[error("closed-form energy has residual imaginary part {im:e} (limit {limit:e})")]
    ComplexEnergy { im: f64, limit: f64 },

    /// The simple-spectrum safeguard tripped: two block eigenvalues collided.
    #[error("analytic block eigenvalues separated by only {gap:e}; refusing to continue")]
    DegenerateBlock { gap: f64 },

    /// Truncated monomial-basis diagonalization is meaningless for the
    /// hyperbolic system: the gauge factor exp(β cosh x) is not a damping
    /// envelope for an infinite power series tail, so truncation does not
    /// converge to bound states.
    #[error("truncated tridiagonal diagonalization is defined for the trigonometric system only")]
    HyperbolicNotSupported,

    /// Assembling a hyperbolic wavefunction from a truncated (non-analytic)
    /// coefficient tail would produce a non-normalizable function.
    #[error("hyperbolic wavefunction assembly requires an exact finite coefficient vector; a truncated tail diverges")]
    HyperbolicDivergence,

    /// Hyperbolic grid levels moved under box doubling, or the box wall sits
    /// below the requested energy window.
    #[error("periodic box too small: {reason}")]
    BoxTooSmall { reason: String },

    /// The two spectra handed to a convergence comparison used different
    /// physical parameters or systems.
    #[error("mismatched parameters: {reason}")]
    MismatchedParams { reason: String },

    /// Symmetry classification failed because the function vanished at every
    /// probe point.
    #[error("symmetry indeterminate: |psi| below 1e-12 at all probe points")]
    Indeterminate,

    /// κ ≤ 2|β|: the hyperbolic potential has a single minimum, so there is
    /// no double-Morse separation to report.
    #[error("not a double well: kappa = {kappa} <= 2|beta| = {two_abs_beta}")]
    NotDoubleWell { kappa: f64, two_abs_beta: f64 },

    /// Dense eigensolver did not converge (pathological input).
    #[error("eigensolver failed to converge: {context}")]
    EigenFailure { context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
