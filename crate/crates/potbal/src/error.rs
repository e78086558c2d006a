//! Crate-wide error type.
//!
//! Every fallible operation in the library returns [`Error`]. The variants
//! name precondition violations of the mathematical operators (a point on
//! the wrong side of an axis, an origin atom fed to a kernel with a pole at
//! zero, ...) plus the two numeric failure modes (quadrature budget
//! exhaustion, divergent supremum estimates).

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A vertical line crosses a region boundary, so restriction would have
    /// to split it. Lines are kept whole or dropped whole, never clipped.
    #[error("line x={x} partially overlaps the region boundary")]
    PartialLineOverlap { x: f64 },

    /// The operation is defined for purely atomic distributions but the
    /// input carries line masses (for example a quarter rotation, which
    /// would turn vertical lines into horizontal ones).
    #[error("operation requires an atomic distribution, but line masses are present")]
    LinePresent,

    /// A submeasure or gauge was asked for on a signed distribution; it is
    /// only defined for nonnegative masses.
    #[error("mass distribution required: input carries negative masses")]
    SignedInput,

    /// The half-plane harmonic-measure kernel was evaluated at a point with
    /// negative real part.
    #[error("harmonic measure kernel requires Re z >= 0, got Re z = {re}")]
    LeftHalfPlanePoint { re: f64 },

    /// A kernel with a pole at the origin was evaluated at zero.
    #[error("kernel undefined at the origin")]
    OriginPoint,

    /// The construction requires the origin to lie outside the support.
    #[error("origin lies in the support of the distribution")]
    OriginInSupport,

    /// The convergence check near the origin failed: the right-half-plane
    /// part of the input does not satisfy the half-plane convergence
    /// condition within the shrinking-radius schedule.
    #[error("half-plane convergence condition violated near the origin")]
    BlaschkeViolated,

    /// A distribution function was requested on a line the boundary charge
    /// does not carry.
    #[error("boundary charge has no target line at x={x}")]
    NoSuchLine { x: f64 },

    /// The adaptive integrator ran out of budget before reaching the
    /// requested tolerance.
    #[error("quadrature failed to reach tolerance {tol:e} (error estimate {estimate:e})")]
    QuadratureFailure { tol: f64, estimate: f64 },

    /// A supremum that the construction needs finite came out non-finite.
    #[error("supremum estimate is not finite")]
    UnboundedSup,

    /// The support of an input lies outside the region the operation
    /// requires.
    #[error("support violates the required region: {detail}")]
    SupportViolation { detail: String },

    /// A growth-condition check that is a precondition of the construction
    /// came back non-bounded.
    #[error("growth condition check failed: {detail}")]
    LindelofFailed { detail: String },

    /// The left/right comparison precondition of the real-axis completion
    /// failed (left-half-plane logarithmic measure outruns the right one).
    #[error("left/right logarithmic comparison condition failed")]
    ConditionMuRhFailed,

    /// Two radius profiles cannot be ordered pointwise by the analytic
    /// comparison rules, so the chain check refuses to guess.
    #[error("radius profiles are not comparable pointwise")]
    IncomparableProfiles,
}
