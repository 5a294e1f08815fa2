use thiserror::Error;

/// Unified error type for the crate.
///
/// Variants map onto the CLI exit-code groups: `Syntax` and
/// `NegativeCoefficient` are usage errors (exit 1), everything else is a
/// domain/computation error (exit 2).
#[derive(Debug, Error)]
pub enum Error {
    /// A value outside the representable set was supplied (non-finite
    /// mantissa, nonpositive scale factor, empty node list, ...).
    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// An operation left its mathematical domain (log of a nonpositive
    /// value, guarded subtraction with `a <= b`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The result has no finite image in the requested representation.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A quotient could not be formed (nonpositive denominator).
    #[error("indeterminate quotient: {0}")]
    Indeterminate(String),

    /// A truncated series was asked about a radius where its tail bound is
    /// no longer negligible.
    #[error("guard radius exceeded: {0}")]
    GuardRadius(String),

    /// The lower sandwich argument `M_g(r/2)/8 - |g(0)|` was nonpositive.
    #[error("nonpositive argument: {0}")]
    NonpositiveArgument(String),

    /// Growth-profile parameters outside the admissible region.
    #[error("inadmissible profile: {0}")]
    Admissibility(String),

    /// No admissible index pair was found within the scan bound.
    #[error("no admissible index pair with p <= {0}")]
    NotFound(u32),

    /// A theorem's side conditions do not hold for the given instance.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Expression text that does not match the grammar.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A negative numeric literal in an expression (the family admits only
    /// nonnegative coefficients).
    #[error("negative coefficient at byte {pos}")]
    NegativeCoefficient { pos: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
