use thiserror::Error;

/// Errors raised by the arithmetic layer: parsing, ring bookkeeping, overflow.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("zero denominator at position {position}")]
    ZeroDenominator { position: usize },
    #[error("exponent {value} exceeds the cap {cap}")]
    ExponentOverflow { value: u64, cap: u64 },
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("exponent vectors of lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
}

/// Errors raised by ideal, filtration and analysis computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("computation budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },
    #[error("quotient is not Artinian: no pure power of variable {variable} among leading terms")]
    NotArtinian { variable: usize },
    #[error("ideal is not m-primary")]
    NotMPrimary,
    #[error("colon by the zero ideal is undefined")]
    ZeroColonDivisor,
    #[error("unsupported filtration: {0}")]
    UnsupportedFiltration(String),
    #[error("filtration axiom violated: {0}")]
    FiltrationAxiom(String),
    #[error("Hilbert series did not stabilize up to n = {n_max}")]
    StabilizationNotReached { n_max: usize },
    #[error("Ratliff-Rush chain for n = {n} not stable after k = {k_max}; colengths so far {partial:?}")]
    RatliffRushNotStable {
        n: usize,
        k_max: usize,
        partial: Vec<u64>,
    },
    #[error("superficial certification failed after {attempts} samples; last b-sequence {last_window:?}")]
    CertificationFailed {
        attempts: usize,
        last_window: Vec<u64>,
    },
    #[error("no reduction with reduction number <= {r_max} found after {attempts} samples")]
    NoReductionFound { r_max: usize, attempts: usize },
    #[error("not a reduction: c*a^r != a^(r+1) for all r <= {r_max}")]
    NotAReduction { r_max: usize },
    #[error("hypothesis not verified: {0}")]
    HypothesisNotVerified(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// Resource errors: the computation could continue with larger limits.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::StabilizationNotReached { .. }
                | Error::RatliffRushNotStable { .. }
                | Error::NoReductionFound { .. }
                | Error::CertificationFailed { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
