use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors surfaced by every module of the crate.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} must be an odd prime (p >= 3)")]
    EvenOrTooSmall(u64),
    #[error("modulus {0} exceeds the supported range (p < 2^63)")]
    ModulusOutOfRange(u128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields (F_{0} vs F_{1})")]
    FieldMismatch(u64, u64),
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index {index} out of range 1..={n}")]
    VariableIndexOutOfRange { index: usize, n: usize },
    #[error("degree {degree} is not below the characteristic {p}")]
    DegreeNotBelowP { degree: u32, p: u64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not invariant under the given shift")]
    NotInvariantUnderU,
    #[error("shift vector is zero")]
    ZeroShift,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("enumeration budget exceeded: {needed} candidates > cap {cap}")]
    BudgetExceeded { needed: u128, cap: u64 },
    #[error("radius {h} too large for F_{p} (need 2h < p)")]
    RadiusTooLarge { h: u64, p: u64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("missing or inconsistent metadata: {0}")]
    MetadataMissing(String),
    #[error("degree {0} too small (need at least 2)")]
    DegreeTooSmall(u32),
    #[error("rank bound s = {s} must be below min(m, n) = {min}")]
    RankBoundInvalid { s: usize, min: usize },
    #[error("prime {p} too small: need p > {bound}")]
    PrimeTooSmall { p: u64, bound: u64 },
    #[error("symbolic size n + m = {0} exceeds the supported range (<= 8)")]
    SymbolicSizeExceeded(usize),
    #[error("not an equal-subset-sum certificate: {0}")]
    NotACertificate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable identifier for reports and exit-code mapping.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::EvenOrTooSmall(_) => "EvenOrTooSmall",
            Error::ModulusOutOfRange(_) => "ModulusOutOfRange",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::Syntax { .. } => "SyntaxError",
            Error::VariableIndexOutOfRange { .. } => "VariableIndexOutOfRange",
            Error::DegreeNotBelowP { .. } => "DegreeNotBelowP",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotInvariantUnderU => "NotInvariantUnderU",
            Error::ZeroShift => "ZeroShift",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::RadiusTooLarge { .. } => "RadiusTooLarge",
            Error::DimensionMismatch(..) => "DimensionMismatch",
            Error::MetadataMissing(_) => "MetadataMissing",
            Error::DegreeTooSmall(_) => "DegreeTooSmall",
            Error::RankBoundInvalid { .. } => "RankBoundInvalid",
            Error::PrimeTooSmall { .. } => "PrimeTooSmall",
            Error::SymbolicSizeExceeded(_) => "SymbolicSizeExceeded",
            Error::NotACertificate(_) => "NotACertificate",
            Error::Invalid(_) => "InvalidInput",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
