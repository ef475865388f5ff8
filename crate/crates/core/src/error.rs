use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a root computation concluded the input is not a perfect power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotAPowerReason {
    /// The lowest exponent `u` is not divisible by `r`.
    TrailingExponent,
    /// `deg f - u` is not divisible by `r`.
    Degree,
    /// The trailing coefficient has no `r`-th root in the coefficient ring.
    TrailingCoefficient,
    /// The candidate root has non-integral coefficients.
    NonIntegral,
    /// The logarithmic-derivative certificate rejected the candidate.
    CertificateFailed,
    /// A partial degree of a multivariate input is not divisible by `r`.
    PartialDegree,
}

impl std::fmt::Display for NotAPowerReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NotAPowerReason::TrailingExponent => "trailing exponent not divisible by r",
            NotAPowerReason::Degree => "degree not divisible by r",
            NotAPowerReason::TrailingCoefficient => "trailing coefficient is not an r-th power",
            NotAPowerReason::NonIntegral => "root has non-integral coefficients",
            NotAPowerReason::CertificateFailed => "certificate f'h = r h'f failed",
            NotAPowerReason::PartialDegree => "partial degree not divisible by r",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different coefficient rings")]
    RingMismatch,
    #[error("operands have different variable counts ({0} vs {1})")]
    VariableMismatch(usize, usize),
    #[error("cannot divide by x^{shift}: term of exponent {exp} lies below it")]
    ShiftBelowTerm { shift: BigUint, exp: BigUint },
    #[error("power-series division needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("division by a non-invertible element")]
    NotInvertible,
    #[error("degree {degree} exceeds the dense guard of {guard} coefficients")]
    DenseGuard { degree: BigUint, guard: usize },
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("no admissible prime found in [{lo}, {hi}]")]
    PrimeSearchExhausted { lo: BigUint, hi: BigUint },
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("r = {r} does not divide the multiplicative group order")]
    ResidueOrder { r: u64 },
    #[error("exponent r = {0} must be prime")]
    ExponentNotPrime(u64),
    #[error("exponent r = {0} must be at least 2")]
    ExponentTooSmall(u64),
    #[error("r = {r} does not divide the degree {degree}")]
    ExponentDoesNotDivideDegree { r: u64, degree: BigUint },
    #[error("field characteristic {characteristic} must exceed the degree {degree}")]
    CharacteristicTooSmall {
        characteristic: BigUint,
        degree: BigUint,
    },
    #[error("input has fewer than two terms")]
    MonomialInput,
    #[error("degree must be at least 2")]
    DegreeTooSmall,
    #[error("failure bound must satisfy 0 < epsilon < 1, got {0}")]
    InvalidEpsilon(String),
    #[error("a negative integer has no even root")]
    EvenRootOfNegative,
    #[error("not a perfect power: {0}")]
    NotAPower(NotAPowerReason),
    #[error("intermediate sparsity {terms} exceeded the ceiling {ceiling}")]
    SparsityCeiling { terms: usize, ceiling: usize },
    #[error("root extraction did not converge after {0} splitting attempts")]
    RootFindingExhausted(usize),
    #[error("coefficient would exceed {0} bits")]
    CoefficientTooLarge(u64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
