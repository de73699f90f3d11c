use thiserror::Error;

/// Errors raised by the library operations.
///
/// Each variant has a stable machine-readable [`Error::code`] which the task
/// runner copies into its result records.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sublattice is not contained in the numerator lattice")]
    NotContained,
    #[error("quotient is infinite: numerator rank {numerator} exceeds denominator rank {denominator}")]
    InfiniteQuotient { numerator: usize, denominator: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("representative is not killed by the norm")]
    NormNonzero,
    #[error("representative is invalid: {0}")]
    RepresentativeInvalid(String),
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("level exponent {n} is not a multiple of the exponent {exponent} of the band quotient")]
    ExponentMismatch { n: String, exponent: String },
    #[error("computed group {computed} differs from the closed form {expected}")]
    FormulaMismatch { computed: String, expected: String },
    #[error("divisibility violated: {0}")]
    DivisibilityViolated(String),
    #[error("map of Galois groups is not surjective")]
    NotSurjective,
    #[error("Weyl group exceeds the configured bound of {bound} elements")]
    TooLarge { bound: usize },
    #[error("character does not vanish on the required sublattice ({0})")]
    CharacterNotPlus(String),
    #[error("selected coroot set is not stable under the Galois action")]
    NotGaloisStable,
    #[error("series is zero within its precision")]
    ZeroWithinPrecision,
    #[error("precision insufficient to decide {0}")]
    PrecisionInsufficient(String),
    #[error("element is not strongly regular")]
    NotStronglyRegular,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotContained => "NotContained",
            Error::InfiniteQuotient { .. } => "InfiniteQuotient",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NormNonzero => "NormNonzero",
            Error::RepresentativeInvalid(_) => "RepresentativeInvalid",
            Error::NotEquivariant(_) => "NotEquivariant",
            Error::ExponentMismatch { .. } => "ExponentMismatch",
            Error::FormulaMismatch { .. } => "FormulaMismatch",
            Error::DivisibilityViolated(_) => "DivisibilityViolated",
            Error::NotSurjective => "NotSurjective",
            Error::TooLarge { .. } => "TooLarge",
            Error::CharacterNotPlus(_) => "CharacterNotPlus",
            Error::NotGaloisStable => "NotGaloisStable",
            Error::ZeroWithinPrecision => "ZeroWithinPrecision",
            Error::PrecisionInsufficient(_) => "PrecisionInsufficient",
            Error::NotStronglyRegular => "NotStronglyRegular",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
