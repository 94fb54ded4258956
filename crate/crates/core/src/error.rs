use thiserror::Error;

/// Every failure the engine can report.
///
/// A missing miracle is not an error; see [`crate::derive::Derivation`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,

    #[error("division by the zero rational function")]
    DivisionByZeroRatFun,

    #[error("result is not a formal power series: denominator vanishes at q = 0")]
    NonSeriesResult,

    #[error("section {i} of R vanishes for m = {m}; F cannot be recovered from F_{i}")]
    SectionVanishes { m: u64, i: u64 },

    #[error("denominator constant term {constant} is not a unit mod {m}")]
    NonUnitDenominator { constant: String, m: u64 },

    #[error("coefficient {value} is not integral mod {m}")]
    NonIntegralCoefficient { value: String, m: u64 },

    #[error("R(0) = 1 and S is nonzero with S(0) = 0: the normalization F(0) must be given explicitly")]
    AmbiguousNormalization,

    #[error("R(0) = 1 and S(0) != 0: the functional equation has no power-series solution")]
    NoSolution,

    #[error("infinite product diverges: R(0) = {0}, expected 1")]
    ProductDiverges(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("expression uses m at position {pos} but no value for m was given")]
    UnboundM { pos: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl Error {
    /// Short stable name, used in scan tables and JSON records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZeroPoly => "DivisionByZeroPoly",
            Error::DivisionByZeroRatFun => "DivisionByZeroRatFun",
            Error::NonSeriesResult => "NonSeriesResult",
            Error::SectionVanishes { .. } => "SectionVanishes",
            Error::NonUnitDenominator { .. } => "NonUnitDenominator",
            Error::NonIntegralCoefficient { .. } => "NonIntegralCoefficient",
            Error::AmbiguousNormalization => "AmbiguousNormalization",
            Error::NoSolution => "NoSolution",
            Error::ProductDiverges(_) => "ProductDiverges",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnboundM { .. } => "UnboundM",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::InternalInvariant(_) => "InternalInvariant",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
