use thiserror::Error;

use crate::series::OrderValue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime number")]
    InvalidPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("mismatched coefficient fields or variable sets: {0}")]
    IncompatibleOperands(String),
    #[error("series has order {0} and is not a unit")]
    NotAUnit(OrderValue),
    #[error("denominator has zero constant term")]
    DenominatorNotUnit,
    #[error("generator {generator} does not vanish along the arc (first nonzero coefficient at t^{order})")]
    NotOnVariety { generator: usize, order: u64 },
    #[error("level {level} needs precision above {level}, arc has precision {precision}")]
    PrecisionTooLow { level: usize, precision: usize },
    #[error("jet generator F[{generator},{power}] does not vanish at the supplied point")]
    PointNotOnJetScheme { generator: usize, power: usize },
    #[error("matrix of size {rows}x{cols} exceeds the brute-force bound {bound}")]
    MatrixTooLarge {
        rows: usize,
        cols: usize,
        bound: usize,
    },
    #[error("result is precision-limited: {0}")]
    PrecisionLimited(String),
    #[error("variety has no declared dimension")]
    MissingDeclaredDim,
    #[error("morphism does not map the arc into the target: target generator {generator} has order {order}")]
    MorphismInvalidOnArc { generator: usize, order: OrderValue },
    #[error("ord of the Jacobian ideal ({order}) is not divisible by q = {q}")]
    NonDivisibleJacobianOrder { order: u64, q: u64 },
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable error name, as surfaced in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_) => "InvalidPrime",
            Error::DivisionByZero => "DivisionByZero",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::IncompatibleOperands(_) => "IncompatibleOperands",
            Error::NotAUnit(_) => "NotAUnit",
            Error::DenominatorNotUnit => "DenominatorNotUnit",
            Error::NotOnVariety { .. } => "NotOnVariety",
            Error::PrecisionTooLow { .. } => "PrecisionTooLow",
            Error::PointNotOnJetScheme { .. } => "PointNotOnJetScheme",
            Error::MatrixTooLarge { .. } => "MatrixTooLarge",
            Error::PrecisionLimited(_) => "PrecisionLimited",
            Error::MissingDeclaredDim => "MissingDeclaredDim",
            Error::MorphismInvalidOnArc { .. } => "MorphismInvalidOnArc",
            Error::NonDivisibleJacobianOrder { .. } => "NonDivisibleJacobianOrder",
            Error::Parse { .. } => "ParseError",
            Error::InvalidInput(_) => "InvalidInput",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }

    /// Module that raises this error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_)
            | Error::DivisionByZero
            | Error::UnknownVariable(_)
            | Error::IncompatibleOperands(_) => "exact-algebra",
            Error::NotAUnit(_) | Error::DenominatorNotUnit => "power-series",
            Error::NotOnVariety { .. } | Error::PrecisionTooLow { .. } => "arc-model",
            Error::PointNotOnJetScheme { .. } => "hasse-schmidt",
            Error::MatrixTooLarge { .. } => "invariant-factors",
            Error::PrecisionLimited(_)
            | Error::MissingDeclaredDim
            | Error::MorphismInvalidOnArc { .. }
            | Error::NonDivisibleJacobianOrder { .. }
            | Error::InvariantViolation(_) => "arc-analysis",
            Error::Parse { .. } | Error::InvalidInput(_) => "cli",
        }
    }
}
