use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A truncated computation left no certified coefficients.
    #[error("precision exhausted in {op}: {detail} (raise --z-hi or --tau-cap)")]
    PrecisionExhausted { op: &'static str, detail: String },

    #[error("not invertible: leading coefficient {0}")]
    NotInvertible(String),

    #[error("exponential does not terminate: {0}")]
    NonTerminating(String),

    #[error("not holomorphic at 0: pole part {0}")]
    NotHolomorphic(String),

    #[error("not a coideal: cotree {0} is missing from the basis")]
    NotCoideal(String),

    #[error("matrix is not unipotent: {0}")]
    NotUnipotent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value for {0} requested before it was computed")]
    MissingLowerDegree(String),

    #[error("degree {degree} exceeds the computed range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("not in G^Phi or insufficient window: {0}")]
    NotLocal(String),

    /// Two routes that must agree did not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("unknown {kind} '{name}' (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
