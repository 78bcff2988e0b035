use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational {0:?}: expected decimal-free p/q")]
    Rational(String),
    #[error("malformed charge {0:?}: expected \"r,e\" with r >= 1")]
    Charge(String),
    #[error("malformed chamber {0:?}: expected delta=p/q[+|-], 0-, 0+, inf or -inf")]
    Chamber(String),
    #[error("theory field `{field}`: {message}")]
    Theory { field: String, message: String },
}

impl ParseError {
    pub(crate) fn theory(field: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError::Theory {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("rank {rank} outside the supported range 1..={cap}")]
    RankOutOfRange { rank: i64, cap: i64 },
    #[error("critical parameter {delta} for charge {charge} (nearest walls: below {below}, above {above})")]
    Critical {
        charge: String,
        delta: String,
        below: String,
        above: String,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not in the Lie subspace: {0}")]
    NotLie(String),
    #[error("invalid theory: {0}")]
    InvalidTheory(String),
}
