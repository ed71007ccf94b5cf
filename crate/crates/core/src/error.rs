use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: rectangle has {rect} coordinates but the distribution has {dist}")]
    DimensionMismatch { rect: usize, dist: usize },

    #[error("deck of {cards} cards exceeds the exhaustive oracle cap of {cap}")]
    OracleCap { cards: usize, cap: usize },

    #[error("cannot parse number {0:?}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
