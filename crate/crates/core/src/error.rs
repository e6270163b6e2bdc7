use thiserror::Error;

/// Failures surfaced by the exact, fixed-point and series layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument `{name}` out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("fixed-point division by zero")]
    DivisionByZero,

    #[error("series level must be at least 2, got {0}")]
    LevelTooSmall(u32),

    #[error("operands carry different scales ({0} vs {1} fractional bits)")]
    ScaleMismatch(u32, u32),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
