use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation requires SI units but the context is dimensionless")]
    RequiresSi,
    #[error("operation requires dimensionless units but the context is SI")]
    RequiresDimensionless,
    #[error("dimensionless context has no rho0 override")]
    MissingRho0,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("speed {beta} c is not strictly subluminal")]
    Superluminal { beta: f64 },
    #[error("proper acceleration must be positive, got {0}")]
    NonPositiveAcceleration(f64),
    #[error("stencil crosses the support boundary of the field")]
    StencilCrossesSupport,
    #[error("stencil point has |a.v/a| = {ratio} below the support margin {margin}")]
    MarginViolation { ratio: f64, margin: f64 },
    #[error("field vanishes at the evaluation point")]
    VanishingField,
    #[error("residuals are at the round-off floor; convergence slope is meaningless")]
    NoiseFloor,
    #[error("mode index {index} out of range for a lattice of {len} modes")]
    InvalidModeIndex { index: usize, len: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
