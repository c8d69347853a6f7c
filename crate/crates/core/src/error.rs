use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must lie in the open unit disc (modulus {modulus})")]
    OutsideDisc { what: &'static str, modulus: f64 },

    #[error("{what} must lie in the closed unit disc (modulus {modulus})")]
    OutsideClosedDisc { what: &'static str, modulus: f64 },

    #[error("{what} must be unimodular (modulus {modulus})")]
    NotUnimodular { what: &'static str, modulus: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("branch cut reached: {0}")]
    Branch(String),

    #[error("least-squares system is rank deficient")]
    RankDeficient,

    #[error("left inverse hypothesis violated: residual {residual:e} exceeds {threshold:e}")]
    Hypothesis { residual: f64, threshold: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("family {0} does not apply to this kind of point")]
    FamilyMismatch(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
