use thiserror::Error;

pub use crate::pareto::AxiomReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported cone: {0}")]
    UnsupportedCone(String),
    #[error("axiom {} fails", .0.axiom.name())]
    AxiomFailed(Box<AxiomReport>),
    #[error("domain richness does not hold")]
    DRRequired,
    #[error("representation check failed: {0}")]
    NotRepresenting(String),
    #[error("value at the empty event is not zero")]
    NotZeroAtEmpty,
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context: context.to_string(),
            expected,
            found,
        })
    }
}
