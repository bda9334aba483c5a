use thiserror::Error;

/// Errors surfaced by the library.
///
/// `InvalidInput` covers contract violations (bad parameters, mismatched
/// dimensions), `InfeasibleSpec` covers generative specifications that no
/// data-generating process can realize, and the remaining variants are
/// numerical failures that callers may want to distinguish.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("DTR {dtr} is not embedded in design {design}")]
    DtrNotEmbedded { dtr: String, design: String },

    #[error("infeasible generative spec: {0}")]
    InfeasibleSpec(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("no feasible violation: {0}")]
    NoFeasibleViolation(String),

    #[error("dataset error: {0}")]
    Dataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
