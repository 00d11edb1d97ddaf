use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Each variant carries the measured quantity that triggered it so callers
/// can report how far an input was from satisfying the precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hermitian (‖M − M*‖ = {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    IndefiniteInput { min_eigenvalue: f64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("truncation degree {degree} is smaller than the required {required}")]
    TruncationTooSmall { degree: usize, required: usize },
    #[error("operator is not a contraction (‖P‖ = {norm})")]
    NotAContraction { norm: f64 },
    #[error("contraction has a unitary part (spectral radius {spectral_radius})")]
    NotCnu { spectral_radius: f64 },
    #[error("resolvent (I − zP*)⁻¹ is singular at z = {z}")]
    ResolventSingular { z: String },
    #[error("iteration did not converge after {iterations} steps (last delta {last_delta:e})")]
    NonConvergence { iterations: usize, last_delta: f64 },
    #[error("operators do not commute (‖SP − PS‖ = {commutator_norm:e})")]
    NotCommuting { commutator_norm: f64 },
    #[error("pair is not in pure-model block form (off-block residual {residual:e})")]
    NotPureModelForm { residual: f64 },
    #[error("pair did not classify as a Γ-contraction ({kind})")]
    ClassificationFailed { kind: String },
    #[error("residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
    #[error("operator is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("embedding is not a dilation (‖V*Π − ΠP*‖ = {residual:e})")]
    NotADilation { residual: f64 },
    #[error("non-finite entry in matrix input")]
    NonFinite,
    #[error("decomposition failed to converge: {0}")]
    Decomposition(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::IndefiniteInput { .. } => "IndefiniteInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::TruncationTooSmall { .. } => "TruncationTooSmall",
            Error::NotAContraction { .. } => "NotAContraction",
            Error::NotCnu { .. } => "NotCnu",
            Error::ResolventSingular { .. } => "ResolventSingular",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::NotCommuting { .. } => "NotCommuting",
            Error::NotPureModelForm { .. } => "NotPureModelForm",
            Error::ClassificationFailed { .. } => "ClassificationFailed",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::NotADilation { .. } => "NotADilation",
            Error::NonFinite => "NonFinite",
            Error::Decomposition(_) => "Decomposition",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    pub(crate) fn dims(context: impl Into<String>) -> Self {
        Error::DimensionMismatch { context: context.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
