use thiserror::Error;

/// Failures raised anywhere in the library.
///
/// Every variant has a stable [`code`](Error::code) used by the CLI error
/// records, and is classified as either a validation failure or a numerical
/// guard by [`Error::is_numerical_guard`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("Lie-algebra relation violated (residual {residual:.3e})")]
    AlgebraViolation { residual: f64 },

    #[error("zero mode at index {index} (lambda = {lambda:.3e})")]
    ZeroMode { index: usize, lambda: f64 },

    #[error("matrix function diverges at lambda = {lambda:.3e}")]
    SingularFunction { lambda: f64 },

    #[error("basis change matrix is singular (condition estimate {condition:.3e})")]
    SingularBasis { condition: f64 },

    #[error("state is not Gaussian: |J^2 + 1|_max = {residual:.3e}")]
    NotGaussian { residual: f64 },

    #[error("covariance parts violate their symmetry by {residual:.3e}")]
    Asymmetry { residual: f64 },

    #[error("complex structure incompatible with the fixed form: {0}")]
    Incompatible(String),

    #[error("transformation is not in the required group (residual {residual:.3e})")]
    GroupViolation { residual: f64 },

    #[error("eigenvalue {value} outside the legal domain")]
    Domain { value: f64 },

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("pure mode (lambda = {lambda}) makes the modular Hamiltonian singular")]
    PureModeInModularHamiltonian { lambda: f64 },

    #[error("supercharge has a zero mode (smallest singular value {smallest:.3e})")]
    ZeroModePresent { smallest: f64 },

    #[error("invariant {identity} violated (residual {residual:.3e})")]
    InvariantViolation { identity: &'static str, residual: f64 },

    #[error("identification map is ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("restricted symplectic form is degenerate (smallest singular value {smallest:.3e})")]
    DegenerateRestriction { smallest: f64 },

    #[error("fermionic mode is maximally entangled (lambda_f = {lambda:.3e}); no bosonic dual exists")]
    MaximallyEntangledObstruction { lambda: f64 },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("out of bounds: {0}")]
    OutOfBounds(String),

    #[error("{quantity} {value} exceeds guard {max}")]
    DimensionGuard { quantity: &'static str, value: usize, max: usize },

    #[error("ground state is degenerate (gap {gap:.3e})")]
    DegenerateGroundState { gap: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),

    #[error("restricted spectrum not on the imaginary axis (residual {residual:.3e})")]
    SpectrumOffAxis { residual: f64 },

    #[error("model descriptor: {0}")]
    Descriptor(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::AlgebraViolation { .. } => "AlgebraViolation",
            Error::ZeroMode { .. } => "ZeroMode",
            Error::SingularFunction { .. } => "SingularFunction",
            Error::SingularBasis { .. } => "SingularBasis",
            Error::NotGaussian { .. } => "NotGaussian",
            Error::Asymmetry { .. } => "AsymmetryError",
            Error::Incompatible(_) => "Incompatible",
            Error::GroupViolation { .. } => "GroupViolation",
            Error::Domain { .. } => "DomainError",
            Error::TooLarge(_) => "TooLarge",
            Error::PureModeInModularHamiltonian { .. } => "PureModeInModularHamiltonian",
            Error::ZeroModePresent { .. } => "ZeroModePresent",
            Error::InvariantViolation { .. } => "InvariantViolation",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::DegenerateRestriction { .. } => "DegenerateRestriction",
            Error::MaximallyEntangledObstruction { .. } => "MaximallyEntangledObstruction",
            Error::ParamOutOfRange(_) => "ParamOutOfRange",
            Error::OutOfBounds(_) => "OutOfBounds",
            Error::DimensionGuard { .. } => "DimensionGuard",
            Error::DegenerateGroundState { .. } => "DegenerateGroundState",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidSubsystem(_) => "InvalidSubsystem",
            Error::SpectrumOffAxis { .. } => "SpectrumOffAxis",
            Error::Descriptor(_) => "Descriptor",
        }
    }

    /// True for failures caused by a numerical guard (conditioning, zero
    /// modes, size limits) rather than by invalid input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::ZeroMode { .. }
                | Error::SingularFunction { .. }
                | Error::SingularBasis { .. }
                | Error::TooLarge(_)
                | Error::PureModeInModularHamiltonian { .. }
                | Error::ZeroModePresent { .. }
                | Error::IllConditioned { .. }
                | Error::DegenerateRestriction { .. }
                | Error::MaximallyEntangledObstruction { .. }
                | Error::DimensionGuard { .. }
                | Error::DegenerateGroundState { .. }
                | Error::SpectrumOffAxis { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
