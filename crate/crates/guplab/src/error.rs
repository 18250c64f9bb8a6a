//! Error types shared across the crate.

use thiserror::Error;

/// Errors from the scalar model layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("momentum magnitude must be nonnegative, got {0}")]
    NegativeMomentum(f64),
    #[error("argument must be strictly positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("physical scale must be finite and positive, got {name} = {value}")]
    InvalidScale { name: &'static str, value: f64 },
    #[error("kernel form {form:?} is not defined for ansatz kind {kind:?}")]
    UnsupportedKernelForm {
        kind: crate::model::AnsatzKind,
        form: crate::model::KernelForm,
    },
}

/// Errors from state construction, quadrature and inner products.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("state has zero (or non-finite) norm and cannot be normalized")]
    ZeroNorm,
    #[error("grid states have incompatible axes")]
    IncompatibleGrids,
    #[error("incompatible state representations: {0}")]
    IncompatibleRepresentations(&'static str),
    #[error("axis {axis} covers [{lo}, {hi}] but the state needs [{need_lo}, {need_hi}] (center +/- 8 widths)")]
    CoverageTooSmall {
        axis: usize,
        lo: f64,
        hi: f64,
        need_lo: f64,
        need_hi: f64,
    },
    #[error("boundary amplitude is {ratio:.3e} of the peak; limit is {limit:.1e}")]
    BoundaryDecay { ratio: f64, limit: f64 },
    #[error("axis needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("axis range is empty or inverted: [{lo}, {hi}]")]
    BadAxisRange { lo: f64, hi: f64 },
    #[error("width must be strictly positive, got {0}")]
    InvalidWidth(f64),
    #[error("state dimension must be 1 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("axis index {0} out of range for this state")]
    AxisOutOfRange(usize),
    #[error("quadrature produced a non-finite result for {what}")]
    NonFinite { what: &'static str },
}

/// Errors from operator application.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("closed-form states support at most {max} chained operator applications")]
    ChainTooDeep { max: usize },
}

/// Errors from the analysis pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("variance for {what} is {value:.3e}, below the accuracy floor -1e-10")]
    NegativeVariance { what: &'static str, value: f64 },
    #[error("accuracy failure: {0}")]
    Accuracy(String),
}
