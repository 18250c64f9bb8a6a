//! Numerical laboratory for momentum-capped operator deformations.
//!
//! The crate builds modified position and momentum operators from scalar
//! ansatz pairs (G, H), verifies their commutator structure on momentum-space
//! wave functions, and reproduces the induced minimal position uncertainties
//! by variational scans over Gaussian families.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod model;
pub mod operators;
pub mod states;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{AnalysisError, ModelError, OperatorError, StateError};
pub use model::{AnsatzKind, AnsatzModel, Axis, BoundId, KernelForm, PhysicalScales};
