//! Pure scalar layer: physical scales, ansatz function families, commutator
//! kernels and the scalar-inequality checks. No state objects, no
//! quadrature; every function here is a deterministic map of its inputs.

mod ansatz;
mod bounds;
mod kernel;
pub mod verify;

pub use ansatz::{AnsatzKind, AnsatzModel, PhysicalScales, SERIES_THRESHOLD};
pub use bounds::{scalar_bound_check, BoundId};
pub use kernel::{
    levi_civita, paper_second_order_coefficient, taylor_second_order_coefficient, Axis, KernelForm,
};
