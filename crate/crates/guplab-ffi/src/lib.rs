//! C ABI for the momentum-cap operator laboratory.
//!
//! The surface follows the usual opaque-handle pattern: construct a
//! `GuplabModel`, query the scalar layer and the analysis entry points
//! through status-code functions, free the handle when done. The matching
//! header lives in `include/guplab.h` and is kept in sync by a test.
//!
//! All functions are panic-safe: internal failures surface as
//! `GUPLAB_STATUS_ACCURACY` rather than unwinding across the boundary.

use guplab::analysis::{
    boosted_experiment, minimize_bound, spherical_experiment, uncertainty_report, BoundFunction,
    ScanProtocol,
};
use guplab::model::{
    scalar_bound_check, AnsatzKind, AnsatzModel, Axis, BoundId, KernelForm, PhysicalScales,
};
use guplab::states::{GaussianState, Measure, State};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuplabStatus {
    GuplabStatusOk = 0,
    GuplabStatusNullPointer = 1,
    GuplabStatusInvalidArgument = 2,
    GuplabStatusDomainError = 3,
    GuplabStatusUnsupported = 4,
    GuplabStatusNoInteriorMinimum = 5,
    GuplabStatusAccuracy = 6,
}

use GuplabStatus::*;

/// Ansatz families, mirroring the library enumeration.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuplabKind {
    GuplabKindIdentity = 0,
    GuplabKindTanhCap = 1,
    GuplabKindArctanCap = 2,
    GuplabKindKmmPositionWeighted = 3,
    GuplabKindKmmMomentumWeighted = 4,
}

/// Commutator kernel forms.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuplabKernelForm {
    GuplabKernelExact = 0,
    GuplabKernelPaperSecondOrder = 1,
    GuplabKernelTaylorSecondOrder = 2,
    GuplabKernelSqrtLowerBound = 3,
}

/// Scalar bound identifiers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuplabBoundId {
    GuplabBoundTanhSqBelowSq = 0,
    GuplabBoundArctanWeightAboveSqrt = 1,
    GuplabBoundSqrtAboveOne = 2,
    GuplabBoundSinhCoshAboveHalfSq = 3,
    GuplabBoundArctanWeightAboveOne = 4,
}

/// Inner-product measures.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuplabMeasure {
    GuplabMeasureFlat = 0,
    GuplabMeasureWeighted = 1,
}

/// Uncertainty data for one axis pair on an isotropic (optionally boosted)
/// Gaussian state.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GuplabUncertainty {
    pub delta_x: f64,
    pub delta_p: f64,
    pub commutator_expectation: f64,
    pub robertson_slack: f64,
    pub momentum_expectation: f64,
}

/// Opaque model handle.
pub struct GuplabModel {
    inner: AnsatzModel,
}

fn kind_of(kind: GuplabKind) -> AnsatzKind {
    match kind {
        GuplabKind::GuplabKindIdentity => AnsatzKind::Identity,
        GuplabKind::GuplabKindTanhCap => AnsatzKind::TanhCap,
        GuplabKind::GuplabKindArctanCap => AnsatzKind::ArctanCap,
        GuplabKind::GuplabKindKmmPositionWeighted => AnsatzKind::KmmPositionWeighted,
        GuplabKind::GuplabKindKmmMomentumWeighted => AnsatzKind::KmmMomentumWeighted,
    }
}

fn form_of(form: GuplabKernelForm) -> KernelForm {
    match form {
        GuplabKernelForm::GuplabKernelExact => KernelForm::Exact,
        GuplabKernelForm::GuplabKernelPaperSecondOrder => KernelForm::PaperSecondOrder,
        GuplabKernelForm::GuplabKernelTaylorSecondOrder => KernelForm::TaylorSecondOrder,
        GuplabKernelForm::GuplabKernelSqrtLowerBound => KernelForm::SqrtLowerBound,
    }
}

fn bound_of(id: GuplabBoundId) -> BoundId {
    match id {
        GuplabBoundId::GuplabBoundTanhSqBelowSq => BoundId::TanhSqBelowSq,
        GuplabBoundId::GuplabBoundArctanWeightAboveSqrt => BoundId::ArctanWeightAboveSqrt,
        GuplabBoundId::GuplabBoundSqrtAboveOne => BoundId::SqrtAboveOne,
        GuplabBoundId::GuplabBoundSinhCoshAboveHalfSq => BoundId::SinhCoshAboveHalfSq,
        GuplabBoundId::GuplabBoundArctanWeightAboveOne => BoundId::ArctanWeightAboveOne,
    }
}

fn measure_of(measure: GuplabMeasure, model: &AnsatzModel) -> Measure {
    match measure {
        GuplabMeasure::GuplabMeasureFlat => Measure::Flat,
        GuplabMeasure::GuplabMeasureWeighted => Measure::weighted(*model),
    }
}

fn axis_of(index: u32) -> Option<Axis> {
    Axis::from_index(index as usize)
}

fn guarded(f: impl FnOnce() -> GuplabStatus) -> GuplabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => GuplabStatusAccuracy,
    }
}

/// Create a model handle; `out` receives ownership on success. Free with
/// `guplab_model_free`.
#[no_mangle]
pub extern "C" fn guplab_model_new(
    kind: GuplabKind,
    hbar: f64,
    p_max: f64,
    out: *mut *mut GuplabModel,
) -> GuplabStatus {
    if out.is_null() {
        return GuplabStatusNullPointer;
    }
    let scales = match PhysicalScales::new(hbar, p_max) {
        Ok(s) => s,
        Err(_) => return GuplabStatusInvalidArgument,
    };
    let model = Box::new(GuplabModel {
        inner: AnsatzModel::new(kind_of(kind), scales),
    });
    unsafe { *out = Box::into_raw(model) };
    GuplabStatusOk
}

/// Free a model handle. Null is accepted and ignored.
#[no_mangle]
pub extern "C" fn guplab_model_free(model: *mut GuplabModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

unsafe fn model_ref<'a>(model: *const GuplabModel) -> Option<&'a AnsatzModel> {
    model.as_ref().map(|m| &m.inner)
}

/// G(|p|/p_max) at the momentum magnitude `p_norm`.
#[no_mangle]
pub extern "C" fn guplab_eval_g(
    model: *const GuplabModel,
    p_norm: f64,
    out: *mut f64,
) -> GuplabStatus {
    let (Some(m), false) = (unsafe { model_ref(model) }, out.is_null()) else {
        return GuplabStatusNullPointer;
    };
    match m.eval_g(p_norm) {
        Ok(v) => {
            unsafe { *out = v };
            GuplabStatusOk
        }
        Err(_) => GuplabStatusDomainError,
    }
}

/// H(|p|/p_max) at the momentum magnitude `p_norm`.
#[no_mangle]
pub extern "C" fn guplab_eval_h(
    model: *const GuplabModel,
    p_norm: f64,
    out: *mut f64,
) -> GuplabStatus {
    let (Some(m), false) = (unsafe { model_ref(model) }, out.is_null()) else {
        return GuplabStatusNullPointer;
    };
    match m.eval_h(p_norm) {
        Ok(v) => {
            unsafe { *out = v };
            GuplabStatusOk
        }
        Err(_) => GuplabStatusDomainError,
    }
}

/// G(p) d/dp[p H(p)] - 1 at `p > 0`.
#[no_mangle]
pub extern "C" fn guplab_condition_residual(
    model: *const GuplabModel,
    p: f64,
    out: *mut f64,
) -> GuplabStatus {
    let (Some(m), false) = (unsafe { model_ref(model) }, out.is_null()) else {
        return GuplabStatusNullPointer;
    };
    match m.condition_residual_1d(p) {
        Ok(v) => {
            unsafe { *out = v };
            GuplabStatusOk
        }
        Err(_) => GuplabStatusDomainError,
    }
}

/// The capped momentum map p -> p H(|p|); `p` and `out` point at three
/// doubles each.
#[no_mangle]
pub extern "C" fn guplab_capped_momentum(
    model: *const GuplabModel,
    p: *const f64,
    out: *mut f64,
) -> GuplabStatus {
    let (Some(m), false, false) = (unsafe { model_ref(model) }, p.is_null(), out.is_null()) else {
        return GuplabStatusNullPointer;
    };
    let pv = unsafe { [*p, *p.add(1), *p.add(2)] };
    let v = m.capped_momentum(pv);
    unsafe {
        *out = v[0];
        *out.add(1) = v[1];
        *out.add(2) = v[2];
    }
    GuplabStatusOk
}

/// Scalar commutator kernel k(p) with [X_i, P_j] = i hbar k(p); `p` points
/// at three doubles, axes are 1-based.
#[no_mangle]
pub extern "C" fn guplab_commutator_kernel(
    model: *const GuplabModel,
    form: GuplabKernelForm,
    p: *const f64,
    axis_i: u32,
    axis_j: u32,
    out: *mut f64,
) -> GuplabStatus {
    let (Some(m), false, false) = (unsafe { model_ref(model) }, p.is_null(), out.is_null()) else {
        return GuplabStatusNullPointer;
    };
    let (Some(i), Some(j)) = (axis_of(axis_i), axis_of(axis_j)) else {
        return GuplabStatusInvalidArgument;
    };
    let pv = unsafe { [*p, *p.add(1), *p.add(2)] };
    match m.commutator_kernel(form_of(form), pv, i, j) {
        Ok(v) => {
            unsafe { *out = v };
            GuplabStatusOk
        }
        Err(_) => GuplabStatusUnsupported,
    }
}

/// Signed slack of one scalar bound at `x > 0` (nonnegative = holds).
#[no_mangle]
pub extern "C" fn guplab_scalar_bound_check(
    bound: GuplabBoundId,
    x: f64,
    out: *mut f64,
) -> GuplabStatus {
    if out.is_null() {
        return GuplabStatusNullPointer;
    }
    match scalar_bound_check(bound_of(bound), x) {
        Ok(v) => {
            unsafe { *out = v };
            GuplabStatusOk
        }
        Err(_) => GuplabStatusDomainError,
    }
}

/// Minimize (hbar/2)(1/s + c s); writes the argmin and minimum.
#[no_mangle]
pub extern "C" fn guplab_minimize_bound(
    coefficient: f64,
    hbar: f64,
    argmin: *mut f64,
    minimum: *mut f64,
) -> GuplabStatus {
    if argmin.is_null() || minimum.is_null() {
        return GuplabStatusNullPointer;
    }
    if !(coefficient > 0.0 && coefficient.is_finite() && hbar > 0.0 && hbar.is_finite()) {
        return GuplabStatusInvalidArgument;
    }
    guarded(|| {
        let scan = minimize_bound(&BoundFunction::new(coefficient, hbar));
        unsafe {
            *argmin = scan.argmin;
            *minimum = scan.min;
        }
        GuplabStatusOk
    })
}

/// Uncertainty report for the (i, j) axis pair on an isotropic Gaussian of
/// width `sigma` boosted by `p1` along axis 1.
#[no_mangle]
pub extern "C" fn guplab_uncertainty_report(
    model: *const GuplabModel,
    measure: GuplabMeasure,
    sigma: f64,
    p1: f64,
    axis_i: u32,
    axis_j: u32,
    out: *mut GuplabUncertainty,
) -> GuplabStatus {
    let (Some(m), false) = (unsafe { model_ref(model) }, out.is_null()) else {
        return GuplabStatusNullPointer;
    };
    let (Some(i), Some(j)) = (axis_of(axis_i), axis_of(axis_j)) else {
        return GuplabStatusInvalidArgument;
    };
    if !(sigma > 0.0 && sigma.is_finite() && p1 >= 0.0 && p1.is_finite()) {
        return GuplabStatusInvalidArgument;
    }
    guarded(|| {
        let state: State = match GaussianState::boosted(p1, sigma) {
            Ok(g) => g.into(),
            Err(_) => return GuplabStatusInvalidArgument,
        };
        match uncertainty_report(m, &state, &measure_of(measure, m), i, j) {
            Ok(rep) => {
                unsafe {
                    *out = GuplabUncertainty {
                        delta_x: rep.delta_x,
                        delta_p: rep.delta_p,
                        commutator_expectation: rep.commutator_expectation,
                        robertson_slack: rep.robertson_slack,
                        momentum_expectation: rep.momentum_expectation,
                    };
                }
                GuplabStatusOk
            }
            Err(_) => GuplabStatusAccuracy,
        }
    })
}

/// Variational minimum of delta X_1 over isotropic Gaussians with widths in
/// [sigma_lo, sigma_hi]. Returns `GUPLAB_STATUS_NO_INTERIOR_MINIMUM` when
/// the scan bottoms out at a range endpoint (the endpoint values are still
/// written).
#[no_mangle]
pub extern "C" fn guplab_spherical_minimum(
    model: *const GuplabModel,
    measure: GuplabMeasure,
    sigma_lo: f64,
    sigma_hi: f64,
    argmin: *mut f64,
    minimum: *mut f64,
) -> GuplabStatus {
    let (Some(m), false, false) = (
        unsafe { model_ref(model) },
        argmin.is_null(),
        minimum.is_null(),
    ) else {
        return GuplabStatusNullPointer;
    };
    if !(sigma_lo > 0.0 && sigma_hi > sigma_lo) {
        return GuplabStatusInvalidArgument;
    }
    guarded(|| {
        match spherical_experiment(
            m,
            &measure_of(measure, m),
            (sigma_lo, sigma_hi),
            &ScanProtocol::default(),
        ) {
            Ok(rep) => {
                unsafe {
                    *argmin = rep.scan.argmin;
                    *minimum = rep.scan.min;
                }
                if rep.scan.interior {
                    GuplabStatusOk
                } else {
                    GuplabStatusNoInteriorMinimum
                }
            }
            Err(_) => GuplabStatusAccuracy,
        }
    })
}

/// Anisotropy ratio delta X_2^min / delta X_1^min of the boosted family.
#[no_mangle]
pub extern "C" fn guplab_boosted_ratio(
    model: *const GuplabModel,
    measure: GuplabMeasure,
    p1: f64,
    sigma_lo: f64,
    sigma_hi: f64,
    ratio: *mut f64,
) -> GuplabStatus {
    let (Some(m), false) = (unsafe { model_ref(model) }, ratio.is_null()) else {
        return GuplabStatusNullPointer;
    };
    if !(sigma_lo > 0.0 && sigma_hi > sigma_lo && p1 >= 0.0) {
        return GuplabStatusInvalidArgument;
    }
    guarded(|| {
        match boosted_experiment(
            m,
            &measure_of(measure, m),
            p1,
            (sigma_lo, sigma_hi),
            &ScanProtocol::default(),
        ) {
            Ok(rep) => {
                unsafe { *ratio = rep.ratio };
                if rep.parallel.interior && rep.orthogonal.interior {
                    GuplabStatusOk
                } else {
                    GuplabStatusNoInteriorMinimum
                }
            }
            Err(_) => GuplabStatusAccuracy,
        }
    })
}
