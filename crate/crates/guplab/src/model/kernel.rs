//! Exact and approximate position-momentum commutator kernels.
//!
//! For the operator families handled here, [X_i, P_j] acts as multiplication
//! by i*hbar*k(p) with
//!
//! ```text
//! k(p) = T(|p|) (delta_ij - p_i p_j / |p|^2) + L(|p|) p_i p_j / |p|^2
//! ```
//!
//! where T = G*H is the transverse part and L = G * d(|p| H)/d|p| the
//! longitudinal part. The capped kinds have L identically 1.

use super::ansatz::{AnsatzKind, AnsatzModel, SERIES_THRESHOLD};
use crate::error::ModelError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Cartesian axis index (1, 2 or 3 in physics counting).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Axis(usize);

impl Axis {
    pub const X1: Axis = Axis(0);
    pub const X2: Axis = Axis(1);
    pub const X3: Axis = Axis(2);
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    /// Build from a 1-based physics index.
    pub fn from_index(one_based: usize) -> Option<Axis> {
        (1..=3).contains(&one_based).then(|| Axis(one_based - 1))
    }

    /// Zero-based storage index.
    pub fn idx(&self) -> usize {
        self.0
    }

    /// One-based physics index.
    pub fn index(&self) -> usize {
        self.0 + 1
    }

    /// The axis completing a right-handed triple with the other two.
    pub fn complement(a: Axis, b: Axis) -> Option<Axis> {
        (a != b).then(|| Axis(3 - a.0 - b.0))
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Levi-Civita symbol for zero-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Which closed form of the commutator kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelForm {
    /// Full closed form; defined for every ansatz kind.
    Exact,
    /// The quoted second-order form: coefficient 1/2 for the tanh cap
    /// (a lower bound, not the Taylor value) and (2/3)(pi/2)^2 for the
    /// arctan cap.
    PaperSecondOrder,
    /// True second-order Taylor coefficients: 2/3 for the tanh cap and
    /// (2/3)(pi/2)^2 for the arctan cap.
    TaylorSecondOrder,
    /// sqrt(1 + (pi |p| / 2 p_max)^2) on the transverse part; the usable
    /// lower bound for the arctan cap.
    SqrtLowerBound,
}

impl KernelForm {
    pub fn supports(&self, kind: AnsatzKind) -> bool {
        match self {
            KernelForm::Exact => true,
            KernelForm::PaperSecondOrder | KernelForm::TaylorSecondOrder => {
                matches!(kind, AnsatzKind::TanhCap | AnsatzKind::ArctanCap)
            }
            KernelForm::SqrtLowerBound => matches!(kind, AnsatzKind::ArctanCap),
        }
    }
}

/// Quoted second-order coefficient c in `1 + c (|p|/p_max)^2`.
pub fn paper_second_order_coefficient(kind: AnsatzKind) -> Option<f64> {
    match kind {
        AnsatzKind::TanhCap => Some(0.5),
        AnsatzKind::ArctanCap => Some((2.0 / 3.0) * (0.5 * PI) * (0.5 * PI)),
        _ => None,
    }
}

/// True Taylor second-order coefficient c in `1 + c (|p|/p_max)^2`.
pub fn taylor_second_order_coefficient(kind: AnsatzKind) -> Option<f64> {
    match kind {
        AnsatzKind::TanhCap => Some(2.0 / 3.0),
        AnsatzKind::ArctanCap => Some((2.0 / 3.0) * (0.5 * PI) * (0.5 * PI)),
        _ => None,
    }
}

impl AnsatzModel {
    /// Transverse kernel part T(r) for the requested form.
    pub fn kernel_transverse_dimless(&self, form: KernelForm, r: f64) -> Result<f64, ModelError> {
        if !form.supports(self.kind) {
            return Err(ModelError::UnsupportedKernelForm {
                kind: self.kind,
                form,
            });
        }
        Ok(match form {
            KernelForm::Exact => self.gh_dimless(r),
            KernelForm::PaperSecondOrder => {
                1.0 + paper_second_order_coefficient(self.kind).unwrap() * r * r
            }
            KernelForm::TaylorSecondOrder => {
                1.0 + taylor_second_order_coefficient(self.kind).unwrap() * r * r
            }
            KernelForm::SqrtLowerBound => {
                let x = 0.5 * PI * r;
                (1.0 + x * x).sqrt()
            }
        })
    }

    /// Longitudinal kernel part L(r) for the requested form. The
    /// second-order and sqrt forms keep the longitudinal part at 1.
    pub fn kernel_longitudinal_dimless(&self, form: KernelForm, r: f64) -> Result<f64, ModelError> {
        if !form.supports(self.kind) {
            return Err(ModelError::UnsupportedKernelForm {
                kind: self.kind,
                form,
            });
        }
        Ok(match form {
            KernelForm::Exact => self.g_dimless(r) * self.dph_dimless(r),
            _ => 1.0,
        })
    }

    /// The scalar kernel k(p) with [X_i, P_j] psi = i hbar k(p) psi.
    /// At p = 0 the analytic limit delta_ij is returned.
    pub fn commutator_kernel(
        &self,
        form: KernelForm,
        p: [f64; 3],
        i: Axis,
        j: Axis,
    ) -> Result<f64, ModelError> {
        let p_max = self.scales.p_max();
        let norm_sq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let r = norm_sq.sqrt() / p_max;
        let delta = if i == j { 1.0 } else { 0.0 };
        if r < SERIES_THRESHOLD {
            // analytic limit: both parts tend to 1 faster than the direction
            // factor can matter
            self.kernel_transverse_dimless(form, r)?;
            return Ok(delta);
        }
        let t = self.kernel_transverse_dimless(form, r)?;
        let l = self.kernel_longitudinal_dimless(form, r)?;
        let dir = p[i.idx()] * p[j.idx()] / norm_sq;
        Ok(t * (delta - dir) + l * dir)
    }
}
