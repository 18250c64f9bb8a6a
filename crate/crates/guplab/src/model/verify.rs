//! Sweep suites over the scalar layer: condition residuals, bound slacks
//! and the second-order structure of the kernels.

use super::ansatz::{AnsatzKind, AnsatzModel};
use super::bounds::{scalar_bound_check, BoundId};
use super::kernel::KernelForm;
use serde::Serialize;

/// Log-spaced samples in [lo, hi] (inclusive endpoints).
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    debug_assert!(lo > 0.0 && hi > lo && n >= 2);
    let l0 = lo.ln();
    let step = (hi.ln() - l0) / (n - 1) as f64;
    (0..n).map(move |k| (l0 + step * k as f64).exp())
}

/// Outcome of one sweep; `worst` is oriented so that larger is worse and
/// the suite passes when `worst <= tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SuiteResult {
    fn new(name: impl Into<String>, worst: f64, tolerance: f64) -> Self {
        let pass = worst.is_finite() && worst <= tolerance;
        Self {
            name: name.into(),
            worst,
            tolerance,
            pass,
        }
    }
}

/// Max |G d(pH)/dp - 1| over `n` log-spaced p in (1e-6, 10] p_max.
pub fn condition_residual_suite(model: &AnsatzModel, n: usize, tolerance: f64) -> SuiteResult {
    let p_max = model.scales.p_max();
    let worst = log_spaced(1e-6 * p_max, 10.0 * p_max, n)
        .map(|p| model.condition_residual_1d(p).expect("p > 0").abs())
        .fold(0.0, f64::max);
    SuiteResult::new(format!("condition-{}", model.kind), worst, tolerance)
}

/// Max bound violation (= -min slack, clamped at 0) over `n` log-spaced
/// x in [1e-6, 50].
pub fn bound_suite(id: BoundId, n: usize, tolerance: f64) -> SuiteResult {
    let mut worst = f64::NEG_INFINITY;
    for x in log_spaced(1e-6, 50.0, n) {
        let slack = scalar_bound_check(id, x).expect("x > 0");
        worst = worst.max(-slack);
    }
    SuiteResult::new(format!("bound-{}", id.name()), worst.max(0.0), tolerance)
}

/// Max violation of the lower-bound ordering `Exact >= bound form` on the
/// transverse part, sampled over log-spaced r. The tanh cap is checked
/// against its quoted second-order form, the arctan cap against the sqrt
/// form (its quoted second-order expansion is not a lower bound).
pub fn kernel_lower_bound_suite(kind: AnsatzKind, n: usize, tolerance: f64) -> SuiteResult {
    let model = AnsatzModel::natural(kind);
    let form = match kind {
        AnsatzKind::TanhCap => KernelForm::PaperSecondOrder,
        AnsatzKind::ArctanCap => KernelForm::SqrtLowerBound,
        _ => panic!("lower-bound suite only applies to the capped kinds"),
    };
    let mut worst = 0.0f64;
    for r in log_spaced(1e-6, 10.0, n) {
        let exact = model.kernel_transverse_dimless(KernelForm::Exact, r).unwrap();
        let lower = model.kernel_transverse_dimless(form, r).unwrap();
        if exact.is_finite() {
            worst = worst.max(lower - exact);
        }
    }
    SuiteResult::new(format!("kernel-lower-{}", kind), worst, tolerance)
}

/// Quartic-order check: |Exact - TaylorSecondOrder| should shrink 16x when
/// r is halved. Returns the worst relative deviation of the shrink factor
/// from 16 over pairs (r, r/2) with r <= 0.3.
pub fn taylor_order_suite(kind: AnsatzKind, tolerance: f64) -> SuiteResult {
    let model = AnsatzModel::natural(kind);
    let mut worst = 0.0f64;
    for &r in &[0.3, 0.2, 0.15, 0.1] {
        let d = |r: f64| {
            let exact = model.kernel_transverse_dimless(KernelForm::Exact, r).unwrap();
            let taylor = model
                .kernel_transverse_dimless(KernelForm::TaylorSecondOrder, r)
                .unwrap();
            (exact - taylor).abs()
        };
        let ratio = d(r) / d(0.5 * r);
        worst = worst.max((ratio / 16.0 - 1.0).abs());
    }
    SuiteResult::new(format!("taylor-order-{}", kind), worst, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_spacing_hits_endpoints() {
        let v: Vec<f64> = log_spaced(1e-6, 10.0, 5).collect();
        assert_eq!(v.len(), 5);
        assert!((v[0] - 1e-6).abs() < 1e-18);
        assert!((v[4] - 10.0).abs() < 1e-12);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn capped_kinds_satisfy_condition_everywhere() {
        for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
            let r = condition_residual_suite(&AnsatzModel::natural(kind), 10_000, 1e-12);
            assert!(r.pass, "{}: worst = {:.3e}", r.name, r.worst);
        }
    }

    #[test]
    fn uncapped_kinds_violate_condition() {
        let r = condition_residual_suite(
            &AnsatzModel::natural(AnsatzKind::KmmPositionWeighted),
            100,
            1e-12,
        );
        assert!(!r.pass);
    }

    #[test]
    fn bound_suites_pass_at_moderate_sampling() {
        for id in BoundId::ALL {
            let r = bound_suite(id, 20_000, 1e-12);
            assert!(r.pass, "{}: worst = {:.3e}", r.name, r.worst);
        }
    }

    #[test]
    fn kernel_lower_bounds_hold() {
        for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
            let r = kernel_lower_bound_suite(kind, 20_000, 1e-12);
            assert!(r.pass, "{}: worst = {:.3e}", r.name, r.worst);
        }
    }

    #[test]
    fn arctan_paper_second_order_is_not_a_lower_bound() {
        // the quoted quadratic form overshoots the exact arctan kernel; this
        // is why the sqrt form is the one used as a lower bound
        let model = AnsatzModel::natural(AnsatzKind::ArctanCap);
        let exact = model.kernel_transverse_dimless(KernelForm::Exact, 0.6).unwrap();
        let paper = model
            .kernel_transverse_dimless(KernelForm::PaperSecondOrder, 0.6)
            .unwrap();
        assert!(paper > exact);
    }

    #[test]
    fn taylor_order_is_quartic() {
        for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
            let r = taylor_order_suite(kind, 0.25);
            assert!(r.pass, "{}: worst = {:.3e}", r.name, r.worst);
        }
    }
}
