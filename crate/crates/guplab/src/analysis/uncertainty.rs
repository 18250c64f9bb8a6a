//! Per-axis-pair uncertainty reports: variances of the modified operators,
//! the commutator expectation by double application, and the Robertson
//! product slack.

use crate::error::AnalysisError;
use crate::model::{AnsatzModel, Axis};
use crate::operators::{self, AppliedState, Operator};
use crate::states::quadrature::{report_integrals, ReportIntegrals};
use crate::states::{Measure, State};
use serde::Serialize;

/// Numerical floor below which a computed variance is an accuracy failure
/// rather than rounding ([-1e-10, 0] clamps to zero).
pub const VARIANCE_FLOOR: f64 = -1e-10;

/// Uncertainty data for one (i, j) axis pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UncertaintyReport {
    pub axis_i: usize,
    pub axis_j: usize,
    /// spread of the modified position operator, length units
    pub delta_x: f64,
    /// spread of the modified momentum operator, momentum units
    pub delta_p: f64,
    /// <[X_i, P_j]> / i, action units
    pub commutator_expectation: f64,
    /// delta_x delta_p - |commutator|/2
    pub robertson_slack: f64,
    /// <P_j>, momentum units
    pub momentum_expectation: f64,
}

fn checked_variance(raw: f64, what: &'static str) -> Result<f64, AnalysisError> {
    if raw < VARIANCE_FLOOR {
        return Err(AnalysisError::NegativeVariance { what, value: raw });
    }
    Ok(raw.max(0.0))
}

/// All nine (i, j) uncertainty reports of one closed-form state from a
/// single quadrature sweep.
pub(crate) fn uncertainty_matrix_from_integrals(
    model: &AnsatzModel,
    r: &ReportIntegrals,
) -> Result<[[UncertaintyReport; 3]; 3], AnalysisError> {
    let hbar = model.scales.hbar();
    let p_max = model.scales.p_max();
    let n = r.norm;
    if !(n > 0.0) || !n.is_finite() {
        return Err(AnalysisError::State(crate::error::StateError::ZeroNorm));
    }
    let mut dx = [0.0; 3];
    let mut dp = [0.0; 3];
    let mut pexp = [0.0; 3];
    for a in 0..3 {
        let asym = r.x_asym[a] / n;
        let var_x = checked_variance(r.xx[a] / n - asym * asym, "delta_x")?;
        dx[a] = (hbar / p_max) * var_x.sqrt();
        let p1 = r.p1[a] / n;
        let var_p = checked_variance(r.pp[a] / n - p1 * p1, "delta_p")?;
        dp[a] = p_max * var_p.sqrt();
        pexp[a] = p_max * p1;
    }
    let mut out = [[UncertaintyReport {
        axis_i: 0,
        axis_j: 0,
        delta_x: 0.0,
        delta_p: 0.0,
        commutator_expectation: 0.0,
        robertson_slack: 0.0,
        momentum_expectation: 0.0,
    }; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let comm = hbar * r.comm[i][j] / n;
            let slack = dx[i] * dp[j] - 0.5 * comm.abs();
            out[i][j] = UncertaintyReport {
                axis_i: i + 1,
                axis_j: j + 1,
                delta_x: dx[i],
                delta_p: dp[j],
                commutator_expectation: comm,
                robertson_slack: slack,
                momentum_expectation: pexp[j],
            };
        }
    }
    Ok(out)
}

/// Uncertainty report for one axis pair. Closed-form states go through one
/// quadrature sweep; grid states apply the operators by finite differences.
pub fn uncertainty_report(
    model: &AnsatzModel,
    state: &State,
    measure: &Measure,
    i: Axis,
    j: Axis,
) -> Result<UncertaintyReport, AnalysisError> {
    match state {
        State::ClosedForm(mix) => {
            let r = report_integrals(model, measure.kind(), mix)?;
            Ok(uncertainty_matrix_from_integrals(model, &r)?[i.idx()][j.idx()])
        }
        State::Grid(_) => uncertainty_report_grid(model, state, measure, i, j),
    }
}

fn uncertainty_report_grid(
    model: &AnsatzModel,
    state: &State,
    measure: &Measure,
    i: Axis,
    j: Axis,
) -> Result<UncertaintyReport, AnalysisError> {
    let plain = AppliedState::from_state(state, model);
    let n = operators::applied_inner_product(&plain, &plain, measure)?.re;
    if !(n > 0.0) || !n.is_finite() {
        return Err(AnalysisError::State(crate::error::StateError::ZeroNorm));
    }
    let x = operators::apply(Operator::ModifiedPosition(i), model, state)?;
    let xx = operators::applied_inner_product(&x, &x, measure)?.re / n;
    let x1 = operators::applied_inner_product(&plain, &x, measure)? / n;
    let var_x = checked_variance(xx - x1.norm_sqr(), "delta_x")?;
    let p = operators::apply(Operator::ModifiedMomentum(j), model, state)?;
    let pp = operators::applied_inner_product(&p, &p, measure)?.re / n;
    let p1 = operators::applied_inner_product(&plain, &p, measure)? / n;
    let var_p = checked_variance(pp - p1.norm_sqr(), "delta_p")?;
    let comm_state = operators::commutator_apply(
        Operator::ModifiedPosition(i),
        Operator::ModifiedMomentum(j),
        model,
        state,
    )?;
    // <[X,P]> = i hbar <k>: dividing by i leaves the imaginary part
    let comm = operators::applied_inner_product(&plain, &comm_state, measure)?.im / n;
    let delta_x = var_x.sqrt();
    let delta_p = var_p.sqrt();
    Ok(UncertaintyReport {
        axis_i: i.index(),
        axis_j: j.index(),
        delta_x,
        delta_p,
        commutator_expectation: comm,
        robertson_slack: delta_x * delta_p - 0.5 * comm.abs(),
        momentum_expectation: p1.re,
    })
}
