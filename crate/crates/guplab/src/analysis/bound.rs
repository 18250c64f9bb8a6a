//! The uncertainty bound surrogate dX(s) = (hbar/2)(1/s + c s) and its
//! minimization.

use super::scan::{log_scan_minimize, ScanResult};
use serde::Serialize;

/// One-parameter lower-bound function for the position uncertainty as a
/// function of the momentum spread s: dX(s) = (hbar/2)(1/s + c s).
/// The hyperbolic cap has c = 1/p_max^2, the inverse-tangent cap
/// c = pi^2 / (8 p_max^2).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundFunction {
    /// curvature coefficient, inverse momentum squared
    pub coefficient: f64,
    pub hbar: f64,
}

impl BoundFunction {
    pub fn new(coefficient: f64, hbar: f64) -> Self {
        assert!(coefficient > 0.0 && hbar > 0.0);
        Self { coefficient, hbar }
    }

    /// Hyperbolic-cap coefficient 1/p_max^2.
    pub fn tanh_cap(scales: &crate::model::PhysicalScales) -> Self {
        Self::new(1.0 / (scales.p_max() * scales.p_max()), scales.hbar())
    }

    /// Inverse-tangent-cap coefficient pi^2/(8 p_max^2).
    pub fn arctan_cap(scales: &crate::model::PhysicalScales) -> Self {
        let pm2 = scales.p_max() * scales.p_max();
        Self::new(std::f64::consts::PI.powi(2) / (8.0 * pm2), scales.hbar())
    }

    pub fn eval(&self, s: f64) -> f64 {
        0.5 * self.hbar * (1.0 / s + self.coefficient * s)
    }

    /// Calculus minimum location 1/sqrt(c).
    pub fn analytic_argmin(&self) -> f64 {
        1.0 / self.coefficient.sqrt()
    }

    /// Calculus minimum value hbar sqrt(c).
    pub fn analytic_min(&self) -> f64 {
        self.hbar * self.coefficient.sqrt()
    }
}

/// Minimize the bound function by the standard scan protocol (the analytic
/// minimum is the oracle the result is checked against in the test suites).
pub fn minimize_bound(bound: &BoundFunction) -> ScanResult {
    let s_star = bound.analytic_argmin();
    log_scan_minimize(
        "delta_p",
        1e-2 * s_star,
        1e2 * s_star,
        s_star,
        40,
        1e-10,
        |s| bound.eval(s),
    )
}
