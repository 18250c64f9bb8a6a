//! Scalar inequalities underpinning the uncertainty bounds.
//!
//! Each check returns a signed slack, oriented so that a nonnegative value
//! means the bound holds.

use crate::error::ModelError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The five scalar bounds used by the uncertainty derivations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundId {
    /// tanh^2(x) <= x^2
    TanhSqBelowSq,
    /// (1 + x^2) arctan(x)/x >= sqrt(1 + x^2)
    ArctanWeightAboveSqrt,
    /// sqrt(1 + x^2) >= 1
    SqrtAboveOne,
    /// sinh(x) cosh(x) / x >= 1 + x^2/2
    SinhCoshAboveHalfSq,
    /// (1 + x^2) arctan(x)/x >= 1
    ArctanWeightAboveOne,
}

impl BoundId {
    pub const ALL: [BoundId; 5] = [
        BoundId::TanhSqBelowSq,
        BoundId::ArctanWeightAboveSqrt,
        BoundId::SqrtAboveOne,
        BoundId::SinhCoshAboveHalfSq,
        BoundId::ArctanWeightAboveOne,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundId::TanhSqBelowSq => "tanh-sq-below-sq",
            BoundId::ArctanWeightAboveSqrt => "arctan-weight-above-sqrt",
            BoundId::SqrtAboveOne => "sqrt-above-one",
            BoundId::SinhCoshAboveHalfSq => "sinhcosh-above-half-sq",
            BoundId::ArctanWeightAboveOne => "arctan-weight-above-one",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Signed slack of the requested bound at `x > 0`; nonnegative means the
/// bound holds.
pub fn scalar_bound_check(id: BoundId, x: f64) -> Result<f64, ModelError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(ModelError::NonPositiveArgument(x));
    }
    Ok(match id {
        BoundId::TanhSqBelowSq => {
            let t = x.tanh();
            x * x - t * t
        }
        BoundId::ArctanWeightAboveSqrt => {
            let w = (1.0 + x * x) * x.atan() / x;
            w - (1.0 + x * x).sqrt()
        }
        BoundId::SqrtAboveOne => (1.0 + x * x).sqrt() - 1.0,
        BoundId::SinhCoshAboveHalfSq => {
            // sinh(x) cosh(x) / x = sinh(2x) / (2x)
            (2.0 * x).sinh() / (2.0 * x) - (1.0 + 0.5 * x * x)
        }
        BoundId::ArctanWeightAboveOne => (1.0 + x * x) * x.atan() / x - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::series;

    #[test]
    fn rejects_nonpositive_arguments() {
        assert!(scalar_bound_check(BoundId::TanhSqBelowSq, 0.0).is_err());
        assert!(scalar_bound_check(BoundId::SqrtAboveOne, -1.0).is_err());
        assert!(scalar_bound_check(BoundId::SqrtAboveOne, f64::NAN).is_err());
    }

    #[test]
    fn tanh_slack_at_one_matches_oracle() {
        let t = series::sinh(1.0) / series::cosh(1.0);
        let oracle = 1.0 - t * t;
        let got = scalar_bound_check(BoundId::TanhSqBelowSq, 1.0).unwrap();
        assert!((got - oracle).abs() < 1e-14);
        assert!((got - 0.41997434161402614).abs() < 1e-13);
        assert!(got >= 0.0);
    }

    #[test]
    fn sinhcosh_slack_at_two_matches_oracle() {
        // sinh(2)cosh(2)/2 - 3 = sinh(4)/4 - 3, via the series oracle
        let oracle = series::sinh(4.0) / 4.0 - 3.0;
        let got = scalar_bound_check(BoundId::SinhCoshAboveHalfSq, 2.0).unwrap();
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 3.8224792992819378).abs() < 1e-12);
        assert!(got >= 0.0);
    }

    #[test]
    fn arctan_weight_slack_vanishes_at_zero() {
        // both sides tend to 1 as x -> 0+
        let s = scalar_bound_check(BoundId::ArctanWeightAboveSqrt, 1e-8).unwrap();
        assert!(s.abs() < 1e-14, "slack = {s}");
    }

    #[test]
    fn all_bounds_hold_on_a_coarse_sweep() {
        for id in BoundId::ALL {
            for k in 0..200 {
                let x = 10f64.powf(-6.0 + 6.7 * k as f64 / 199.0);
                let s = scalar_bound_check(id, x).unwrap();
                assert!(s >= -1e-12, "{id} violated at x = {x}: slack = {s}");
            }
        }
    }
}
