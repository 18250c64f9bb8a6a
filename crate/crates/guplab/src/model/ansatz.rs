//! Physical scales and the ansatz function families (G, H) with their
//! analytic derivatives.
//!
//! All formulas are evaluated in the dimensionless variable `r = |p| / p_max`.
//! Below `r = SERIES_THRESHOLD` the removable singularities are replaced by
//! two-term Taylor forms to avoid cancellation.

use crate::error::ModelError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Switch-over point for the small-`r` series branches.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// Reduced Planck constant and the momentum cap; fixes all units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScales {
    hbar: f64,
    p_max: f64,
}

impl PhysicalScales {
    pub fn new(hbar: f64, p_max: f64) -> Result<Self, ModelError> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(ModelError::InvalidScale {
                name: "hbar",
                value: hbar,
            });
        }
        if !(p_max.is_finite() && p_max > 0.0) {
            return Err(ModelError::InvalidScale {
                name: "p_max",
                value: p_max,
            });
        }
        Ok(Self { hbar, p_max })
    }

    /// Natural units: hbar = p_max = 1.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            p_max: 1.0,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Derived length scale hbar / p_max.
    pub fn min_length_scale(&self) -> f64 {
        self.hbar / self.p_max
    }
}

/// The ansatz function families implemented by the laboratory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnsatzKind {
    /// G = H = 1: canonical operators.
    #[serde(rename = "identity")]
    Identity,
    /// G = cosh^2(r), H = tanh(r)/r: hyperbolic momentum cap.
    #[serde(rename = "tanh")]
    TanhCap,
    /// G = 1 + (pi r / 2)^2, H = arctan(pi r / 2)/(pi r / 2): inverse-tangent cap.
    #[serde(rename = "arctan")]
    ArctanCap,
    /// G = 1 + r^2, H = 1: quadratic position weight (beta = 1/p_max^2).
    #[serde(rename = "kmm-g")]
    KmmPositionWeighted,
    /// G = 1, H = 1 + r^2/3: quadratic momentum weight.
    #[serde(rename = "kmm-h")]
    KmmMomentumWeighted,
}

impl AnsatzKind {
    pub const ALL: [AnsatzKind; 5] = [
        AnsatzKind::Identity,
        AnsatzKind::TanhCap,
        AnsatzKind::ArctanCap,
        AnsatzKind::KmmPositionWeighted,
        AnsatzKind::KmmMomentumWeighted,
    ];

    /// Command-line token for this kind.
    pub fn token(&self) -> &'static str {
        match self {
            AnsatzKind::Identity => "identity",
            AnsatzKind::TanhCap => "tanh",
            AnsatzKind::ArctanCap => "arctan",
            AnsatzKind::KmmPositionWeighted => "kmm-g",
            AnsatzKind::KmmMomentumWeighted => "kmm-h",
        }
    }

    /// True for the kinds whose capped momentum saturates at p_max.
    pub fn is_capped(&self) -> bool {
        matches!(self, AnsatzKind::TanhCap | AnsatzKind::ArctanCap)
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for AnsatzKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(AnsatzKind::Identity),
            "tanh" => Ok(AnsatzKind::TanhCap),
            "arctan" => Ok(AnsatzKind::ArctanCap),
            "kmm-g" => Ok(AnsatzKind::KmmPositionWeighted),
            "kmm-h" => Ok(AnsatzKind::KmmMomentumWeighted),
            other => Err(format!(
                "unknown model kind `{other}` (expected identity|tanh|arctan|kmm-g|kmm-h)"
            )),
        }
    }
}

/// A named (G, H) pair together with the physical scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzModel {
    pub kind: AnsatzKind,
    pub scales: PhysicalScales,
}

impl AnsatzModel {
    pub fn new(kind: AnsatzKind, scales: PhysicalScales) -> Self {
        Self { kind, scales }
    }

    pub fn natural(kind: AnsatzKind) -> Self {
        Self::new(kind, PhysicalScales::natural())
    }

    fn reduced(&self, p_norm: f64) -> Result<f64, ModelError> {
        if p_norm < 0.0 || !p_norm.is_finite() {
            return Err(ModelError::NegativeMomentum(p_norm));
        }
        Ok(p_norm / self.scales.p_max())
    }

    /// G(|p|/p_max), the derivative weight of the position operator.
    pub fn eval_g(&self, p_norm: f64) -> Result<f64, ModelError> {
        Ok(self.g_dimless(self.reduced(p_norm)?))
    }

    /// H(|p|/p_max), the multiplicative momentum weight, with the analytic
    /// limit 1 at p = 0.
    pub fn eval_h(&self, p_norm: f64) -> Result<f64, ModelError> {
        Ok(self.h_dimless(self.reduced(p_norm)?))
    }

    /// The capped momentum map p_i -> p_i * H(|p|).
    pub fn capped_momentum(&self, p: [f64; 3]) -> [f64; 3] {
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let h = self.h_dimless(norm / self.scales.p_max());
        [p[0] * h, p[1] * h, p[2] * h]
    }

    /// G(p) d/dp [p H(p)] - 1, with analytic derivatives. Identically zero
    /// for the capped kinds.
    pub fn condition_residual_1d(&self, p: f64) -> Result<f64, ModelError> {
        let r = self.reduced(p)?;
        Ok(self.g_dimless(r) * self.dph_dimless(r) - 1.0)
    }

    // ---- dimensionless scalar maps (r = |p|/p_max >= 0) ----

    /// G(r).
    pub fn g_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmMomentumWeighted => 1.0,
            AnsatzKind::TanhCap => {
                let c = r.cosh();
                c * c
            }
            AnsatzKind::ArctanCap => {
                let x = 0.5 * PI * r;
                1.0 + x * x
            }
            AnsatzKind::KmmPositionWeighted => 1.0 + r * r,
        }
    }

    /// H(r), with the removable singularity at r = 0 handled by a series
    /// branch.
    pub fn h_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmPositionWeighted => 1.0,
            AnsatzKind::TanhCap => {
                if r < SERIES_THRESHOLD {
                    1.0 - r * r / 3.0
                } else {
                    r.tanh() / r
                }
            }
            AnsatzKind::ArctanCap => {
                let x = 0.5 * PI * r;
                if x < SERIES_THRESHOLD {
                    1.0 - x * x / 3.0
                } else {
                    x.atan() / x
                }
            }
            AnsatzKind::KmmMomentumWeighted => 1.0 + r * r / 3.0,
        }
    }

    /// d/dr [r H(r)], the slope of the capped momentum map.
    pub fn dph_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmPositionWeighted => 1.0,
            AnsatzKind::TanhCap => {
                let c = r.cosh();
                1.0 / (c * c)
            }
            AnsatzKind::ArctanCap => {
                let x = 0.5 * PI * r;
                1.0 / (1.0 + x * x)
            }
            AnsatzKind::KmmMomentumWeighted => 1.0 + r * r,
        }
    }

    /// G(r) H(r), the transverse part of the exact commutator kernel.
    /// For TanhCap this equals sinh(2r)/(2r).
    pub fn gh_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::TanhCap => {
                if r < SERIES_THRESHOLD {
                    let t = 2.0 * r;
                    1.0 + t * t / 6.0
                } else {
                    (2.0 * r).sinh() / (2.0 * r)
                }
            }
            _ => self.g_dimless(r) * self.h_dimless(r),
        }
    }

    /// dG/dr.
    pub fn g_prime_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmMomentumWeighted => 0.0,
            AnsatzKind::TanhCap => (2.0 * r).sinh(),
            AnsatzKind::ArctanCap => 0.5 * PI * PI * r,
            AnsatzKind::KmmPositionWeighted => 2.0 * r,
        }
    }

    /// dG/dr / r, finite everywhere (limit branch below the threshold).
    pub fn g_prime_over_r_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmMomentumWeighted => 0.0,
            AnsatzKind::TanhCap => {
                if r < SERIES_THRESHOLD {
                    2.0 + 4.0 * r * r / 3.0
                } else {
                    (2.0 * r).sinh() / r
                }
            }
            AnsatzKind::ArctanCap => 0.5 * PI * PI,
            AnsatzKind::KmmPositionWeighted => 2.0,
        }
    }

    /// dH/dr, with a series branch at small r.
    pub fn h_prime_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmPositionWeighted => 0.0,
            AnsatzKind::TanhCap => {
                if r < SERIES_THRESHOLD {
                    -2.0 * r / 3.0 + 8.0 * r * r * r / 15.0
                } else {
                    let c = r.cosh();
                    (1.0 / (c * c) - r.tanh() / r) / r
                }
            }
            AnsatzKind::ArctanCap => {
                let x = 0.5 * PI * r;
                if x < SERIES_THRESHOLD {
                    0.5 * PI * (-2.0 * x / 3.0 + 4.0 * x * x * x / 5.0)
                } else {
                    0.5 * PI * (1.0 / (x * (1.0 + x * x)) - x.atan() / (x * x))
                }
            }
            AnsatzKind::KmmMomentumWeighted => 2.0 * r / 3.0,
        }
    }

    /// dH/dr / r, finite everywhere.
    pub fn h_prime_over_r_dimless(&self, r: f64) -> f64 {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmPositionWeighted => 0.0,
            AnsatzKind::TanhCap => {
                if r < SERIES_THRESHOLD {
                    -2.0 / 3.0 + 8.0 * r * r / 15.0
                } else {
                    self.h_prime_dimless(r) / r
                }
            }
            AnsatzKind::ArctanCap => {
                let x = 0.5 * PI * r;
                if x < SERIES_THRESHOLD {
                    0.25 * PI * PI * (-2.0 / 3.0 + 4.0 * x * x / 5.0)
                } else {
                    self.h_prime_dimless(r) / r
                }
            }
            AnsatzKind::KmmMomentumWeighted => 2.0 / 3.0,
        }
    }

    /// G(r) G'(r) / r, the proportionality factor in the position-position
    /// commutator, finite at r = 0.
    pub fn g_gprime_over_r_dimless(&self, r: f64) -> f64 {
        self.g_dimless(r) * self.g_prime_over_r_dimless(r)
    }

    /// (H, H'/r) sharing one transcendental evaluation; the hot path of the
    /// quadrature engine.
    #[inline]
    pub fn h_with_slope_dimless(&self, r: f64) -> (f64, f64) {
        match self.kind {
            AnsatzKind::Identity | AnsatzKind::KmmPositionWeighted => (1.0, 0.0),
            AnsatzKind::TanhCap => {
                if r < SERIES_THRESHOLD {
                    (1.0 - r * r / 3.0, -2.0 / 3.0 + 8.0 * r * r / 15.0)
                } else {
                    let t = r.tanh();
                    let h = t / r;
                    // sech^2 = 1 - tanh^2
                    ((h), ((1.0 - t * t) - h) / (r * r))
                }
            }
            AnsatzKind::ArctanCap => {
                let x = 0.5 * PI * r;
                if x < SERIES_THRESHOLD {
                    (
                        1.0 - x * x / 3.0,
                        0.25 * PI * PI * (-2.0 / 3.0 + 4.0 * x * x / 5.0),
                    )
                } else {
                    let a = x.atan();
                    let h = a / x;
                    let dh_dx = 1.0 / (x * (1.0 + x * x)) - a / (x * x);
                    (h, 0.25 * PI * PI * dh_dx / x)
                }
            }
            AnsatzKind::KmmMomentumWeighted => (1.0 + r * r / 3.0, 2.0 / 3.0),
        }
    }

    /// Scale (in p_max units) below which the ansatz functions must be
    /// resolved by quadrature; set by the distance of the nearest complex
    /// singularity of G, H and 1/G from the real axis.
    pub fn resolution_scale(&self) -> f64 {
        match self.kind {
            // tanh/cosh poles at i pi/2
            AnsatzKind::TanhCap => 0.9,
            // arctan branch points and 1/G poles at 2i/pi
            AnsatzKind::ArctanCap => 0.5,
            // 1/G pole at i
            AnsatzKind::KmmPositionWeighted => 0.65,
            AnsatzKind::Identity | AnsatzKind::KmmMomentumWeighted => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::series;

    fn model(kind: AnsatzKind) -> AnsatzModel {
        AnsatzModel::natural(kind)
    }

    #[test]
    fn scales_reject_nonpositive() {
        assert!(PhysicalScales::new(-1.0, 1.0).is_err());
        assert!(PhysicalScales::new(1.0, 0.0).is_err());
        assert!(PhysicalScales::new(f64::NAN, 1.0).is_err());
        let s = PhysicalScales::new(2.0, 4.0).unwrap();
        assert_eq!(s.min_length_scale(), 0.5);
    }

    #[test]
    fn eval_rejects_negative_momentum() {
        let m = model(AnsatzKind::TanhCap);
        assert!(m.eval_g(-0.1).is_err());
        assert!(m.eval_h(-1e-30).is_err());
    }

    #[test]
    fn low_momentum_limits_are_one() {
        for kind in AnsatzKind::ALL {
            let m = model(kind);
            assert_eq!(m.eval_g(0.0).unwrap(), 1.0, "{kind}");
            assert_eq!(m.eval_h(0.0).unwrap(), 1.0, "{kind}");
            // just below the series threshold
            let g = m.eval_g(1e-9).unwrap();
            let h = m.eval_h(1e-9).unwrap();
            assert!((g - 1.0).abs() < 1e-15, "{kind}: g = {g}");
            assert!((h - 1.0).abs() < 1e-15, "{kind}: h = {h}");
        }
    }

    #[test]
    fn tanh_values_at_cap_match_series_oracle() {
        let m = model(AnsatzKind::TanhCap);
        // cosh^2(1) and tanh(1) from the independent series oracle
        let cosh1 = series::cosh(1.0);
        let tanh1 = series::sinh(1.0) / series::cosh(1.0);
        assert!((m.eval_g(1.0).unwrap() - cosh1 * cosh1).abs() < 1e-14);
        assert!((m.eval_h(1.0).unwrap() - tanh1).abs() < 1e-14);
        // frozen oracle values
        assert!((m.eval_g(1.0).unwrap() - 2.3810978455418157).abs() < 1e-12);
        assert!((m.eval_h(1.0).unwrap() - 0.7615941559557649).abs() < 1e-12);
    }

    #[test]
    fn arctan_values_at_cap_match_series_oracle() {
        let m = model(AnsatzKind::ArctanCap);
        let x = 0.5 * PI;
        assert!((m.eval_g(1.0).unwrap() - (1.0 + x * x)).abs() < 1e-14);
        let h_oracle = series::atan(x) / x;
        assert!((m.eval_h(1.0).unwrap() - h_oracle).abs() < 1e-14);
        // frozen oracle values
        assert!((m.eval_g(1.0).unwrap() - 3.4674011002723395).abs() < 1e-12);
        assert!((m.eval_h(1.0).unwrap() - 0.6390929267718916).abs() < 1e-12);
    }

    #[test]
    fn capped_momentum_saturates() {
        let m = model(AnsatzKind::TanhCap);
        assert_eq!(m.capped_momentum([0.0, 0.0, 0.0]), [0.0, 0.0, 0.0]);
        let v = m.capped_momentum([1000.0, 0.0, 0.0]);
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        // tanh(1000) rounds to 1.0 in f64; the cap is saturated, not crossed
        assert!((norm - 1.0).abs() < 1e-6, "norm = {norm}");
        assert!(norm <= 1.0);

        let ma = model(AnsatzKind::ArctanCap);
        let v = ma.capped_momentum([0.0, 500.0, 500.0]);
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!(norm < 1.0);
        assert!((norm - 1.0).abs() < 2e-3);

        let id = model(AnsatzKind::Identity);
        assert_eq!(id.capped_momentum([3.0, -4.0, 5.0]), [3.0, -4.0, 5.0]);
    }

    #[test]
    fn capped_norm_monotone_and_bounded() {
        for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
            let m = model(kind);
            let mut prev = 0.0;
            for k in 1..=400 {
                let p = 10.0 * k as f64 / 400.0;
                let v = m.capped_momentum([p, 0.0, 0.0]);
                let n = v[0].abs();
                assert!(n > prev, "{kind} not monotone at p = {p}");
                assert!(n < 1.0, "{kind} violates the cap at p = {p}");
                prev = n;
            }
        }
        // KMM kinds and Identity are unbounded
        for kind in [
            AnsatzKind::Identity,
            AnsatzKind::KmmPositionWeighted,
            AnsatzKind::KmmMomentumWeighted,
        ] {
            let m = model(kind);
            let v = m.capped_momentum([100.0, 0.0, 0.0]);
            assert!(v[0] >= 100.0);
        }
    }

    #[test]
    fn condition_residual_zero_for_capped_kinds() {
        for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
            let m = model(kind);
            assert!(m.condition_residual_1d(0.5).unwrap().abs() < 1e-12);
            assert!(m.condition_residual_1d(3.0).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn condition_residual_kmm_matches_hand_value() {
        // G = 1 + r^2, d/dp (p * 1) = 1: residual at p = p_max is (1+1)*1 - 1 = 1
        let m = model(AnsatzKind::KmmPositionWeighted);
        assert!((m.condition_residual_1d(1.0).unwrap() - 1.0).abs() < 1e-15);
        // H-weighted KMM has the same residual r^2
        let m = model(AnsatzKind::KmmMomentumWeighted);
        assert!((m.condition_residual_1d(1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_formulas_match_finite_differences() {
        let h = 1e-6;
        for kind in AnsatzKind::ALL {
            let m = model(kind);
            for &r in &[0.05, 0.3, 1.0, 2.5] {
                let num_g = (m.g_dimless(r + h) - m.g_dimless(r - h)) / (2.0 * h);
                assert!(
                    (num_g - m.g_prime_dimless(r)).abs() < 1e-6 * (1.0 + num_g.abs()),
                    "{kind} g' at r = {r}"
                );
                let num_h = (m.h_dimless(r + h) - m.h_dimless(r - h)) / (2.0 * h);
                assert!(
                    (num_h - m.h_prime_dimless(r)).abs() < 1e-6 * (1.0 + num_h.abs()),
                    "{kind} h' at r = {r}"
                );
                let num_dph =
                    ((r + h) * m.h_dimless(r + h) - (r - h) * m.h_dimless(r - h)) / (2.0 * h);
                assert!(
                    (num_dph - m.dph_dimless(r)).abs() < 1e-6 * (1.0 + num_dph.abs()),
                    "{kind} d(rH) at r = {r}"
                );
            }
        }
    }

    #[test]
    fn scalar_maps_even_in_p() {
        // rotational invariance at the scalar level: the maps only see |p|
        for kind in AnsatzKind::ALL {
            let m = model(kind);
            let v1 = m.capped_momentum([0.4, -0.2, 0.7]);
            let v2 = m.capped_momentum([-0.4, 0.2, -0.7]);
            for a in 0..3 {
                assert_eq!(v1[a], -v2[a]);
            }
        }
    }

    #[test]
    fn kind_tokens_round_trip() {
        for kind in AnsatzKind::ALL {
            assert_eq!(kind.token().parse::<AnsatzKind>().unwrap(), kind);
        }
        assert!("cosh".parse::<AnsatzKind>().is_err());
    }
}
