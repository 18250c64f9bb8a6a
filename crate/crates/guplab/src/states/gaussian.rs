//! Closed-form momentum-space states: Gaussians and their superpositions.
//!
//! Every component is stored flat-normalized; the mixture carries one
//! overall scale that `normalize` adjusts for the chosen measure. All
//! partial derivatives are available in closed form, which makes these
//! states machine-precision oracles for the grid representation.

use crate::error::StateError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A single Gaussian in momentum space, amplitude
/// `A * exp(-sum_a (p_a - c_a)^2 / (4 sigma_a^2))`, so that `sigma_a` is the
/// standard deviation of |psi|^2 along axis `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub center: [f64; 3],
    pub widths: [f64; 3],
    pub dim: usize,
    amplitude: f64,
}

impl GaussianState {
    pub fn new(center: [f64; 3], widths: [f64; 3], dim: usize) -> Result<Self, StateError> {
        if dim != 1 && dim != 3 {
            return Err(StateError::InvalidDimension(dim));
        }
        let mut center = center;
        let mut widths = widths;
        for a in dim..3 {
            center[a] = 0.0;
            widths[a] = 1.0; // inert axes
        }
        for a in 0..dim {
            if !(widths[a].is_finite() && widths[a] > 0.0) {
                return Err(StateError::InvalidWidth(widths[a]));
            }
            if !center[a].is_finite() {
                return Err(StateError::InvalidWidth(center[a]));
            }
        }
        let mut amplitude = 1.0;
        for a in 0..dim {
            amplitude *= (2.0 * PI * widths[a] * widths[a]).powf(-0.25);
        }
        Ok(Self {
            center,
            widths,
            dim,
            amplitude,
        })
    }

    /// Isotropic 3D Gaussian centered at the origin.
    pub fn isotropic(sigma: f64) -> Result<Self, StateError> {
        Self::new([0.0; 3], [sigma; 3], 3)
    }

    /// Isotropic 3D Gaussian with mean momentum `p1` along axis 1.
    pub fn boosted(p1: f64, sigma: f64) -> Result<Self, StateError> {
        Self::new([p1, 0.0, 0.0], [sigma; 3], 3)
    }

    /// 1D Gaussian.
    pub fn one_dimensional(center: f64, sigma: f64) -> Result<Self, StateError> {
        Self::new([center, 0.0, 0.0], [sigma, 1.0, 1.0], 1)
    }

    /// Flat-measure normalization constant (2 pi sigma^2)^(-d/4) per axis.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Value of the (flat-normalized) Gaussian at `p`.
    pub fn eval(&self, p: [f64; 3]) -> f64 {
        let mut e = 0.0;
        for a in 0..self.dim {
            let d = p[a] - self.center[a];
            e += d * d / (4.0 * self.widths[a] * self.widths[a]);
        }
        self.amplitude * (-e).exp()
    }

    /// Logarithmic derivative factor: `d/dp_a psi = lambda_a(p) psi` with
    /// `lambda_a = -(p_a - c_a) / (2 sigma_a^2)`.
    pub fn log_deriv(&self, p: [f64; 3], axis: usize) -> f64 {
        if axis >= self.dim {
            return 0.0;
        }
        -(p[axis] - self.center[axis]) / (2.0 * self.widths[axis] * self.widths[axis])
    }

    /// `d^2/dp_a dp_b psi = mu_ab(p) psi`.
    pub fn log_deriv2(&self, p: [f64; 3], a: usize, b: usize) -> f64 {
        let la = self.log_deriv(p, a);
        let lb = self.log_deriv(p, b);
        let extra = if a == b && a < self.dim {
            -1.0 / (2.0 * self.widths[a] * self.widths[a])
        } else {
            0.0
        };
        la * lb + extra
    }
}

/// A weighed superposition of Gaussians sharing one dimensionality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixture {
    pub dim: usize,
    components: Vec<(f64, GaussianState)>,
    scale: f64,
}

impl GaussianMixture {
    pub fn new(components: Vec<(f64, GaussianState)>) -> Result<Self, StateError> {
        let dim = components
            .first()
            .map(|(_, g)| g.dim)
            .ok_or(StateError::ZeroNorm)?;
        if components.iter().any(|(w, g)| g.dim != dim || !w.is_finite()) {
            return Err(StateError::IncompatibleRepresentations(
                "mixture components must share dimensionality and have finite weights",
            ));
        }
        Ok(Self {
            dim,
            components,
            scale: 1.0,
        })
    }

    pub fn single(g: GaussianState) -> Self {
        Self {
            dim: g.dim,
            components: vec![(1.0, g)],
            scale: 1.0,
        }
    }

    pub fn components(&self) -> &[(f64, GaussianState)] {
        &self.components
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub(crate) fn rescale(&mut self, factor: f64) {
        self.scale *= factor;
    }

    /// Effective weight of component `k` including the mixture scale and the
    /// component's flat-normalization amplitude.
    pub(crate) fn effective_weight(&self, k: usize) -> f64 {
        let (w, g) = &self.components[k];
        self.scale * w * g.amplitude()
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        self.scale
            * self
                .components
                .iter()
                .map(|(w, g)| w * g.eval(p))
                .sum::<f64>()
    }

    /// First derivative along `axis`.
    pub fn eval_deriv(&self, p: [f64; 3], axis: usize) -> f64 {
        self.scale
            * self
                .components
                .iter()
                .map(|(w, g)| w * g.log_deriv(p, axis) * g.eval(p))
                .sum::<f64>()
    }

    /// Second derivative along the pair of axes.
    pub fn eval_deriv2(&self, p: [f64; 3], a: usize, b: usize) -> f64 {
        self.scale
            * self
                .components
                .iter()
                .map(|(w, g)| w * g.log_deriv2(p, a, b) * g.eval(p))
                .sum::<f64>()
    }

    /// All components centered at the origin with equal widths on every
    /// active axis (spherically symmetric superposition).
    pub fn is_isotropic_centered(&self) -> bool {
        self.dim == 3
            && self.components.iter().all(|(_, g)| {
                g.center == [0.0; 3] && g.widths[0] == g.widths[1] && g.widths[1] == g.widths[2]
            })
    }

    /// All components centered on axis 1 with equal transverse widths
    /// (rotationally symmetric about axis 1).
    pub fn is_axisymmetric(&self) -> bool {
        self.dim == 3
            && self.components.iter().all(|(_, g)| {
                g.center[1] == 0.0 && g.center[2] == 0.0 && g.widths[1] == g.widths[2]
            })
    }

    /// Coverage interval [lo, hi] = union over components of
    /// center +/- `n_widths` sigma on the given axis.
    pub fn coverage(&self, axis: usize, n_widths: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, g) in &self.components {
            lo = lo.min(g.center[axis] - n_widths * g.widths[axis]);
            hi = hi.max(g.center[axis] + n_widths * g.widths[axis]);
        }
        (lo, hi)
    }
}

impl From<GaussianState> for GaussianMixture {
    fn from(g: GaussianState) -> Self {
        GaussianMixture::single(g)
    }
}
