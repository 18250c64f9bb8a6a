//! Sampled momentum-space states on uniform tensor grids, with trapezoid
//! quadrature and a flat binary / CSV serialization.

use crate::error::StateError;
use crate::model::AnsatzModel;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Hard validity limit on boundary amplitude relative to the peak; above
/// this, differentiation and quadrature results are meaningless.
pub const BOUNDARY_DECAY_LIMIT: f64 = 1e-6;

/// Minimum number of sample points per axis.
pub const MIN_POINTS: usize = 16;

/// One uniformly sampled axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self, StateError> {
        if count < MIN_POINTS {
            return Err(StateError::TooFewPoints {
                min: MIN_POINTS,
                got: count,
            });
        }
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(StateError::BadAxisRange { lo: min, hi: max });
        }
        Ok(Self { min, max, count })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.min + self.step() * i as f64
    }
}

/// Axes plus finite-difference order; the recipe for sampling a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<AxisSpec>,
    pub derivative_order: usize,
}

impl GridSpec {
    pub fn new(axes: Vec<AxisSpec>, derivative_order: usize) -> Result<Self, StateError> {
        if axes.len() != 1 && axes.len() != 3 {
            return Err(StateError::InvalidDimension(axes.len()));
        }
        if derivative_order != 2 && derivative_order != 4 {
            return Err(StateError::InvalidDimension(derivative_order));
        }
        Ok(Self {
            axes,
            derivative_order,
        })
    }

    /// Cube of `count` points per axis covering `center +/- half` on each.
    pub fn cube(center: [f64; 3], half: f64, count: usize, order: usize) -> Result<Self, StateError> {
        let axes = (0..3)
            .map(|a| AxisSpec::new(center[a] - half, center[a] + half, count))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(axes, order)
    }
}

/// A complex field sampled on a tensor-product grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    axes: Vec<AxisSpec>,
    derivative_order: usize,
    amps: Vec<Complex64>,
}

impl GridState {
    /// Public constructor: validates shape, decay and finiteness.
    pub fn new(spec: GridSpec, amps: Vec<Complex64>) -> Result<Self, StateError> {
        let state = Self::new_unchecked(spec, amps)?;
        let ratio = state.boundary_decay_ratio();
        if !(ratio <= BOUNDARY_DECAY_LIMIT) {
            return Err(StateError::BoundaryDecay {
                ratio,
                limit: BOUNDARY_DECAY_LIMIT,
            });
        }
        Ok(state)
    }

    /// Internal constructor for operator outputs, which may legitimately be
    /// less decayed at the boundary; shape is still validated.
    pub(crate) fn new_unchecked(spec: GridSpec, amps: Vec<Complex64>) -> Result<Self, StateError> {
        let n: usize = spec.axes.iter().map(|a| a.count).product();
        if amps.len() != n {
            return Err(StateError::IncompatibleRepresentations(
                "amplitude buffer does not match the grid shape",
            ));
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(StateError::NonFinite {
                what: "grid amplitudes",
            });
        }
        Ok(Self {
            axes: spec.axes,
            derivative_order: spec.derivative_order,
            amps,
        })
    }

    pub fn axes(&self) -> &[AxisSpec] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn derivative_order(&self) -> usize {
        self.derivative_order
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            axes: self.axes.clone(),
            derivative_order: self.derivative_order,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Shape padded to three axes (inert axes have one point).
    pub fn shape(&self) -> [usize; 3] {
        match self.axes.len() {
            1 => [self.axes[0].count, 1, 1],
            _ => [self.axes[0].count, self.axes[1].count, self.axes[2].count],
        }
    }

    /// Row-major strides matching `shape` (last axis contiguous).
    pub fn strides(&self) -> [usize; 3] {
        let s = self.shape();
        [s[1] * s[2], s[2], 1]
    }

    pub fn point(&self, idx: [usize; 3]) -> [f64; 3] {
        let mut p = [0.0; 3];
        for a in 0..self.axes.len() {
            p[a] = self.axes[a].coord(idx[a]);
        }
        p
    }

    /// Trapezoid weight of one point (product over axes of h, halved at the
    /// endpoints).
    fn quad_weight(&self, idx: [usize; 3]) -> f64 {
        let mut w = 1.0;
        for a in 0..self.axes.len() {
            let ax = &self.axes[a];
            let mut wa = ax.step();
            if idx[a] == 0 || idx[a] == ax.count - 1 {
                wa *= 0.5;
            }
            w *= wa;
        }
        w
    }

    /// Iterate (flat index, point, quadrature weight).
    pub(crate) fn for_each_point(&self, mut f: impl FnMut(usize, [f64; 3], f64)) {
        let sh = self.shape();
        let mut flat = 0;
        for i0 in 0..sh[0] {
            for i1 in 0..sh[1] {
                for i2 in 0..sh[2] {
                    let idx = [i0, i1, i2];
                    f(flat, self.point(idx), self.quad_weight(idx));
                    flat += 1;
                }
            }
        }
    }

    /// Largest boundary amplitude magnitude relative to the peak magnitude.
    pub fn boundary_decay_ratio(&self) -> f64 {
        let sh = self.shape();
        let st = self.strides();
        let mut peak = 0.0f64;
        for c in &self.amps {
            peak = peak.max(c.norm_sqr());
        }
        if peak == 0.0 {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        let dim = self.axes.len();
        let mut flat = 0;
        for i0 in 0..sh[0] {
            for i1 in 0..sh[1] {
                for i2 in 0..sh[2] {
                    let idx = [i0, i1, i2];
                    let mut on_boundary = false;
                    for a in 0..dim {
                        if idx[a] == 0 || idx[a] == sh[a] - 1 {
                            on_boundary = true;
                        }
                    }
                    if on_boundary {
                        worst = worst.max(self.amps[flat].norm_sqr());
                    }
                    flat += 1;
                }
            }
        }
        let _ = st;
        (worst / peak).sqrt()
    }

    /// Squared norm under the measure weight (`None` = flat).
    pub fn squared_norm_weighted(&self, weight_model: Option<&AnsatzModel>) -> f64 {
        let mut acc = 0.0;
        self.for_each_point(|flat, p, w| {
            let wm = measure_weight(weight_model, p);
            acc += w * wm * self.amps[flat].norm_sqr();
        });
        acc
    }

    /// Inner product `<self, other>` (conjugate-linear in `self`) under the
    /// measure weight.
    pub fn inner_weighted(
        &self,
        other: &GridState,
        weight_model: Option<&AnsatzModel>,
    ) -> Result<Complex64, StateError> {
        if self.axes != other.axes {
            return Err(StateError::IncompatibleGrids);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        self.for_each_point(|flat, p, w| {
            let wm = measure_weight(weight_model, p);
            acc += self.amps[flat].conj() * other.amps[flat] * (w * wm);
        });
        Ok(acc)
    }

    // ---- serialization ----

    const MAGIC: &'static [u8; 8] = b"GUPGRID1";

    /// Flat binary layout: magic, dimension, derivative order, axis records
    /// (min, max, count), then row-major amplitudes as (re, im) f64 pairs,
    /// all little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(32 + 16 * self.amps.len());
        out.extend_from_slice(Self::MAGIC);
        out.extend_from_slice(&(self.axes.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.derivative_order as u32).to_le_bytes());
        for ax in &self.axes {
            out.extend_from_slice(&ax.min.to_le_bytes());
            out.extend_from_slice(&ax.max.to_le_bytes());
            out.extend_from_slice(&(ax.count as u64).to_le_bytes());
        }
        for c in &self.amps {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, StateError> {
        let bad = || StateError::IncompatibleRepresentations("malformed grid file");
        if bytes.len() < 16 || &bytes[..8] != Self::MAGIC {
            return Err(bad());
        }
        let rd_u32 = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let rd_u64 = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let rd_f64 = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let dim = rd_u32(8) as usize;
        let order = rd_u32(12) as usize;
        if dim != 1 && dim != 3 {
            return Err(bad());
        }
        let mut off = 16;
        let mut axes = Vec::with_capacity(dim);
        for _ in 0..dim {
            if bytes.len() < off + 24 {
                return Err(bad());
            }
            axes.push(AxisSpec::new(rd_f64(off), rd_f64(off + 8), rd_u64(off + 16) as usize)?);
            off += 24;
        }
        let n: usize = axes.iter().map(|a| a.count).product();
        if bytes.len() != off + 16 * n {
            return Err(bad());
        }
        let mut amps = Vec::with_capacity(n);
        for k in 0..n {
            let o = off + 16 * k;
            amps.push(Complex64::new(rd_f64(o), rd_f64(o + 8)));
        }
        Self::new_unchecked(GridSpec::new(axes, order)?, amps)
    }

    /// CSV rows `i0,i1,i2,p1,p2,p3,re,im`; intended for small grids.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i0,i1,i2,p1,p2,p3,re,im\n");
        let sh = self.shape();
        let mut flat = 0;
        for i0 in 0..sh[0] {
            for i1 in 0..sh[1] {
                for i2 in 0..sh[2] {
                    let p = self.point([i0, i1, i2]);
                    let c = self.amps[flat];
                    out.push_str(&format!(
                        "{i0},{i1},{i2},{},{},{},{},{}\n",
                        p[0], p[1], p[2], c.re, c.im
                    ));
                    flat += 1;
                }
            }
        }
        out
    }
}

pub(crate) fn measure_weight(weight_model: Option<&AnsatzModel>, p: [f64; 3]) -> f64 {
    match weight_model {
        None => 1.0,
        Some(m) => {
            let u = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            1.0 / m.g_dimless(u / m.scales.p_max())
        }
    }
}
