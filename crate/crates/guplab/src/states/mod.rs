//! Momentum-space wave functions: closed-form Gaussian superpositions and
//! sampled grids, with measures, normalization and canonical moments.

mod gaussian;
mod grid;
pub(crate) mod quadrature;

pub use gaussian::{GaussianMixture, GaussianState};
pub use grid::{AxisSpec, GridSpec, GridState, BOUNDARY_DECAY_LIMIT, MIN_POINTS};

use crate::error::StateError;
use crate::model::AnsatzModel;
use num_complex::Complex64;
use quadrature::MeasureKind;

/// Inner-product measure. The weighted variant integrates with 1/G(|p|),
/// the unique weight that makes the modified position operators symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Flat,
    WeightedByInverseG(AnsatzModel),
}

impl Measure {
    pub fn weighted(model: AnsatzModel) -> Self {
        Measure::WeightedByInverseG(model)
    }

    pub(crate) fn weight_model(&self) -> Option<&AnsatzModel> {
        match self {
            Measure::Flat => None,
            Measure::WeightedByInverseG(m) => Some(m),
        }
    }

    pub(crate) fn kind(&self) -> MeasureKind {
        MeasureKind {
            weighted: matches!(self, Measure::WeightedByInverseG(_)),
        }
    }

    /// Weight value at a momentum point.
    pub fn weight(&self, p: [f64; 3]) -> f64 {
        grid::measure_weight(self.weight_model(), p)
    }

    /// Momentum scale used to nondimensionalize quadrature. Flat-measure
    /// integrals have no intrinsic scale and use 1.
    pub(crate) fn p_scale(&self) -> f64 {
        self.weight_model().map_or(1.0, |m| m.scales.p_max())
    }
}

/// A physical state in one of the two representations.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    ClosedForm(GaussianMixture),
    Grid(GridState),
}

impl From<GaussianState> for State {
    fn from(g: GaussianState) -> Self {
        State::ClosedForm(GaussianMixture::single(g))
    }
}

impl From<GaussianMixture> for State {
    fn from(m: GaussianMixture) -> Self {
        State::ClosedForm(m)
    }
}

impl From<GridState> for State {
    fn from(g: GridState) -> Self {
        State::Grid(g)
    }
}

/// Squared norm under the measure.
pub fn squared_norm(state: &State, measure: &Measure) -> Result<f64, StateError> {
    match state {
        State::Grid(g) => Ok(g.squared_norm_weighted(measure.weight_model())),
        State::ClosedForm(mix) => {
            let p_scale = measure.p_scale();
            let n = quadrature::overlap(measure.weight_model(), p_scale, mix, mix)?;
            Ok(n * p_scale.powi(mix.dim as i32))
        }
    }
}

/// Return the state scaled to unit norm under the measure.
pub fn normalize(state: &State, measure: &Measure) -> Result<State, StateError> {
    let n2 = squared_norm(state, measure)?;
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(StateError::ZeroNorm);
    }
    let factor = 1.0 / n2.sqrt();
    Ok(match state {
        State::Grid(g) => {
            let mut g = g.clone();
            for c in g.amplitudes_mut() {
                *c *= factor;
            }
            State::Grid(g)
        }
        State::ClosedForm(mix) => {
            let mut mix = mix.clone();
            mix.rescale(factor);
            State::ClosedForm(mix)
        }
    })
}

/// Inner product `<a, b>`, conjugate-linear in the first argument. Both
/// states must share a representation (and, for grids, the axes).
pub fn inner_product(a: &State, b: &State, measure: &Measure) -> Result<Complex64, StateError> {
    match (a, b) {
        (State::Grid(ga), State::Grid(gb)) => ga.inner_weighted(gb, measure.weight_model()),
        (State::ClosedForm(ma), State::ClosedForm(mb)) => {
            let p_scale = measure.p_scale();
            let v = quadrature::overlap(measure.weight_model(), p_scale, ma, mb)?;
            Ok(Complex64::new(v * p_scale.powi(ma.dim as i32), 0.0))
        }
        _ => Err(StateError::IncompatibleRepresentations(
            "cannot mix grid and closed-form states in one inner product",
        )),
    }
}

/// First and second canonical momentum moments of a normalized state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CanonicalMoments {
    /// <p_a>
    pub mean: [f64; 3],
    /// <p_a p_b>
    pub second: [[f64; 3]; 3],
    /// <|p|^2>
    pub p_squared: f64,
}

impl CanonicalMoments {
    /// <p_perp^2> relative to `axis`: <|p|^2> - <p_axis^2>.
    pub fn p_perp_squared(&self, axis: crate::model::Axis) -> f64 {
        self.p_squared - self.second[axis.idx()][axis.idx()]
    }

    /// Canonical spread sqrt(<p_a^2> - <p_a>^2).
    pub fn spread(&self, axis: crate::model::Axis) -> f64 {
        let a = axis.idx();
        (self.second[a][a] - self.mean[a] * self.mean[a]).max(0.0).sqrt()
    }
}

/// Canonical moments under the measure; the state is normalized internally
/// (moments are scale-invariant ratios).
pub fn canonical_moments(state: &State, measure: &Measure) -> Result<CanonicalMoments, StateError> {
    match state {
        State::Grid(g) => {
            let wm = measure.weight_model();
            let mut norm = 0.0;
            let mut mean = [0.0; 3];
            let mut second = [[0.0; 3]; 3];
            let mut psq = 0.0;
            g.for_each_point(|flat, p, w| {
                let ww = w * grid::measure_weight(wm, p) * g.amplitudes()[flat].norm_sqr();
                norm += ww;
                for a in 0..3 {
                    mean[a] += ww * p[a];
                    for b in 0..3 {
                        second[a][b] += ww * p[a] * p[b];
                    }
                }
                psq += ww * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            });
            if !(norm > 0.0) {
                return Err(StateError::ZeroNorm);
            }
            for a in 0..3 {
                mean[a] /= norm;
                for b in 0..3 {
                    second[a][b] /= norm;
                }
            }
            Ok(CanonicalMoments {
                mean,
                second,
                p_squared: psq / norm,
            })
        }
        State::ClosedForm(mix) => {
            // the report driver computes canonical moments alongside the rest;
            // use the measure's own model (or the canonical one for flat)
            let model = measure
                .weight_model()
                .copied()
                .unwrap_or_else(|| AnsatzModel::natural(crate::model::AnsatzKind::Identity));
            let r = quadrature::report_integrals(&model, measure.kind(), mix)?;
            if !(r.norm > 0.0) {
                return Err(StateError::ZeroNorm);
            }
            let p_max = model.scales.p_max();
            let mut mean = [0.0; 3];
            let mut second = [[0.0; 3]; 3];
            for a in 0..3 {
                mean[a] = p_max * r.cp1[a] / r.norm;
                for b in 0..3 {
                    second[a][b] = p_max * p_max * r.cpp[a][b] / r.norm;
                }
            }
            Ok(CanonicalMoments {
                mean,
                second,
                p_squared: p_max * p_max * r.psq / r.norm,
            })
        }
    }
}

/// Sample a closed-form state onto a grid. The axes must cover every
/// component's center by at least eight widths in each active direction.
pub fn sample_to_grid(mix: &GaussianMixture, spec: &GridSpec) -> Result<GridState, StateError> {
    if spec.axes.len() != mix.dim {
        return Err(StateError::InvalidDimension(spec.axes.len()));
    }
    for (a, ax) in spec.axes.iter().enumerate() {
        let (need_lo, need_hi) = mix.coverage(a, 8.0);
        let tol = 1e-12 * (ax.max - ax.min).abs();
        if ax.min > need_lo + tol || ax.max < need_hi - tol {
            return Err(StateError::CoverageTooSmall {
                axis: a + 1,
                lo: ax.min,
                hi: ax.max,
                need_lo,
                need_hi,
            });
        }
    }
    let shape: Vec<usize> = spec.axes.iter().map(|a| a.count).collect();
    let total: usize = shape.iter().product();
    let mut amps = Vec::with_capacity(total);
    match mix.dim {
        1 => {
            for i0 in 0..shape[0] {
                let p = [spec.axes[0].coord(i0), 0.0, 0.0];
                amps.push(Complex64::new(mix.eval(p), 0.0));
            }
        }
        _ => {
            for i0 in 0..shape[0] {
                for i1 in 0..shape[1] {
                    for i2 in 0..shape[2] {
                        let p = [
                            spec.axes[0].coord(i0),
                            spec.axes[1].coord(i1),
                            spec.axes[2].coord(i2),
                        ];
                        amps.push(Complex64::new(mix.eval(p), 0.0));
                    }
                }
            }
        }
    }
    GridState::new_unchecked(spec.clone(), amps)
}
