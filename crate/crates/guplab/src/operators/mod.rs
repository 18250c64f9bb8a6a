//! Canonical and modified operators applied to momentum-space states, with
//! commutators formed by literal double application and residual checks
//! against the analytic kernels.

pub mod fd;
mod pointwise;
mod residual;

pub use pointwise::{applied_inner, AppliedClosedForm, MAX_CHAIN};
pub use residual::{
    verify_xp_convergence, verify_xp_identity, verify_xx_identity, ConvergenceReport,
    ResidualReport,
};

use crate::error::{OperatorError, StateError};
use crate::model::{AnsatzModel, Axis};
use crate::states::{GridState, Measure, State};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The operator families of the laboratory, tagged with their axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    CanonicalPosition(Axis),
    CanonicalMomentum(Axis),
    ModifiedPosition(Axis),
    ModifiedMomentum(Axis),
    AngularMomentum(Axis),
}

impl Operator {
    pub fn axis(&self) -> Axis {
        match self {
            Operator::CanonicalPosition(a)
            | Operator::CanonicalMomentum(a)
            | Operator::ModifiedPosition(a)
            | Operator::ModifiedMomentum(a)
            | Operator::AngularMomentum(a) => *a,
        }
    }

    pub(crate) fn validate_axis(&self, dim: usize) -> Result<(), OperatorError> {
        let idx = self.axis().idx();
        let ok = match self {
            Operator::AngularMomentum(_) => dim == 3,
            _ => idx < dim,
        };
        if ok {
            Ok(())
        } else {
            Err(OperatorError::State(StateError::AxisOutOfRange(idx + 1)))
        }
    }
}

/// Result of applying operators to a state; unnormalized by construction.
#[derive(Debug, Clone)]
pub enum AppliedState {
    Grid(GridState),
    ClosedForm(AppliedClosedForm),
}

impl AppliedState {
    pub fn from_state(state: &State, model: &AnsatzModel) -> AppliedState {
        match state {
            State::Grid(g) => AppliedState::Grid(g.clone()),
            State::ClosedForm(m) => {
                AppliedState::ClosedForm(AppliedClosedForm::plain(m.clone(), *model))
            }
        }
    }

    pub fn as_grid(&self) -> Option<&GridState> {
        match self {
            AppliedState::Grid(g) => Some(g),
            _ => None,
        }
    }
}

/// Apply one operator to a state (unnormalized output). Grid states go
/// through finite differences; closed-form states use analytic derivatives.
pub fn apply(op: Operator, model: &AnsatzModel, state: &State) -> Result<AppliedState, OperatorError> {
    apply_applied(op, model, &AppliedState::from_state(state, model))
}

/// Apply one more operator to an already-applied state.
pub fn apply_applied(
    op: Operator,
    model: &AnsatzModel,
    state: &AppliedState,
) -> Result<AppliedState, OperatorError> {
    match state {
        AppliedState::Grid(g) => Ok(AppliedState::Grid(apply_grid(op, model, g)?)),
        AppliedState::ClosedForm(a) => Ok(AppliedState::ClosedForm(a.apply(op)?)),
    }
}

/// Apply an operator to a grid state.
pub fn apply_grid(op: Operator, model: &AnsatzModel, g: &GridState) -> Result<GridState, OperatorError> {
    op.validate_axis(g.dim())?;
    let hbar = model.scales.hbar();
    let p_max = model.scales.p_max();
    let mut out = g.clone();
    match op {
        Operator::CanonicalMomentum(j) => {
            let jj = j.idx();
            map_with_point(&mut out, g, |p, c| c * p[jj]);
        }
        Operator::ModifiedMomentum(j) => {
            let jj = j.idx();
            map_with_point(&mut out, g, |p, c| {
                let r = norm3(p) / p_max;
                c * (p[jj] * model.h_dimless(r))
            });
        }
        Operator::CanonicalPosition(i) => {
            let d = fd::derivative(g, i.idx())?;
            let ih = Complex64::new(0.0, hbar);
            for (o, dv) in out.amplitudes_mut().iter_mut().zip(d) {
                *o = ih * dv;
            }
        }
        Operator::ModifiedPosition(i) => {
            let d = fd::derivative(g, i.idx())?;
            let tmp = with_derivative(g, d);
            map_with_point(&mut out, &tmp, |p, dv| {
                let r = norm3(p) / p_max;
                Complex64::new(0.0, hbar * model.g_dimless(r)) * dv
            });
        }
        Operator::AngularMomentum(k) => {
            let (a, b) = ((k.idx() + 1) % 3, (k.idx() + 2) % 3);
            let da = fd::derivative(g, a)?;
            let db = fd::derivative(g, b)?;
            let sh = g.shape();
            let mut flat = 0;
            let amps = out.amplitudes_mut();
            for i0 in 0..sh[0] {
                for i1 in 0..sh[1] {
                    for i2 in 0..sh[2] {
                        let p = g.point([i0, i1, i2]);
                        amps[flat] = Complex64::new(0.0, -hbar) * (db[flat] * p[a] - da[flat] * p[b]);
                        flat += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn with_derivative(g: &GridState, d: Vec<Complex64>) -> GridState {
    let mut out = g.clone();
    out.amplitudes_mut().copy_from_slice(&d);
    out
}

fn map_with_point(out: &mut GridState, src: &GridState, f: impl Fn([f64; 3], Complex64) -> Complex64) {
    let sh = src.shape();
    let mut flat = 0;
    let amps = out.amplitudes_mut();
    let src_amps = src.amplitudes();
    for i0 in 0..sh[0] {
        for i1 in 0..sh[1] {
            for i2 in 0..sh[2] {
                let p = src.point([i0, i1, i2]);
                amps[flat] = f(p, src_amps[flat]);
                flat += 1;
            }
        }
    }
}

fn norm3(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// A(B psi) - B(A psi) by literal double application.
pub fn commutator_apply(
    a: Operator,
    b: Operator,
    model: &AnsatzModel,
    state: &State,
) -> Result<AppliedState, OperatorError> {
    match state {
        State::Grid(g) => {
            let ab = apply_grid(a, model, &apply_grid(b, model, g)?)?;
            let ba = apply_grid(b, model, &apply_grid(a, model, g)?)?;
            let mut out = ab;
            for (o, v) in out.amplitudes_mut().iter_mut().zip(ba.amplitudes()) {
                *o -= v;
            }
            Ok(AppliedState::Grid(out))
        }
        State::ClosedForm(mix) => Ok(AppliedState::ClosedForm(AppliedClosedForm::commutator(
            mix.clone(),
            *model,
            a,
            b,
        )?)),
    }
}

/// L2 norm of an applied state under the measure.
pub fn applied_norm(state: &AppliedState, measure: &Measure) -> Result<f64, OperatorError> {
    match state {
        AppliedState::Grid(g) => Ok(g.squared_norm_weighted(measure.weight_model()).sqrt()),
        AppliedState::ClosedForm(a) => Ok(applied_inner(a, a, measure)?.re.max(0.0).sqrt()),
    }
}

/// Inner product of two applied states under the measure.
pub fn applied_inner_product(
    a: &AppliedState,
    b: &AppliedState,
    measure: &Measure,
) -> Result<Complex64, OperatorError> {
    match (a, b) {
        (AppliedState::Grid(ga), AppliedState::Grid(gb)) => {
            Ok(ga.inner_weighted(gb, measure.weight_model())?)
        }
        (AppliedState::ClosedForm(ca), AppliedState::ClosedForm(cb)) => {
            applied_inner(ca, cb, measure)
        }
        _ => Err(OperatorError::State(StateError::IncompatibleRepresentations(
            "cannot mix grid and closed-form applied states",
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AnsatzKind;
    use crate::states::{sample_to_grid, GaussianMixture, GaussianState, GridSpec};

    fn gaussian_grid(sigma: f64, n: usize) -> (GaussianMixture, GridState) {
        let mix = GaussianMixture::single(GaussianState::isotropic(sigma).unwrap());
        let spec = GridSpec::cube([0.0; 3], 8.0 * sigma, n, 4).unwrap();
        let grid = sample_to_grid(&mix, &spec).unwrap();
        (mix, grid)
    }

    #[test]
    fn axis_validation_on_apply() {
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let mix = GaussianMixture::single(GaussianState::one_dimensional(0.0, 0.5).unwrap());
        let state: State = mix.into();
        assert!(apply(Operator::ModifiedMomentum(Axis::X2), &model, &state).is_err());
        assert!(apply(Operator::AngularMomentum(Axis::X3), &model, &state).is_err());
        assert!(apply(Operator::ModifiedMomentum(Axis::X1), &model, &state).is_ok());
    }

    #[test]
    fn grid_momentum_application_matches_pointwise_factor() {
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let (_, grid) = gaussian_grid(0.5, 32);
        let out = apply_grid(Operator::ModifiedMomentum(Axis::X1), &model, &grid).unwrap();
        // find the grid point closest to (1, 0, 0) and compare the factor
        let ax = &grid.axes()[0];
        let i0 = (0..ax.count).min_by(|&a, &b| {
            (ax.coord(a) - 1.0)
                .abs()
                .partial_cmp(&(ax.coord(b) - 1.0).abs())
                .unwrap()
        })
        .unwrap();
        let mid = grid.axes()[1].count / 2;
        // inner index of (i0, mid, mid)
        let st = grid.strides();
        let flat = i0 * st[0] + mid * st[1] + mid * st[2];
        let p = grid.point([i0, mid, mid]);
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let expect = grid.amplitudes()[flat] * (p[0] * r.tanh() / r);
        assert!((out.amplitudes()[flat] - expect).norm() < 1e-14);
    }

    #[test]
    fn canonical_commutator_on_grid_is_i_hbar() {
        let model = AnsatzModel::natural(AnsatzKind::Identity);
        let (_, grid) = gaussian_grid(0.5, 64);
        let state = State::Grid(grid.clone());
        let comm = commutator_apply(
            Operator::CanonicalPosition(Axis::X1),
            Operator::CanonicalMomentum(Axis::X1),
            &model,
            &state,
        )
        .unwrap();
        let cg = comm.as_grid().unwrap();
        // residual against i hbar psi
        let mut diff2 = 0.0;
        let mut norm2 = 0.0;
        grid.for_each_point(|flat, _p, w| {
            let target = Complex64::new(0.0, 1.0) * grid.amplitudes()[flat];
            diff2 += w * (cg.amplitudes()[flat] - target).norm_sqr();
            norm2 += w * grid.amplitudes()[flat].norm_sqr();
        });
        let rel = (diff2 / norm2).sqrt();
        // finite-difference truncation of the double application dominates
        assert!(rel < 1e-3, "relative residual {rel}");
    }

    #[test]
    fn momentum_components_commute_on_grid() {
        let model = AnsatzModel::natural(AnsatzKind::ArctanCap);
        let (_, grid) = gaussian_grid(0.4, 32);
        let state = State::Grid(grid.clone());
        let comm = commutator_apply(
            Operator::ModifiedMomentum(Axis::X1),
            Operator::ModifiedMomentum(Axis::X2),
            &model,
            &state,
        )
        .unwrap();
        let n = applied_norm(&comm, &Measure::Flat).unwrap();
        let base = applied_norm(&AppliedState::Grid(grid), &Measure::Flat).unwrap();
        assert!(n < 1e-14 * base, "commutator norm {n}");
    }

    #[test]
    fn modified_position_expectation_vanishes_on_centered_gaussian() {
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let measure = Measure::weighted(model);
        let (mix, _) = gaussian_grid(0.5, 32);
        let state: State = mix.into();
        let x = apply(Operator::ModifiedPosition(Axis::X1), &model, &state).unwrap();
        let plain = AppliedState::from_state(&state, &model);
        let val = applied_inner_product(&plain, &x, &measure).unwrap();
        let n2 = applied_inner_product(&plain, &plain, &measure).unwrap().re;
        assert!(val.norm() / n2 < 1e-12, "<X> = {val}");
    }

    #[test]
    fn modified_position_symmetric_under_weighted_measure() {
        // |<X phi, psi> - <phi, X psi>| small for random smooth pairs
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let measure = Measure::weighted(model);
        let phi = GaussianMixture::new(vec![
            (0.8, GaussianState::boosted(0.4, 0.5).unwrap()),
            (0.4, GaussianState::isotropic(0.8).unwrap()),
        ])
        .unwrap();
        let psi = GaussianMixture::new(vec![(1.0, GaussianState::boosted(-0.3, 0.6).unwrap())])
            .unwrap();
        let sphi: State = phi.into();
        let spsi: State = psi.into();
        let x_phi = apply(Operator::ModifiedPosition(Axis::X1), &model, &sphi).unwrap();
        let x_psi = apply(Operator::ModifiedPosition(Axis::X1), &model, &spsi).unwrap();
        let phi_plain = AppliedState::from_state(&sphi, &model);
        let psi_plain = AppliedState::from_state(&spsi, &model);
        let lhs = applied_inner_product(&x_phi, &psi_plain, &measure).unwrap();
        let rhs = applied_inner_product(&phi_plain, &x_psi, &measure).unwrap();
        assert!(
            (lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn commutator_antisymmetry_on_grid() {
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let (_, grid) = gaussian_grid(0.4, 32);
        let state = State::Grid(grid);
        let ab = commutator_apply(
            Operator::ModifiedPosition(Axis::X1),
            Operator::ModifiedPosition(Axis::X2),
            &model,
            &state,
        )
        .unwrap();
        let ba = commutator_apply(
            Operator::ModifiedPosition(Axis::X2),
            Operator::ModifiedPosition(Axis::X1),
            &model,
            &state,
        )
        .unwrap();
        let (ga, gb) = (ab.as_grid().unwrap(), ba.as_grid().unwrap());
        for (x, y) in ga.amplitudes().iter().zip(gb.amplitudes()) {
            assert_eq!(*x, -*y);
        }
    }
}
