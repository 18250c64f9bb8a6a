//! Residual checks of the operator identities against the analytic kernels.

use super::{apply_grid, commutator_apply, Operator};
use crate::error::OperatorError;
use crate::model::{Axis, AnsatzModel, KernelForm, SERIES_THRESHOLD};
use crate::states::{sample_to_grid, GaussianMixture, GridSpec, GridState, State, BOUNDARY_DECAY_LIMIT};
use num_complex::Complex64;
use serde::Serialize;

/// Relative L2 residual of an operator identity on one grid.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// which identity, e.g. "xp-1-2"
    pub identity: String,
    /// grid points per axis
    pub resolution: usize,
    /// ||lhs - rhs|| / ||psi|| under the flat grid norm
    pub residual: f64,
    /// same, weighted by the symmetric measure 1/G
    pub residual_weighted: f64,
    pub warnings: Vec<String>,
}

/// Residuals at a base resolution and its doubling, with the shrink ratio.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub coarse: ResidualReport,
    pub fine: ResidualReport,
    /// coarse residual / fine residual; ~2^order for smooth states
    pub ratio: f64,
}

fn rel_l2(
    diff: &GridState,
    base: &GridState,
    weight_model: Option<&AnsatzModel>,
) -> f64 {
    let num = diff.squared_norm_weighted(weight_model);
    let den = base.squared_norm_weighted(weight_model);
    (num / den).sqrt()
}

fn boundary_warning(g: &GridState, what: &str, warnings: &mut Vec<String>) {
    let ratio = g.boundary_decay_ratio();
    if ratio > BOUNDARY_DECAY_LIMIT {
        warnings.push(format!(
            "{what}: boundary amplitude {ratio:.2e} of peak exceeds {BOUNDARY_DECAY_LIMIT:.0e}"
        ));
    }
}

/// Compare grid-applied [X_i, P_j] psi against i hbar k_exact(p) psi.
pub fn verify_xp_identity(
    model: &AnsatzModel,
    grid: &GridState,
    i: Axis,
    j: Axis,
) -> Result<ResidualReport, OperatorError> {
    let state = State::Grid(grid.clone());
    let comm = commutator_apply(
        Operator::ModifiedPosition(i),
        Operator::ModifiedMomentum(j),
        model,
        &state,
    )?;
    let cg = comm.as_grid().expect("grid in, grid out");
    let hbar = model.scales.hbar();
    let mut diff = cg.clone();
    let sh = grid.shape();
    let mut flat = 0;
    for i0 in 0..sh[0] {
        for i1 in 0..sh[1] {
            for i2 in 0..sh[2] {
                let p = grid.point([i0, i1, i2]);
                let k = model
                    .commutator_kernel(KernelForm::Exact, p, i, j)
                    .map_err(|_| crate::error::StateError::NonFinite { what: "kernel" })?;
                let target = Complex64::new(0.0, hbar * k) * grid.amplitudes()[flat];
                diff.amplitudes_mut()[flat] = cg.amplitudes()[flat] - target;
                flat += 1;
            }
        }
    }
    let mut warnings = Vec::new();
    boundary_warning(cg, "commutator output", &mut warnings);
    Ok(ResidualReport {
        identity: format!("xp-{i}-{j}"),
        resolution: grid.axes()[0].count,
        residual: rel_l2(&diff, grid, None),
        residual_weighted: rel_l2(&diff, grid, Some(model)),
        warnings,
    })
}

/// Compare grid-applied [X_i, X_j] psi against
/// -i hbar (G G'/|p|) eps_ijk l_k psi.
pub fn verify_xx_identity(
    model: &AnsatzModel,
    grid: &GridState,
    i: Axis,
    j: Axis,
) -> Result<ResidualReport, OperatorError> {
    let k = Axis::complement(i, j).ok_or(crate::error::StateError::AxisOutOfRange(j.index()))?;
    let eps = crate::model::levi_civita(i.idx(), j.idx(), k.idx());
    let state = State::Grid(grid.clone());
    let comm = commutator_apply(
        Operator::ModifiedPosition(i),
        Operator::ModifiedPosition(j),
        model,
        &state,
    )?;
    let cg = comm.as_grid().expect("grid in, grid out");
    let lk = apply_grid(Operator::AngularMomentum(k), model, grid)?;
    let hbar = model.scales.hbar();
    let p_max = model.scales.p_max();
    let mut diff = cg.clone();
    let sh = grid.shape();
    let mut flat = 0;
    for i0 in 0..sh[0] {
        for i1 in 0..sh[1] {
            for i2 in 0..sh[2] {
                let p = grid.point([i0, i1, i2]);
                let u = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                let r = (u / p_max).max(SERIES_THRESHOLD);
                // physical G G'/|p| = g(r) g'(r) / (r p_max^2)
                let fac = model.g_gprime_over_r_dimless(r) / (p_max * p_max);
                let target = Complex64::new(0.0, -hbar * fac * eps) * lk.amplitudes()[flat];
                diff.amplitudes_mut()[flat] = cg.amplitudes()[flat] - target;
                flat += 1;
            }
        }
    }
    let mut warnings = Vec::new();
    boundary_warning(cg, "double position application", &mut warnings);
    Ok(ResidualReport {
        identity: format!("xx-{i}-{j}"),
        resolution: grid.axes()[0].count,
        residual: rel_l2(&diff, grid, None),
        residual_weighted: rel_l2(&diff, grid, Some(model)),
        warnings,
    })
}

/// Run the [X_i, P_j] identity at the sampled resolution and its doubling,
/// re-sampling the closed-form source on the finer grid.
pub fn verify_xp_convergence(
    model: &AnsatzModel,
    source: &GaussianMixture,
    spec: &GridSpec,
    i: Axis,
    j: Axis,
) -> Result<ConvergenceReport, OperatorError> {
    let coarse_grid = sample_to_grid(source, spec)?;
    let coarse = verify_xp_identity(model, &coarse_grid, i, j)?;
    drop(coarse_grid);
    let fine_axes = spec
        .axes
        .iter()
        .map(|a| crate::states::AxisSpec::new(a.min, a.max, 2 * a.count))
        .collect::<Result<Vec<_>, _>>()?;
    let fine_spec = GridSpec::new(fine_axes, spec.derivative_order)?;
    let fine_grid = sample_to_grid(source, &fine_spec)?;
    let fine = verify_xp_identity(model, &fine_grid, i, j)?;
    let ratio = coarse.residual / fine.residual;
    Ok(ConvergenceReport { coarse, fine, ratio })
}
