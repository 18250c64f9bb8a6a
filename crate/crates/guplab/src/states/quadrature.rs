//! Quadrature engine for closed-form states.
//!
//! Gaussian mixtures are integrated pairwise: the product of two components
//! is again a Gaussian, so every pair gets its own box, sized from the pair
//! width plus an extension that accounts for the outward tilt exp(2|p|/p_max)
//! of the hyperbolic weight. Three geometries share one integrand
//! accumulator:
//!
//! * spherically symmetric states: radial trapezoid x Gauss-Legendre in
//!   cos(theta) x uniform azimuthal rule,
//! * axis-1 symmetric states: axial trapezoid x Gauss-Legendre in the
//!   transverse radius x uniform azimuthal rule,
//! * everything else (and 1D states): tensor-product trapezoid boxes.
//!
//! Everything is computed in reduced momentum x = p / p_max; consumers
//! restore units.

use super::gaussian::GaussianMixture;
use crate::error::StateError;
use crate::model::{AnsatzKind, AnsatzModel};

/// Gaussian padding in pair widths; exp(-PAD^2/2) ~ 1.3e-14.
const PAD: f64 = 8.0;
/// Grid step in pair widths (capped at the scale of the ansatz functions).
const STEP_DIV: f64 = 3.0;
/// Which integrand families a sweep accumulates. Momentum-only sweeps skip
/// the position-variance terms and with them the hyperbolic tilt, which
/// keeps the momentum-cap suites cheap.
#[derive(Clone, Copy, PartialEq)]
pub(crate) enum SweepScope {
    Full,
    MomentsOnly,
}
/// Coarse-path threshold for the 2D cylindrical driver: pairs wider than
/// this (in p_max units) stop resolving the p_max-scale structure of the
/// ansatz functions, trading ~1e-4 relative accuracy for bounded cost.
const CYL_COARSE_WIDTH: f64 = 2.0;
/// Contributions with pair-Gaussian factor below this are dropped.
const GAUSS_CUTOFF: f64 = 1e-280;
/// Gauss-Legendre nodes for the polar direction (exact through degree 15).
const N_THETA: usize = 8;
/// Uniform azimuthal nodes (exact for harmonics up to order 11).
const N_PHI: usize = 12;

/// Raw weighted integrals of a mixture against the modified-operator
/// integrands, all in reduced momentum units.
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct ReportIntegrals {
    /// integral of w psi^2
    pub norm: f64,
    /// integral of w G psi d_a psi ; <X_a> = i (hbar/p_max) x_asym/norm
    pub x_asym: [f64; 3],
    /// integral of w G^2 (d_a psi)^2
    pub xx: [f64; 3],
    /// integral of w x_a H psi^2
    pub p1: [f64; 3],
    /// integral of w (x_a H)^2 psi^2
    pub pp: [f64; 3],
    /// integral of w x_a psi^2
    pub cp1: [f64; 3],
    /// integral of w x_a x_b psi^2
    pub cpp: [[f64; 3]; 3],
    /// integral of w psi ([X_i, P_j] / (i hbar)) psi by double application
    pub comm: [[f64; 3]; 3],
    /// integral of w |x|^2 psi^2
    pub psq: f64,
}

impl ReportIntegrals {
    fn add(&mut self, o: &ReportIntegrals) {
        self.norm += o.norm;
        self.psq += o.psq;
        for a in 0..3 {
            self.x_asym[a] += o.x_asym[a];
            self.xx[a] += o.xx[a];
            self.p1[a] += o.p1[a];
            self.pp[a] += o.pp[a];
            self.cp1[a] += o.cp1[a];
            for b in 0..3 {
                self.cpp[a][b] += o.cpp[a][b];
                self.comm[a][b] += o.comm[a][b];
            }
        }
    }

    fn has_nan(&self) -> bool {
        let mut vals = vec![self.norm, self.psq];
        for a in 0..3 {
            vals.extend([self.x_asym[a], self.xx[a], self.p1[a], self.pp[a], self.cp1[a]]);
            for b in 0..3 {
                vals.extend([self.cpp[a][b], self.comm[a][b]]);
            }
        }
        vals.iter().any(|v| v.is_nan())
    }
}

/// One ordered component pair in reduced units.
struct PairGeom {
    /// product of effective weights and the center-offset constant
    ww: f64,
    /// pair-Gaussian centers and quadratic coefficients per axis:
    /// exponent = -sum_a alpha_a (x_a - m_a)^2
    m: [f64; 3],
    alpha: [f64; 3],
    /// pair width s_a = 1/sqrt(2 alpha_a)
    s: [f64; 3],
    /// log-derivative data of the two components
    ck: [f64; 3],
    k2k: [f64; 3],
    cl: [f64; 3],
    k2l: [f64; 3],
}

impl PairGeom {
    fn build(mix: &GaussianMixture, p_max: f64, k: usize, l: usize, mult: f64) -> Option<PairGeom> {
        let (_, gk) = &mix.components()[k];
        let (_, gl) = &mix.components()[l];
        let wk = mix.effective_weight(k) * mult;
        let wl = mix.effective_weight(l);
        let mut m = [0.0; 3];
        let mut alpha = [1.0; 3];
        let mut s = [1.0; 3];
        let mut ck = [0.0; 3];
        let mut cl = [0.0; 3];
        let mut k2k = [0.0; 3];
        let mut k2l = [0.0; 3];
        let mut shift = 0.0;
        for a in 0..mix.dim {
            let cka = gk.center[a] / p_max;
            let cla = gl.center[a] / p_max;
            let ska = gk.widths[a] / p_max;
            let sla = gl.widths[a] / p_max;
            let ak = 1.0 / (4.0 * ska * ska);
            let al = 1.0 / (4.0 * sla * sla);
            alpha[a] = ak + al;
            m[a] = (ak * cka + al * cla) / alpha[a];
            s[a] = 1.0 / (2.0 * alpha[a]).sqrt();
            shift += ak * al / alpha[a] * (cka - cla) * (cka - cla);
            ck[a] = cka;
            cl[a] = cla;
            k2k[a] = -1.0 / (2.0 * ska * ska);
            k2l[a] = -1.0 / (2.0 * sla * sla);
        }
        let ww = wk * wl * (-shift).exp();
        if ww == 0.0 || !ww.is_finite() {
            return None;
        }
        Some(PairGeom {
            ww,
            m,
            alpha,
            s,
            ck,
            k2k,
            cl,
            k2l,
        })
    }

}

/// Quadrature weight times pair Gaussian times powers of G; `at(pow)` gives
/// the combination carrying G^(measure_power + pow).
#[derive(Clone, Copy)]
struct Wg {
    g0: f64,
    g1: f64,
    g2: f64,
}

#[derive(Clone, Copy)]
pub(crate) struct MeasureKind {
    /// true: weight 1/G; false: flat
    pub weighted: bool,
}

/// Net tilt rate of exp-family weights: G ~ exp(tilt * r) at large r.
fn tilt_rate(kind: AnsatzKind) -> f64 {
    match kind {
        AnsatzKind::TanhCap => 2.0,
        _ => 0.0,
    }
}

/// Grid step for a pair width under this model's resolution requirement.
fn pair_step(model: &AnsatzModel, s: f64) -> f64 {
    s.min(model.resolution_scale()) / STEP_DIV
}

/// Largest power of G appearing in the report integrands (the position
/// variance term), measure weight included.
fn max_g_power(measure: MeasureKind) -> f64 {
    if measure.weighted {
        1.0
    } else {
        2.0
    }
}

/// Accumulate every integrand at one point. Pairs are visited unordered
/// (k <= l, doubled weight off-diagonal); integrands bilinear in the two
/// component log-derivatives use lam_k lam_l, linear ones their mean.
#[inline]
fn accumulate(
    acc: &mut ReportIntegrals,
    model: &AnsatzModel,
    pair: &PairGeom,
    dim: usize,
    scope: SweepScope,
    x: [f64; 3],
    wg: Wg,
) {
    let u = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let (h, hpu) = model.h_with_slope_dimless(u);

    acc.norm += wg.g0;
    acc.psq += wg.g0 * u * u;
    if scope == SweepScope::MomentsOnly {
        for a in 0..dim {
            let xa = x[a];
            acc.cp1[a] += wg.g0 * xa;
            acc.p1[a] += wg.g0 * xa * h;
            acc.pp[a] += wg.g0 * (xa * h) * (xa * h);
            for b in 0..dim {
                acc.cpp[a][b] += wg.g0 * xa * x[b];
            }
        }
        return;
    }

    let mut lam_k = [0.0; 3];
    let mut lam_l = [0.0; 3];
    let mut lam_avg = [0.0; 3];
    for a in 0..dim {
        lam_k[a] = (x[a] - pair.ck[a]) * pair.k2k[a];
        lam_l[a] = (x[a] - pair.cl[a]) * pair.k2l[a];
        lam_avg[a] = 0.5 * (lam_k[a] + lam_l[a]);
    }

    for a in 0..dim {
        let xa = x[a];
        acc.cp1[a] += wg.g0 * xa;
        acc.p1[a] += wg.g0 * xa * h;
        acc.pp[a] += wg.g0 * (xa * h) * (xa * h);
        acc.x_asym[a] += wg.g1 * lam_avg[a];
        acc.xx[a] += wg.g2 * lam_k[a] * lam_l[a];
        for b in 0..dim {
            acc.cpp[a][b] += wg.g0 * xa * x[b];
            // double application of X_a then P_b minus the reverse; the
            // derivative-of-psi terms from the two routes cancel pointwise
            let delta = if a == b { h } else { 0.0 };
            let route_diff =
                wg.g1 * ((x[b] * h) * lam_avg[a]) - wg.g1 * ((x[b] * lam_avg[a]) * h);
            acc.comm[a][b] += wg.g1 * (delta + xa * x[b] * hpu) + route_diff;
        }
    }
}

/// G^(mpow..mpow+2) evaluator that stays finite for the hyperbolic family
/// by combining the Gaussian and tilt exponents before exponentiating.
#[inline]
fn wg_safe(model: &AnsatzModel, measure: MeasureKind, w: f64, exponent: f64, u: f64) -> Wg {
    let mpow: i32 = if measure.weighted { -1 } else { 0 };
    if model.kind == AnsatzKind::TanhCap {
        let t = (-2.0 * u).exp();
        let q = 0.25 * (1.0 + t) * (1.0 + t); // G = exp(2u) q
        let lev = |pow: i32| -> f64 {
            let e = exponent + 2.0 * u * pow as f64;
            w * e.exp() * q.powi(pow)
        };
        Wg {
            g0: lev(mpow),
            g1: lev(mpow + 1),
            g2: lev(mpow + 2),
        }
    } else {
        let g = model.g_dimless(u);
        let e = w * exponent.exp();
        let g0 = if measure.weighted { e / g } else { e };
        Wg {
            g0,
            g1: g0 * g,
            g2: g0 * g * g,
        }
    }
}

/// Newton-iterated Gauss-Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n and P'_n
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|t| half * t).collect(),
    )
}

/// Uniform midpoint azimuthal rule: (cos, sin, weight).
fn phi_rule() -> Vec<(f64, f64, f64)> {
    let w = 2.0 * std::f64::consts::PI / N_PHI as f64;
    (0..N_PHI)
        .map(|j| {
            let phi = (j as f64 + 0.5) * w;
            (phi.cos(), phi.sin(), w)
        })
        .collect()
}

// ---------------------------------------------------------------- drivers

fn spherical_driver(
    model: &AnsatzModel,
    measure: MeasureKind,
    mix: &GaussianMixture,
    scope: SweepScope,
) -> ReportIntegrals {
    let p_max = model.scales.p_max();
    let tilt = if scope == SweepScope::MomentsOnly {
        0.0
    } else {
        tilt_rate(model.kind) * max_g_power(measure)
    };
    let (tn, tw) = gauss_legendre(N_THETA);
    let phis = phi_rule();
    // precompute direction table with solid-angle weights
    let mut dirs = Vec::with_capacity(N_THETA * N_PHI);
    for (ct, wt) in tn.iter().zip(&tw) {
        let st = (1.0 - ct * ct).sqrt();
        for &(cp, sp, wp) in &phis {
            dirs.push(([st * cp, st * sp, *ct], wt * wp));
        }
    }

    let n_comp = mix.components().len();
    let mut total = ReportIntegrals::default();
    for k in 0..n_comp {
        for l in k..n_comp {
            let mult = if k == l { 1.0 } else { 2.0 };
            let Some(pair) = PairGeom::build(mix, p_max, k, l, mult) else {
                continue;
            };
            let s = pair.s[0];
            let radius = tilt * s * s + 10.0 * s;
            let h = pair_step(model, s);
            let n_u = (radius / h).ceil() as usize + 1;
            let hu = radius / (n_u - 1) as f64;
            let mut acc = ReportIntegrals::default();
            for iu in 0..n_u {
                let u = iu as f64 * hu;
                let mut wq = hu * u * u;
                if iu == 0 || iu == n_u - 1 {
                    wq *= 0.5;
                }
                if wq == 0.0 {
                    continue;
                }
                let e = -pair.alpha[0] * u * u;
                let mut row = ReportIntegrals::default();
                for (d, wang) in &dirs {
                    let x = [u * d[0], u * d[1], u * d[2]];
                    let wg = wg_safe(model, measure, pair.ww * wq * wang, e, u);
                    accumulate(&mut row, model, &pair, 3, scope, x, wg);
                }
                acc.add(&row);
            }
            total.add(&acc);
        }
    }
    total
}

fn cylindrical_driver(
    model: &AnsatzModel,
    measure: MeasureKind,
    mix: &GaussianMixture,
    scope: SweepScope,
) -> ReportIntegrals {
    let p_max = model.scales.p_max();
    let tilt = if scope == SweepScope::MomentsOnly {
        0.0
    } else {
        tilt_rate(model.kind) * max_g_power(measure)
    };
    let phis = phi_rule();
    let n_comp = mix.components().len();
    let mut total = ReportIntegrals::default();
    for k in 0..n_comp {
        for l in k..n_comp {
            let mult = if k == l { 1.0 } else { 2.0 };
            let Some(pair) = PairGeom::build(mix, p_max, k, l, mult) else {
                continue;
            };
            let (s1, sr) = (pair.s[0], pair.s[1]);
            let step = |s: f64| {
                if s <= CYL_COARSE_WIDTH {
                    pair_step(model, s)
                } else {
                    s / STEP_DIV
                }
            };
            let ext1 = tilt * s1 * s1;
            let (lo, hi) = (pair.m[0] - PAD * s1 - ext1, pair.m[0] + PAD * s1 + ext1);
            let n1 = ((hi - lo) / step(s1)).ceil() as usize + 1;
            let h1 = (hi - lo) / (n1 - 1) as f64;
            let rmax = PAD * sr + tilt * sr * sr;
            // Gauss-Legendre converges exponentially but needs a denser rule
            // than the trapezoid for the same accuracy
            let nr = ((1.5 * rmax / step(sr)).ceil() as usize).max(32);
            let (rn, rw) = gauss_legendre_on(0.0, rmax, nr);
            let mut acc = ReportIntegrals::default();
            for i1 in 0..n1 {
                let x1 = lo + i1 as f64 * h1;
                let mut w1 = h1;
                if i1 == 0 || i1 == n1 - 1 {
                    w1 *= 0.5;
                }
                let d1 = x1 - pair.m[0];
                let e1 = -pair.alpha[0] * d1 * d1;
                let mut row = ReportIntegrals::default();
                for (rho, wr) in rn.iter().zip(&rw) {
                    let u = (x1 * x1 + rho * rho).sqrt();
                    let e = e1 - pair.alpha[1] * rho * rho;
                    let wq = w1 * wr * rho;
                    for &(cp, sp, wp) in &phis {
                        let x = [x1, rho * cp, rho * sp];
                        let wg = wg_safe(model, measure, pair.ww * wq * wp, e, u);
                        accumulate(&mut row, model, &pair, 3, scope, x, wg);
                    }
                }
                acc.add(&row);
            }
            total.add(&acc);
        }
    }
    total
}

fn box_driver(
    model: &AnsatzModel,
    measure: MeasureKind,
    mix: &GaussianMixture,
    scope: SweepScope,
) -> ReportIntegrals {
    let p_max = model.scales.p_max();
    let dim = mix.dim;
    let tilt = if scope == SweepScope::MomentsOnly {
        0.0
    } else {
        tilt_rate(model.kind) * max_g_power(measure)
    };
    let n_comp = mix.components().len();
    let mut total = ReportIntegrals::default();
    for k in 0..n_comp {
        for l in k..n_comp {
            let mult = if k == l { 1.0 } else { 2.0 };
            let Some(pair) = PairGeom::build(mix, p_max, k, l, mult) else {
                continue;
            };
            // per-axis grids and Gaussian factor tables
            let mut axes: Vec<Vec<f64>> = Vec::with_capacity(dim);
            let mut tabs: Vec<Vec<f64>> = Vec::with_capacity(dim);
            let mut hw = [0.0; 3];
            for a in 0..dim {
                let s = pair.s[a];
                let ext = tilt * s * s;
                let (lo, hi) = (pair.m[a] - PAD * s - ext, pair.m[a] + PAD * s + ext);
                let h = pair_step(model, s);
                let n = ((hi - lo) / h).ceil() as usize + 1;
                let ha = (hi - lo) / (n - 1) as f64;
                hw[a] = ha;
                let mut ax = Vec::with_capacity(n);
                let mut tab = Vec::with_capacity(n);
                for i in 0..n {
                    let x = lo + i as f64 * ha;
                    let d = x - pair.m[a];
                    let mut w = (-pair.alpha[a] * d * d).exp() * ha;
                    if i == 0 || i == n - 1 {
                        w *= 0.5;
                    }
                    ax.push(x);
                    tab.push(w);
                }
                axes.push(ax);
                tabs.push(tab);
            }
            for _ in dim..3 {
                axes.push(vec![0.0]);
                tabs.push(vec![1.0]);
            }

            let weighted = measure.weighted;
            let mut acc = ReportIntegrals::default();
            for (&x0, &t0) in axes[0].iter().zip(&tabs[0]) {
                let mut plane = ReportIntegrals::default();
                for (&x1, &t1) in axes[1].iter().zip(&tabs[1]) {
                    let t01 = t0 * t1;
                    if t01 < GAUSS_CUTOFF {
                        continue;
                    }
                    let q01 = x0 * x0 + x1 * x1;
                    let mut row = ReportIntegrals::default();
                    for (&x2, &t2) in axes[2].iter().zip(&tabs[2]) {
                        let w = pair.ww * t01 * t2;
                        if w.abs() < GAUSS_CUTOFF {
                            continue;
                        }
                        let u = (q01 + x2 * x2).sqrt();
                        let g = model.g_dimless(u);
                        let g0 = if weighted { w / g } else { w };
                        let wg = Wg {
                            g0,
                            g1: g0 * g,
                            g2: g0 * g * g,
                        };
                        accumulate(&mut row, model, &pair, dim, scope, [x0, x1, x2], wg);
                    }
                    plane.add(&row);
                }
                acc.add(&plane);
            }
            total.add(&acc);
        }
    }
    total
}

/// Evaluate the full report-integral set for a closed-form state, choosing
/// the geometry from the state's symmetry.
pub(crate) fn report_integrals(
    model: &AnsatzModel,
    measure: MeasureKind,
    mix: &GaussianMixture,
) -> Result<ReportIntegrals, StateError> {
    report_integrals_scoped(model, measure, mix, SweepScope::Full)
}

/// Like `report_integrals`, but allowing the cheaper momentum-only sweep
/// (position-variance fields are left at zero).
pub(crate) fn report_integrals_scoped(
    model: &AnsatzModel,
    measure: MeasureKind,
    mix: &GaussianMixture,
    scope: SweepScope,
) -> Result<ReportIntegrals, StateError> {
    let out = if mix.dim == 1 {
        box_driver(model, measure, mix, scope)
    } else if mix.is_isotropic_centered() {
        spherical_driver(model, measure, mix, scope)
    } else if mix.is_axisymmetric() {
        cylindrical_driver(model, measure, mix, scope)
    } else {
        box_driver(model, measure, mix, scope)
    };
    if out.has_nan() {
        return Err(StateError::NonFinite {
            what: "report integrals",
        });
    }
    Ok(out)
}

/// Force a particular geometry; used by cross-validation tests.
#[cfg(test)]
pub(crate) fn report_integrals_forced(
    model: &AnsatzModel,
    measure: MeasureKind,
    mix: &GaussianMixture,
    which: &str,
) -> ReportIntegrals {
    match which {
        "spherical" => spherical_driver(model, measure, mix, SweepScope::Full),
        "cylindrical" => cylindrical_driver(model, measure, mix, SweepScope::Full),
        "box" => box_driver(model, measure, mix, SweepScope::Full),
        _ => panic!("unknown driver {which}"),
    }
}

/// Plain overlap integral of two mixtures under the measure weight, by
/// pairwise boxes (components of `a` against components of `b`).
pub(crate) fn overlap(
    weight_model: Option<&AnsatzModel>,
    p_max: f64,
    a: &GaussianMixture,
    b: &GaussianMixture,
) -> Result<f64, StateError> {
    if a.dim != b.dim {
        return Err(StateError::IncompatibleRepresentations(
            "states have different dimensionality",
        ));
    }
    let dim = a.dim;
    let mut total = 0.0;
    for k in 0..a.components().len() {
        for l in 0..b.components().len() {
            // reuse PairGeom by building a temporary two-component view
            let pair = match cross_pair(a, b, p_max, k, l) {
                Some(p) => p,
                None => continue,
            };
            let mut acc = 0.0;
            // per-axis tables
            let mut axes: Vec<Vec<(f64, f64)>> = Vec::with_capacity(dim);
            for ax in 0..dim {
                let s = pair.s[ax];
                let (lo, hi) = (pair.m[ax] - PAD * s, pair.m[ax] + PAD * s);
                let h = match weight_model {
                    Some(m) => pair_step(m, s),
                    None => s.min(1.0) / STEP_DIV,
                };
                let n = ((hi - lo) / h).ceil() as usize + 1;
                let ha = (hi - lo) / (n - 1) as f64;
                axes.push(
                    (0..n)
                        .map(|i| {
                            let x = lo + i as f64 * ha;
                            let d = x - pair.m[ax];
                            let mut w = (-pair.alpha[ax] * d * d).exp() * ha;
                            if i == 0 || i == n - 1 {
                                w *= 0.5;
                            }
                            (x, w)
                        })
                        .collect(),
                );
            }
            for ax in dim..3 {
                let _ = ax;
                axes.push(vec![(0.0, 1.0)]);
            }
            for &(x0, t0) in &axes[0] {
                for &(x1, t1) in &axes[1] {
                    for &(x2, t2) in &axes[2] {
                        let w = t0 * t1 * t2;
                        if w < GAUSS_CUTOFF {
                            continue;
                        }
                        let wm = match weight_model {
                            Some(m) => {
                                let u = (x0 * x0 + x1 * x1 + x2 * x2).sqrt();
                                1.0 / m.g_dimless(u)
                            }
                            None => 1.0,
                        };
                        acc += w * wm;
                    }
                }
            }
            total += pair.ww * acc;
        }
    }
    if total.is_nan() {
        return Err(StateError::NonFinite { what: "overlap" });
    }
    Ok(total)
}

/// PairGeom across two different mixtures.
fn cross_pair(a: &GaussianMixture, b: &GaussianMixture, p_max: f64, k: usize, l: usize) -> Option<PairGeom> {
    let (_, gk) = &a.components()[k];
    let (_, gl) = &b.components()[l];
    let wk = a.effective_weight(k);
    let wl = b.effective_weight(l);
    let mut m = [0.0; 3];
    let mut alpha = [1.0; 3];
    let mut s = [1.0; 3];
    let mut shift = 0.0;
    let mut ck = [0.0; 3];
    let mut cl = [0.0; 3];
    let mut k2k = [0.0; 3];
    let mut k2l = [0.0; 3];
    for ax in 0..a.dim {
        let cka = gk.center[ax] / p_max;
        let cla = gl.center[ax] / p_max;
        let ska = gk.widths[ax] / p_max;
        let sla = gl.widths[ax] / p_max;
        let aak = 1.0 / (4.0 * ska * ska);
        let aal = 1.0 / (4.0 * sla * sla);
        alpha[ax] = aak + aal;
        m[ax] = (aak * cka + aal * cla) / alpha[ax];
        s[ax] = 1.0 / (2.0 * alpha[ax]).sqrt();
        shift += aak * aal / alpha[ax] * (cka - cla) * (cka - cla);
        ck[ax] = cka;
        cl[ax] = cla;
        k2k[ax] = -1.0 / (2.0 * ska * ska);
        k2l[ax] = -1.0 / (2.0 * sla * sla);
    }
    let ww = wk * wl * (-shift).exp();
    if ww == 0.0 || !ww.is_finite() {
        return None;
    }
    Some(PairGeom {
        ww,
        m,
        alpha,
        s,
        ck,
        k2k,
        cl,
        k2l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AnsatzKind;
    use crate::states::gaussian::GaussianState;

    const W: MeasureKind = MeasureKind { weighted: true };
    const F: MeasureKind = MeasureKind { weighted: false };

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        assert_eq!(x.len(), 8);
        // integral of x^k over [-1,1]
        for k in 0..=15usize {
            let num: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((num - exact).abs() < 1e-13, "k = {k}: {num} vs {exact}");
        }
        // nodes symmetric and increasing
        assert!(x.windows(2).all(|p| p[1] > p[0]));
        assert!((x[0] + x[7]).abs() < 1e-15);
    }

    #[test]
    fn flat_norm_of_flat_normalized_gaussian_is_one() {
        // the amplitude carries (2 pi sigma^2)^(-3/4), so the flat norm
        // integral must be exactly 1 (up to quadrature error)
        let model = AnsatzModel::natural(AnsatzKind::Identity);
        for sigma in [0.1, 0.5, 2.0] {
            let mix = GaussianMixture::single(GaussianState::isotropic(sigma).unwrap());
            let r = report_integrals(&model, F, &mix).unwrap();
            assert!(rel(r.norm, 1.0) < 1e-12, "sigma = {sigma}: {}", r.norm);
        }
    }

    #[test]
    fn gaussian_moments_match_closed_form() {
        let model = AnsatzModel::natural(AnsatzKind::Identity);
        let sigma = 0.7;
        let c = 1.3;
        let mix = GaussianMixture::single(GaussianState::boosted(c, sigma).unwrap());
        let r = report_integrals(&model, F, &mix).unwrap();
        let n = r.norm;
        assert!(rel(r.cp1[0] / n, c) < 1e-11);
        assert!(r.cp1[1].abs() < 1e-14);
        assert!(rel(r.cpp[0][0] / n, sigma * sigma + c * c) < 1e-11);
        assert!(rel(r.cpp[1][1] / n, sigma * sigma) < 1e-11);
        assert!(r.cpp[0][1].abs() < 1e-13);
        assert!(rel(r.psq / n, 3.0 * sigma * sigma + c * c) < 1e-11);
    }

    #[test]
    fn drivers_agree_on_isotropic_states() {
        // radial, cylindrical and box must produce the same numbers for a
        // state every geometry can represent. The arctan family is limited
        // to ~1e-9 by its complex singularities at |p| = 2i/pi; the
        // hyperbolic family reaches ~1e-12.
        for kind in [AnsatzKind::TanhCap, AnsatzKind::ArctanCap] {
            let tol = if kind == AnsatzKind::TanhCap { 1e-9 } else { 1e-8 };
            let model = AnsatzModel::natural(kind);
            let mix = GaussianMixture::single(GaussianState::isotropic(0.5).unwrap());
            let a = report_integrals_forced(&model, W, &mix, "spherical");
            let b = report_integrals_forced(&model, W, &mix, "cylindrical");
            let c = report_integrals_forced(&model, W, &mix, "box");
            for (lbl, r) in [("cyl", &b), ("box", &c)] {
                assert!(
                    rel(r.norm, a.norm) < tol,
                    "{kind} {lbl} norm {} vs {}",
                    r.norm,
                    a.norm
                );
                for ax in 0..3 {
                    assert!(
                        rel(r.xx[ax], a.xx[ax]) < tol,
                        "{kind} {lbl} xx[{ax}] {} vs {}",
                        r.xx[ax],
                        a.xx[ax]
                    );
                    assert!(
                        rel(r.pp[ax], a.pp[ax]) < tol,
                        "{kind} {lbl} pp[{ax}] {} vs {}",
                        r.pp[ax],
                        a.pp[ax]
                    );
                    assert!(
                        rel(r.comm[ax][ax], a.comm[ax][ax]) < tol,
                        "{kind} {lbl} comm[{ax}] {} vs {}",
                        r.comm[ax][ax],
                        a.comm[ax][ax]
                    );
                }
            }
        }
    }

    #[test]
    fn drivers_agree_on_boosted_states() {
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let mix = GaussianMixture::single(GaussianState::boosted(1.0, 0.4).unwrap());
        let a = report_integrals_forced(&model, W, &mix, "cylindrical");
        let b = report_integrals_forced(&model, W, &mix, "box");
        assert!(rel(b.norm, a.norm) < 1e-9);
        for ax in 0..3 {
            assert!(rel(b.xx[ax], a.xx[ax]) < 1e-9, "xx[{ax}]");
            assert!(rel(b.pp[ax], a.pp[ax]) < 1e-9, "pp[{ax}]");
        }
        assert!(rel(b.p1[0], a.p1[0]) < 1e-9);
        assert!(rel(b.psq, a.psq) < 1e-9);
    }

    #[test]
    fn weighted_tanh_position_variance_matches_independent_oracle() {
        // frozen from an independent adaptive-quadrature evaluation of
        // hbar^2 <G (d psi)^2> / <psi^2 / G> at sigma = 0.5
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let mix = GaussianMixture::single(GaussianState::isotropic(0.5).unwrap());
        let r = report_integrals(&model, W, &mix).unwrap();
        let dx = (r.xx[0] / r.norm).sqrt();
        assert!(rel(dx, 2.372737809438) < 1e-10, "dx = {dx}");

        let model = AnsatzModel::natural(AnsatzKind::ArctanCap);
        let r = report_integrals(&model, W, &mix).unwrap();
        let dx = (r.xx[0] / r.norm).sqrt();
        // singularity-limited accuracy for the arctan family
        assert!(rel(dx, 3.045458910246) < 5e-9, "dx = {dx}");
    }

    #[test]
    fn comm_matches_kernel_expectation() {
        // double application against the analytic kernel route
        use crate::model::{Axis, KernelForm};
        let model = AnsatzModel::natural(AnsatzKind::TanhCap);
        let mix = GaussianMixture::single(GaussianState::boosted(0.8, 0.35).unwrap());
        let r = report_integrals(&model, W, &mix).unwrap();
        let mut num = [[0.0f64; 3]; 3];
        let mut den = 0.0f64;
        // brute-force box of the kernel integrand, centered on the state
        let n = 61;
        let half = 7.0 * 0.35;
        let h = 2.0 * half / (n - 1) as f64;
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let x = [
                        0.8 - half + h * i0 as f64,
                        -half + h * i1 as f64,
                        -half + h * i2 as f64,
                    ];
                    let v = mix.eval(x);
                    let u = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                    let w = v * v / model.g_dimless(u) * h * h * h;
                    den += w;
                    for (ia, i) in Axis::ALL.iter().enumerate() {
                        for (ja, j) in Axis::ALL.iter().enumerate() {
                            let k = model.commutator_kernel(KernelForm::Exact, x, *i, *j).unwrap();
                            num[ia][ja] += w * k;
                        }
                    }
                }
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                let brute = num[a][b] / den;
                let fine = r.comm[a][b] / r.norm;
                assert!(
                    (brute - fine).abs() < 5e-4,
                    "comm[{a}][{b}]: brute {brute} vs driver {fine}"
                );
            }
        }
    }

    #[test]
    fn overlap_of_far_separated_gaussians_is_negligible() {
        let sigma = 0.3;
        let a = GaussianMixture::single(GaussianState::boosted(-3.1, sigma).unwrap());
        let b = GaussianMixture::single(GaussianState::boosted(3.2, sigma).unwrap());
        // |delta c| = 6.3 = 21 sigma; Gaussian overlap formula gives
        // exp(-(21)^2/8) ~ 1.5e-24
        let got = overlap(None, 1.0, &a, &b).unwrap();
        let oracle = (-(6.3f64 / sigma).powi(2) / 8.0).exp();
        assert!(got.abs() < 1e-18, "overlap = {got}");
        assert!((got - oracle).abs() < 1e-20, "{got} vs {oracle}");
    }

    #[test]
    fn overlap_is_symmetric_and_positive_on_norms() {
        let a = GaussianMixture::new(vec![
            (0.8, GaussianState::boosted(0.4, 0.3).unwrap()),
            (-0.5, GaussianState::isotropic(0.8).unwrap()),
        ])
        .unwrap();
        let model = AnsatzModel::natural(AnsatzKind::ArctanCap);
        let ab = overlap(Some(&model), 1.0, &a, &a).unwrap();
        assert!(ab > 0.0);
        let r = report_integrals(&model, W, &a).unwrap();
        assert!(rel(ab, r.norm) < 1e-9, "overlap {ab} vs norm {}", r.norm);
    }
}
