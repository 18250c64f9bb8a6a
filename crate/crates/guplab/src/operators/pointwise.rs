//! Closed-form operator application: a Gaussian mixture with a short chain
//! of operators applied to it, evaluated pointwise through the analytic
//! derivative calculus of the mixture.

use super::Operator;
use crate::error::{OperatorError, StateError};
use crate::model::AnsatzModel;
use crate::states::{GaussianMixture, Measure};
use num_complex::Complex64;

/// Longest supported operator chain (double application).
pub const MAX_CHAIN: usize = 2;

/// A sum of operator chains applied to one closed-form state.
#[derive(Debug, Clone)]
pub struct AppliedClosedForm {
    pub base: GaussianMixture,
    pub model: AnsatzModel,
    terms: Vec<(f64, Vec<Operator>)>,
}

impl AppliedClosedForm {
    pub fn plain(base: GaussianMixture, model: AnsatzModel) -> Self {
        Self {
            base,
            model,
            terms: vec![(1.0, Vec::new())],
        }
    }

    pub fn terms(&self) -> &[(f64, Vec<Operator>)] {
        &self.terms
    }

    /// Apply one more operator (outermost).
    pub fn apply(&self, op: Operator) -> Result<Self, OperatorError> {
        if self.terms.iter().any(|(_, ops)| ops.len() >= MAX_CHAIN) {
            return Err(OperatorError::ChainTooDeep { max: MAX_CHAIN });
        }
        op.validate_axis(self.base.dim)?;
        let terms = self
            .terms
            .iter()
            .map(|(c, ops)| {
                let mut chain = vec![op];
                chain.extend_from_slice(ops);
                (*c, chain)
            })
            .collect();
        Ok(Self {
            base: self.base.clone(),
            model: self.model,
            terms,
        })
    }

    /// The commutator [a, b] applied to the state.
    pub fn commutator(
        base: GaussianMixture,
        model: AnsatzModel,
        a: Operator,
        b: Operator,
    ) -> Result<Self, OperatorError> {
        a.validate_axis(base.dim)?;
        b.validate_axis(base.dim)?;
        Ok(Self {
            base,
            model,
            terms: vec![(1.0, vec![a, b]), (-1.0, vec![b, a])],
        })
    }

    /// Total number of position-type operators across chains; drives the
    /// quadrature tilt for the hyperbolic weight.
    pub fn g_power(&self) -> i32 {
        self.terms
            .iter()
            .map(|(_, ops)| {
                ops.iter()
                    .filter(|o| matches!(o, Operator::ModifiedPosition(_)))
                    .count() as i32
            })
            .max()
            .unwrap_or(0)
    }

    /// Pointwise value.
    pub fn eval(&self, p: [f64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, ops)| eval_chain(&self.base, &self.model, ops, p) * *c)
            .sum()
    }
}

/// Value of `ops[0](ops[1](... psi))` at `p`.
fn eval_chain(mix: &GaussianMixture, model: &AnsatzModel, ops: &[Operator], p: [f64; 3]) -> Complex64 {
    match ops.split_first() {
        None => Complex64::new(mix.eval(p), 0.0),
        Some((op, rest)) => {
            let hbar = model.scales.hbar();
            match op {
                Operator::CanonicalMomentum(j) => {
                    eval_chain(mix, model, rest, p) * p[j.idx()]
                }
                Operator::ModifiedMomentum(j) => {
                    let r = norm(p) / model.scales.p_max();
                    eval_chain(mix, model, rest, p) * (p[j.idx()] * model.h_dimless(r))
                }
                Operator::CanonicalPosition(i) => {
                    let g = eval_chain_grad(mix, model, rest, p);
                    Complex64::new(0.0, hbar) * g[i.idx()]
                }
                Operator::ModifiedPosition(i) => {
                    let r = norm(p) / model.scales.p_max();
                    let g = eval_chain_grad(mix, model, rest, p);
                    Complex64::new(0.0, hbar * model.g_dimless(r)) * g[i.idx()]
                }
                Operator::AngularMomentum(k) => {
                    let g = eval_chain_grad(mix, model, rest, p);
                    let (a, b) = cyclic(k.idx());
                    Complex64::new(0.0, -hbar) * (g[b] * p[a] - g[a] * p[b])
                }
            }
        }
    }
}

/// Gradient of `ops(psi)` at `p`; supports chains of length <= 1 (all that
/// double application requires).
fn eval_chain_grad(
    mix: &GaussianMixture,
    model: &AnsatzModel,
    ops: &[Operator],
    p: [f64; 3],
) -> [Complex64; 3] {
    match ops.split_first() {
        None => {
            let mut g = [Complex64::new(0.0, 0.0); 3];
            for a in 0..mix.dim {
                g[a] = Complex64::new(mix.eval_deriv(p, a), 0.0);
            }
            g
        }
        Some((op, rest)) => {
            assert!(rest.is_empty(), "chain depth checked at construction");
            let hbar = model.scales.hbar();
            let p_max = model.scales.p_max();
            let u = norm(p);
            let r = u / p_max;
            let psi = Complex64::new(mix.eval(p), 0.0);
            let grad = eval_chain_grad(mix, model, &[], p);
            match op {
                Operator::CanonicalMomentum(j) => {
                    // grad_a (p_j psi) = delta_aj psi + p_j grad_a
                    let mut out = [Complex64::new(0.0, 0.0); 3];
                    for a in 0..3 {
                        out[a] = grad[a] * p[j.idx()];
                    }
                    out[j.idx()] += psi;
                    out
                }
                Operator::ModifiedMomentum(j) => {
                    // grad_a (p_j H psi) = (delta_aj H + p_j p_a H'/|p| + p_j H grad/psi...) psi
                    let h = model.h_dimless(r);
                    // dH/dp_a = h'(r)/r * p_a / p_max^2
                    let hpu = model.h_prime_over_r_dimless(r) / (p_max * p_max);
                    let pj = p[j.idx()];
                    let mut out = [Complex64::new(0.0, 0.0); 3];
                    for a in 0..3 {
                        out[a] = psi * (pj * p[a] * hpu) + grad[a] * (pj * h);
                    }
                    out[j.idx()] += psi * h;
                    out
                }
                Operator::CanonicalPosition(i) => {
                    // grad_a (i hbar d_i psi) = i hbar hess_ai
                    let mut out = [Complex64::new(0.0, 0.0); 3];
                    for a in 0..3 {
                        let hess = if a < mix.dim && i.idx() < mix.dim {
                            mix.eval_deriv2(p, a, i.idx())
                        } else {
                            0.0
                        };
                        out[a] = Complex64::new(0.0, hbar * hess);
                    }
                    out
                }
                Operator::ModifiedPosition(i) => {
                    // grad_a (i hbar G d_i psi)
                    //   = i hbar (G'(r) p_a/(|p| p_max) d_i psi + G hess_ai)
                    let g = model.g_dimless(r);
                    let gpu = model.g_prime_over_r_dimless(r) / (p_max * p_max);
                    let di = grad[i.idx()];
                    let mut out = [Complex64::new(0.0, 0.0); 3];
                    for a in 0..3 {
                        let hess = if a < mix.dim && i.idx() < mix.dim {
                            mix.eval_deriv2(p, a, i.idx())
                        } else {
                            0.0
                        };
                        out[a] = Complex64::new(0.0, hbar) * (di * (gpu * p[a]) + hess * g);
                    }
                    out
                }
                Operator::AngularMomentum(k) => {
                    let (ax, bx) = cyclic(k.idx());
                    let mut out = [Complex64::new(0.0, 0.0); 3];
                    for a in 0..3 {
                        let hess_b = Complex64::new(mix.eval_deriv2(p, a, bx), 0.0);
                        let hess_a = Complex64::new(mix.eval_deriv2(p, a, ax), 0.0);
                        let mut v = hess_b * p[ax] - hess_a * p[bx];
                        if a == ax {
                            v += grad[bx];
                        }
                        if a == bx {
                            v -= grad[ax];
                        }
                        out[a] = Complex64::new(0.0, -hbar) * v;
                    }
                    out
                }
            }
        }
    }
}

fn cyclic(k: usize) -> (usize, usize) {
    ((k + 1) % 3, (k + 2) % 3)
}

fn norm(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// Inner product `<a, b>` of two applied closed-form states by brute-force
/// box quadrature over the union support. Intended for verification-scale
/// workloads, not scans.
pub fn applied_inner(
    a: &AppliedClosedForm,
    b: &AppliedClosedForm,
    measure: &Measure,
) -> Result<Complex64, OperatorError> {
    let dim = a.base.dim;
    if b.base.dim != dim {
        return Err(OperatorError::State(StateError::IncompatibleRepresentations(
            "applied states have different dimensionality",
        )));
    }
    let model = a.model;
    let p_max = model.scales.p_max();
    let tilt = if model.kind == crate::model::AnsatzKind::TanhCap {
        2.0 / p_max
    } else {
        0.0
    };
    let gpow = (a.g_power() + b.g_power()
        + if matches!(measure, Measure::Flat) { 0 } else { -1 })
    .max(0) as f64;

    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    let mut h = [0.0; 3];
    for ax in 0..dim {
        let (la, ha) = a.base.coverage(ax, 8.0);
        let (lb, hb) = b.base.coverage(ax, 8.0);
        let smax = a
            .base
            .components()
            .iter()
            .chain(b.base.components())
            .map(|(_, g)| g.widths[ax])
            .fold(0.0, f64::max);
        let smin = a
            .base
            .components()
            .iter()
            .chain(b.base.components())
            .map(|(_, g)| g.widths[ax])
            .fold(f64::INFINITY, f64::min);
        let ext = gpow * tilt * smax * smax;
        lo[ax] = la.min(lb) - ext;
        hi[ax] = ha.max(hb) + ext;
        h[ax] = smin.min(p_max) / 3.0;
    }
    let n: Vec<usize> = (0..dim)
        .map(|ax| ((hi[ax] - lo[ax]) / h[ax]).ceil() as usize + 1)
        .collect();
    if n.iter().product::<usize>() > 40_000_000 {
        return Err(OperatorError::State(StateError::NonFinite {
            what: "applied inner product grid too large",
        }));
    }

    let mut acc = Complex64::new(0.0, 0.0);
    let shape = [
        n[0],
        if dim > 1 { n[1] } else { 1 },
        if dim > 1 { n[2] } else { 1 },
    ];
    let step = |ax: usize, i: usize| lo[ax] + (hi[ax] - lo[ax]) * i as f64 / (shape[ax] - 1).max(1) as f64;
    let wq = |ax: usize, i: usize| {
        if shape[ax] == 1 {
            1.0
        } else {
            let hh = (hi[ax] - lo[ax]) / (shape[ax] - 1) as f64;
            if i == 0 || i == shape[ax] - 1 {
                0.5 * hh
            } else {
                hh
            }
        }
    };
    for i0 in 0..shape[0] {
        for i1 in 0..shape[1] {
            for i2 in 0..shape[2] {
                let p = [
                    step(0, i0),
                    if dim > 1 { step(1, i1) } else { 0.0 },
                    if dim > 1 { step(2, i2) } else { 0.0 },
                ];
                let w = wq(0, i0) * wq(1, i1) * wq(2, i2) * measure.weight(p);
                acc += a.eval(p).conj() * b.eval(p) * w;
            }
        }
    }
    if !acc.re.is_finite() || !acc.im.is_finite() {
        return Err(OperatorError::State(StateError::NonFinite {
            what: "applied inner product",
        }));
    }
    Ok(acc)
}
