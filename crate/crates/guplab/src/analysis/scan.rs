//! One-parameter variational scans: a log-spaced coarse grid, golden-section
//! refinement of the best bracket, and a parabolic polish that pushes the
//! argmin below the golden-section noise floor.

use serde::Serialize;

/// One evaluated sample of the scan objective.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanSample {
    pub parameter: f64,
    pub objective: f64,
}

/// Result of a one-parameter minimization scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub parameter: String,
    pub samples: Vec<ScanSample>,
    pub argmin: f64,
    pub min: f64,
    /// final bracket width relative to the argmin
    pub refined_tolerance: f64,
    /// false when the best sample sits on a range endpoint (no interior
    /// minimum; argmin/min then report the endpoint sample)
    pub interior: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn finite_or_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimize `f` over a log grid on [lo, hi] with `n` samples, then refine.
///
/// The grid and all refinement iterates are built in units of `scale` so
/// that rescaled problems (same lo/scale, hi/scale) walk bit-identical
/// trajectories; `scale` is exact under power-of-two unit changes.
pub(crate) fn log_scan_minimize(
    parameter: &str,
    lo: f64,
    hi: f64,
    scale: f64,
    n: usize,
    rel_tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> ScanResult {
    assert!(lo > 0.0 && hi > lo && n >= 3 && scale > 0.0);
    let (lo, hi) = (lo / scale, hi / scale);
    let l0 = lo.ln();
    let step = (hi.ln() - l0) / (n - 1) as f64;
    let mut samples = Vec::with_capacity(n);
    let mut best = (0usize, f64::INFINITY);
    for k in 0..n {
        let x = (l0 + step * k as f64).exp();
        let v = f(scale * x);
        samples.push(ScanSample {
            parameter: scale * x,
            objective: v,
        });
        if finite_or_inf(v) < best.1 {
            best = (k, finite_or_inf(v));
        }
    }
    let k = best.0;
    if k == 0 || k == n - 1 || !best.1.is_finite() {
        return ScanResult {
            parameter: parameter.to_string(),
            argmin: samples[k].parameter,
            min: samples[k].objective,
            refined_tolerance: step.exp_m1(),
            interior: false,
            samples,
        };
    }

    // golden-section refinement inside the bracketing samples (all iterates
    // in scale units)
    let grid_at = |k: usize| (l0 + step * k as f64).exp();
    let mut a = grid_at(k - 1);
    let mut b = grid_at(k + 1);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = finite_or_inf(f(scale * x1));
    let mut f2 = finite_or_inf(f(scale * x2));
    while (b - a) > rel_tol * a.abs().max(b.abs()) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = finite_or_inf(f(scale * x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = finite_or_inf(f(scale * x2));
        }
    }
    let mut x = 0.5 * (a + b);
    let mut fx = finite_or_inf(f(scale * x));

    // parabolic polish: the golden bracket alone is noise-limited near the
    // minimum; a vertex fit at a spacing well above the noise floor recovers
    // the argmin to ~1e-10 relative
    for _ in 0..2 {
        let d = 1e-5 * x.abs();
        if d == 0.0 {
            break;
        }
        let (fm, f0, fp) = (
            finite_or_inf(f(scale * (x - d))),
            fx,
            finite_or_inf(f(scale * (x + d))),
        );
        let den = fp - 2.0 * f0 + fm;
        if den > 0.0 {
            let mut shift = -0.5 * d * (fp - fm) / den;
            if shift.abs() > 10.0 * d {
                shift = shift.signum() * 10.0 * d;
            }
            let xn = x + shift;
            let fxn = finite_or_inf(f(scale * xn));
            if fxn <= f0 {
                x = xn;
                fx = fxn;
            }
        }
    }

    ScanResult {
        parameter: parameter.to_string(),
        argmin: scale * x,
        min: fx,
        refined_tolerance: (b - a) / x.abs().max(f64::MIN_POSITIVE),
        interior: true,
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum_recovered() {
        let r = log_scan_minimize("s", 0.01, 100.0, 1.0, 40, 1e-10, |x| (x - 3.0) * (x - 3.0) + 2.0);
        assert!(r.interior);
        assert!((r.argmin - 3.0).abs() < 1e-8);
        assert!((r.min - 2.0).abs() < 1e-14);
        assert_eq!(r.samples.len(), 40);
    }

    #[test]
    fn monotone_objective_flags_endpoint() {
        let r = log_scan_minimize("s", 0.1, 10.0, 1.0, 20, 1e-10, |x| 1.0 / x);
        assert!(!r.interior);
        assert!((r.argmin - 10.0).abs() < 1e-12);
        let r = log_scan_minimize("s", 0.1, 10.0, 1.0, 20, 1e-10, |x| x);
        assert!(!r.interior);
        assert!((r.argmin - 0.1).abs() < 1e-12);
    }

    #[test]
    fn non_finite_samples_are_skipped() {
        // objective overflows at large x but has an interior minimum
        let r = log_scan_minimize("s", 0.01, 100.0, 1.0, 40, 1e-10, |x| {
            if x > 50.0 {
                f64::INFINITY
            } else {
                1.0 / x + x
            }
        });
        assert!(r.interior);
        assert!((r.argmin - 1.0).abs() < 1e-8);
    }
}
