//! Central finite differences of order 2 and 4 on uniform tensor grids,
//! with matching-order one-sided closures at the boundary band.

use crate::error::StateError;
use crate::states::GridState;
use num_complex::Complex64;

/// d/dp_axis of the sampled field, at the grid's configured order.
pub fn derivative(grid: &GridState, axis: usize) -> Result<Vec<Complex64>, StateError> {
    if axis >= grid.dim() {
        return Err(StateError::AxisOutOfRange(axis + 1));
    }
    let shape = grid.shape();
    let strides = grid.strides();
    let n = shape[axis];
    let st = strides[axis];
    let h = grid.axes()[axis].step();
    let amps = grid.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];

    // iterate over all lines along `axis`
    let (oa, ob) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    for ia in 0..shape[oa] {
        for ib in 0..shape[ob] {
            let base = ia * strides[oa] + ib * strides[ob];
            let at = |k: usize| amps[base + k * st];
            match grid.derivative_order() {
                2 => {
                    out[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
                    for k in 1..n - 1 {
                        out[base + k * st] = (at(k + 1) - at(k - 1)) / (2.0 * h);
                    }
                    out[base + (n - 1) * st] =
                        (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
                }
                _ => {
                    let d = 12.0 * h;
                    out[base] =
                        (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4))
                            / d;
                    out[base + st] =
                        (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / d;
                    for k in 2..n - 2 {
                        out[base + k * st] =
                            (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / d;
                    }
                    out[base + (n - 2) * st] = (3.0 * at(n - 1) + 10.0 * at(n - 2)
                        - 18.0 * at(n - 3)
                        + 6.0 * at(n - 4)
                        - at(n - 5))
                        / d;
                    out[base + (n - 1) * st] = (25.0 * at(n - 1) - 48.0 * at(n - 2)
                        + 36.0 * at(n - 3)
                        - 16.0 * at(n - 4)
                        + 3.0 * at(n - 5))
                        / d;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{AxisSpec, GridSpec, GridState};

    fn grid_1d(order: usize, n: usize, f: impl Fn(f64) -> f64) -> GridState {
        let spec = GridSpec::new(vec![AxisSpec::new(-1.0, 1.0, n).unwrap()], order).unwrap();
        let amps = (0..n)
            .map(|i| Complex64::new(f(spec.axes[0].coord(i)), 0.0))
            .collect();
        GridState::new_unchecked(spec, amps).unwrap()
    }

    #[test]
    fn order4_exact_on_quartics() {
        // interior and one-sided closures are exact for degree <= 4
        let g = grid_1d(4, 33, |x| 1.0 + x + x.powi(2) - 2.0 * x.powi(3) + 0.5 * x.powi(4));
        let d = derivative(&g, 0).unwrap();
        for i in 0..33 {
            let x = g.axes()[0].coord(i);
            let exact = 1.0 + 2.0 * x - 6.0 * x * x + 2.0 * x.powi(3);
            assert!(
                (d[i].re - exact).abs() < 1e-11,
                "i = {i}: {} vs {exact}",
                d[i].re
            );
        }
    }

    #[test]
    fn order2_exact_on_quadratics() {
        let g = grid_1d(2, 33, |x| 2.0 - x + 3.0 * x * x);
        let d = derivative(&g, 0).unwrap();
        for i in 0..33 {
            let x = g.axes()[0].coord(i);
            assert!((d[i].re - (-1.0 + 6.0 * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn convergence_orders_on_smooth_function() {
        for (order, expected) in [(2usize, 4.0), (4usize, 16.0)] {
            let err = |n: usize| -> f64 {
                let g = grid_1d(order, n, |x| (2.0 * x).sin());
                let d = derivative(&g, 0).unwrap();
                // interior max error
                (4..n - 4)
                    .map(|i| {
                        let x = g.axes()[0].coord(i);
                        (d[i].re - 2.0 * (2.0 * x).cos()).abs()
                    })
                    .fold(0.0, f64::max)
            };
            let ratio = err(65) / err(129);
            assert!(
                (ratio / expected - 1.0).abs() < 0.3,
                "order {order}: ratio = {ratio}"
            );
        }
    }

    #[test]
    fn derivative_along_each_3d_axis() {
        let n = 17;
        let spec = GridSpec::cube([0.0; 3], 1.0, n, 4).unwrap();
        let mut amps = Vec::new();
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let (x, y, z) = (
                        spec.axes[0].coord(i0),
                        spec.axes[1].coord(i1),
                        spec.axes[2].coord(i2),
                    );
                    amps.push(Complex64::new(x * x + 2.0 * y * y * y - z, 0.0));
                }
            }
        }
        let g = GridState::new_unchecked(spec, amps).unwrap();
        let d0 = derivative(&g, 0).unwrap();
        let d1 = derivative(&g, 1).unwrap();
        let d2 = derivative(&g, 2).unwrap();
        let mut flat = 0;
        for i0 in 0..n {
            for i1 in 0..n {
                for _ in 0..n {
                    let p = g.point([i0, i1, 0]);
                    assert!((d0[flat].re - 2.0 * p[0]).abs() < 1e-12);
                    assert!((d1[flat].re - 6.0 * p[1] * p[1]).abs() < 1e-12);
                    assert!((d2[flat].re + 1.0).abs() < 1e-12);
                    flat += 1;
                }
            }
        }
    }

    #[test]
    fn axis_out_of_range_rejected() {
        let g = grid_1d(4, 33, |x| x);
        assert!(matches!(
            derivative(&g, 1),
            Err(StateError::AxisOutOfRange(2))
        ));
    }
}
