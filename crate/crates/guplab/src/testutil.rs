//! Test-only oracles, independent of the library's evaluation paths.

/// Series evaluations of the elementary functions used as high-precision
/// oracles in tests. These never call the libm routines they check.
pub mod series {
    /// cosh via its Taylor series.
    pub fn cosh(x: f64) -> f64 {
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= x2 / ((2 * k - 1) as f64 * (2 * k) as f64);
            sum += term;
            if term < 1e-20 * sum {
                break;
            }
        }
        sum
    }

    /// sinh via its Taylor series.
    pub fn sinh(x: f64) -> f64 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for k in 1..60 {
            term *= x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-20 * sum.abs() {
                break;
            }
        }
        sum
    }

    /// arctan via Euler's series, convergent for all real x.
    pub fn atan(x: f64) -> f64 {
        let y = x * x / (1.0 + x * x);
        let mut term = x / (1.0 + x * x);
        let mut sum = term;
        for k in 1..200 {
            term *= y * (2 * k) as f64 / (2 * k + 1) as f64;
            sum += term;
            if term.abs() < 1e-20 * sum.abs() {
                break;
            }
        }
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::series;
    use std::f64::consts::PI;

    #[test]
    fn series_match_known_constants() {
        assert!((series::cosh(0.0) - 1.0).abs() < 1e-16);
        assert!((series::sinh(0.0)).abs() < 1e-16);
        // cosh^2 - sinh^2 = 1
        for &x in &[0.3, 1.0, 2.7] {
            let c = series::cosh(x);
            let s = series::sinh(x);
            assert!((c * c - s * s - 1.0).abs() < 1e-13);
        }
        assert!((series::atan(1.0) - PI / 4.0).abs() < 1e-15);
        assert!((series::atan(3f64.sqrt()) - PI / 3.0).abs() < 1e-15);
    }
}
