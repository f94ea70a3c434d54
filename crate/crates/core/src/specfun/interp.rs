//! Natural cubic spline interpolation for tabulated radial profiles.
//!
//! Table-backed initial profiles are sampled on a strictly increasing grid;
//! we interpolate them with the classical natural cubic spline (second
//! derivative zero at both ends), which keeps the interpolant C² so the
//! projection quadratures see a smooth integrand.

use crate::error::{Error, Result};

/// Natural cubic spline through `(x_i, y_i)` with strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots (zero at both ends).
    second: Vec<f64>,
}

impl CubicSpline {
    /// Builds the spline. Requires at least two points, finite data, and
    /// strictly increasing abscissas.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<CubicSpline> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidProfile {
                detail: format!("table length mismatch: {} xs vs {} ys", xs.len(), ys.len()),
            });
        }
        if xs.len() < 2 {
            return Err(Error::InvalidProfile {
                detail: format!("need at least 2 table points, got {}", xs.len()),
            });
        }
        for (&x, &y) in xs.iter().zip(&ys) {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidProfile {
                    detail: format!("non-finite table entry ({x}, {y})"),
                });
            }
        }
        for w in xs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidProfile {
                    detail: format!("table abscissas must strictly increase: {} then {}", w[0], w[1]),
                });
            }
        }

        // Tridiagonal solve for interior second derivatives, natural ends.
        let n = xs.len();
        let mut second = vec![0.0; n];
        if n > 2 {
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            let mut upper = vec![0.0; m];
            for i in 0..m {
                let h0 = xs[i + 1] - xs[i];
                let h1 = xs[i + 2] - xs[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
            }
            // Thomas algorithm; the lower diagonal equals the previous upper.
            for i in 1..m {
                let lower = xs[i + 1] - xs[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                second[i + 1] = (rhs[i] - upper[i] * second[i + 2]) / diag[i];
            }
        }

        Ok(CubicSpline { xs, ys, second })
    }

    /// Domain of the table.
    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// The knot abscissas, strictly increasing. Piecewise integrators align
    /// their panels to these so each panel sees a single cubic piece.
    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    /// The sampled ordinates, one per knot.
    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    /// Evaluates the spline; clamps to the end values outside the table
    /// (profiles are only ever queried inside their stated domain, so the
    /// clamp just guards against last-ulp roundoff at the ends).
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_exactly() {
        let xs = vec![0.0, 0.3, 0.7, 1.0];
        let ys = vec![1.0, 2.5, -0.5, 0.0];
        let s = CubicSpline::new(xs.clone(), ys.clone()).unwrap();
        for (&x, &y) in xs.iter().zip(&ys) {
            assert!((s.eval(x) - y).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_data_reproduced_exactly() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * x - 1.0).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((s.eval(x) - (3.0 * x - 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn smooth_function_close_on_fine_grid() {
        // sin on 41 knots: natural spline error is O(h^4) in the interior,
        // dominated by the O(h^2) natural-end bias near the boundary knots.
        let n = 41;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (std::f64::consts::PI * x).sin()).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let err = (s.eval(x) - (std::f64::consts::PI * x).sin()).abs();
            assert!(err < 5e-4, "err {err} at {x}");
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(CubicSpline::new(vec![0.0], vec![1.0]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(CubicSpline::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(CubicSpline::new(vec![0.0, f64::NAN], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn clamps_outside_domain() {
        let s = CubicSpline::new(vec![0.0, 1.0], vec![2.0, 5.0]).unwrap();
        assert_eq!(s.eval(-1.0), 2.0);
        assert_eq!(s.eval(2.0), 5.0);
    }
}
