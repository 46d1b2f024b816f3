use crate::error::{Error, Result};

/// Natural cubic spline through `(knots[i], values[i])`.
///
/// Evaluation outside the knot range continues the end pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n < 2 || values.len() != n {
            return Err(Error::BadParams(
                "spline needs at least two knots and one value per knot".into(),
            ));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParams(
                "spline knots must be strictly increasing".into(),
            ));
        }
        if values.iter().chain(knots.iter()).any(|x| !x.is_finite()) {
            return Err(Error::BadParams("spline data must be finite".into()));
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            let mut upper = vec![0.0; k];
            for i in 1..n - 1 {
                let h0 = knots[i] - knots[i - 1];
                let h1 = knots[i + 1] - knots[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                upper[i - 1] = h1;
                rhs[i - 1] =
                    6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
            }
            for i in 1..k {
                let lower = knots[i + 1] - knots[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { knots, values, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn piece(&self, x: f64) -> usize {
        let i = self.knots.partition_point(|&k| k <= x);
        i.clamp(1, self.knots.len() - 1) - 1
    }

    /// Value and first derivative at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let i = self.piece(x);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        (value, slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interpolates_knots() {
        let s = CubicSpline::natural(vec![0.0, 0.5, 1.5, 2.0], vec![1.0, -1.0, 0.5, 2.0]).unwrap();
        for (x, y) in [(0.0, 1.0), (0.5, -1.0), (1.5, 0.5), (2.0, 2.0)] {
            assert_abs_diff_eq!(s.eval(x).0, y, epsilon = 1e-14);
        }
    }

    #[test]
    fn linear_data_stays_linear() {
        let knots: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
        let s = CubicSpline::natural(knots.clone(), knots.clone()).unwrap();
        for x in [-2.0, -1.3, 0.0, 0.77, 2.0, 2.3] {
            let (v, d) = s.eval(x);
            assert_abs_diff_eq!(v, x, epsilon = 1e-13);
            assert_abs_diff_eq!(d, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        let knots: Vec<f64> = (0..7).map(|i| i as f64 * 0.4).collect();
        let values: Vec<f64> = knots.iter().map(|x| (1.3 * x).sin()).collect();
        let s = CubicSpline::natural(knots, values).unwrap();
        let h = 1e-6;
        for x in [0.1, 0.9, 1.7, 2.3] {
            let fd = (s.eval(x + h).0 - s.eval(x - h).0) / (2.0 * h);
            assert_abs_diff_eq!(s.eval(x).1, fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn natural_end_conditions() {
        let s = CubicSpline::natural(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(s.m[0], 0.0);
        assert_eq!(s.m[3], 0.0);
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(CubicSpline::natural(vec![0.0], vec![1.0]).is_err());
        assert!(CubicSpline::natural(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(CubicSpline::natural(vec![0.0, 1.0], vec![1.0]).is_err());
    }
}
