//! Small dense helpers: tridiagonal solves and interpolating cubics.

use crate::error::{Error, Result};

/// Solves a tridiagonal system in place (Thomas algorithm).
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (so `lower[0]` is ignored) and
/// `upper[i]` multiplies `x[i+1]` (so `upper[n-1]` is ignored). The matrix is
/// expected to be diagonally dominant; no pivoting is performed.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = rhs.len();
    assert!(lower.len() == n && diag.len() == n && upper.len() == n);
    if n == 0 {
        return;
    }
    let mut c_prime = vec![0.0; n];
    let mut denom = diag[0];
    c_prime[0] = upper[0] / denom;
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - lower[i] * c_prime[i - 1];
        c_prime[i] = upper[i] / denom;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c_prime[i] * rhs[i + 1];
    }
}

/// Natural cubic spline through `(x_i, y_i)` with exact piecewise integration.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
    /// Integral from `x[0]` to each knot.
    cumulative: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::Config(format!(
                "cubic spline needs at least 3 knots with matching values (got {} knots, {} values)",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("spline knots must be strictly increasing".into()));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Config("spline data must be finite".into()));
        }
        let mut lower = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut upper = vec![0.0; n];
        let mut m = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            lower[i] = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            upper[i] = h1 / 6.0;
            m[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut m);

        let mut spline = Self {
            x,
            y,
            m,
            cumulative: vec![0.0; n],
        };
        for i in 1..n {
            let prev = spline.cumulative[i - 1];
            spline.cumulative[i] = prev + spline.piece_integral(i - 1, spline.x[i]);
        }
        Ok(spline)
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    fn locate(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.partition_point(|&k| k <= t) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * self.m[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.m[i + 1]
    }

    /// Integral of piece `i` from `x[i]` to `t`.
    fn piece_integral(&self, i: usize, t: f64) -> f64 {
        let h = self.x[i + 1] - self.x[i];
        let b = (t - self.x[i]) / h;
        let a = 1.0 - b;
        // antiderivative in terms of b, evaluated between 0 and b
        let lin = h * (self.y[i] * (b - 0.5 * b * b) + self.y[i + 1] * 0.5 * b * b);
        // int (a^3 - a) dt = -h [a^4/4 - a^2/2], a goes 1 -> a
        let cub_a = -h * ((0.25 * a.powi(4) - 0.5 * a * a) - (0.25 - 0.5));
        let cub_b = h * (0.25 * b.powi(4) - 0.5 * b * b);
        lin + (cub_a * self.m[i] + cub_b * self.m[i + 1]) * h * h / 6.0
    }

    /// Integral of the spline from `x[0]` to `t`.
    pub fn integral_from_start(&self, t: f64) -> f64 {
        let i = self.locate(t);
        self.cumulative[i] + self.piece_integral(i, t)
    }
}

/// Cubic Hermite interpolation through values and slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteTable {
    x: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
}

impl HermiteTable {
    pub fn new(x: Vec<f64>, y: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n || dy.len() != n {
            return Err(Error::Config("Hermite table needs at least 2 rows of x, y, dy".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("table abscissae must be strictly increasing".into()));
        }
        Ok(Self { x, y, dy })
    }

    /// Builds slopes with second-order differences (one-sided at the ends).
    pub fn with_estimated_slopes(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::Config("slope estimation needs at least 3 rows".into()));
        }
        let dy = (0..n)
            .map(|i| {
                let (j0, j1, j2) = if i == 0 {
                    (0, 1, 2)
                } else if i == n - 1 {
                    (n - 3, n - 2, n - 1)
                } else {
                    (i - 1, i, i + 1)
                };
                three_point_derivative(x[i], [x[j0], x[j1], x[j2]], [y[j0], y[j1], y[j2]])
            })
            .collect();
        Self::new(x, y, dy)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn locate(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.partition_point(|&k| k <= t) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    /// Value and first derivative at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (d0, d1) = (self.dy[i] * h, self.dy[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1;
        let slope = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * d1)
            / h;
        (value, slope)
    }

    pub fn endpoint_slopes(&self) -> (f64, f64) {
        (self.dy[0], self.dy[self.dy.len() - 1])
    }

    pub fn endpoint_values(&self) -> (f64, f64) {
        (self.y[0], self.y[self.y.len() - 1])
    }
}

/// Derivative at `t` of the quadratic through three points.
pub fn three_point_derivative(t: f64, x: [f64; 3], y: [f64; 3]) -> f64 {
    let [x0, x1, x2] = x;
    let [y0, y1, y2] = y;
    y0 * (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
}

/// Second derivative of the quadratic through three points.
pub fn three_point_second_derivative(x: [f64; 3], y: [f64; 3]) -> f64 {
    let [x0, x1, x2] = x;
    let [y0, y1, y2] = y;
    2.0 * (y0 / ((x0 - x1) * (x0 - x2)) + y1 / ((x1 - x0) * (x1 - x2)) + y2 / ((x2 - x0) * (x2 - x1)))
}
