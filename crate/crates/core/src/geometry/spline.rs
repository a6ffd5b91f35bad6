//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson).

use super::GeometryError;

/// A C¹ cubic Hermite interpolant that never overshoots monotone data.
///
/// Outside the knot range the interpolant continues linearly with the end
/// slope, so value and derivative stay continuous at both ends.
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Builds the interpolant with Fritsch–Carlson slope estimates.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, GeometryError> {
        check_knots(&xs, &ys)?;
        let n = xs.len();
        let secants: Vec<f64> = (0..n - 1)
            .map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
            .collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (d0, d1) = (secants[i - 1], secants[i]);
            slopes[i] = if d0 * d1 <= 0.0 {
                0.0
            } else {
                // weighted harmonic mean, second order on uneven grids
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                (w0 + w1) / (w0 / d0 + w1 / d1)
            };
        }
        let mut out = Self { xs, ys, slopes };
        out.limit(&secants);
        Ok(out)
    }

    /// Knot abscissae, where the second derivative may jump.
    pub fn abscissae(&self) -> &[f64] {
        &self.xs
    }

    /// Builds the interpolant from known slopes, clipping any that would
    /// break monotonicity.
    pub fn with_slopes(xs: Vec<f64>, ys: Vec<f64>, slopes: Vec<f64>) -> Result<Self, GeometryError> {
        check_knots(&xs, &ys)?;
        if slopes.len() != xs.len() || slopes.iter().any(|s| !s.is_finite()) {
            return Err(GeometryError::InvalidProfile("slope count or value mismatch".into()));
        }
        let secants: Vec<f64> = (0..xs.len() - 1)
            .map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]))
            .collect();
        let mut out = Self { xs, ys, slopes };
        out.limit(&secants);
        Ok(out)
    }

    fn limit(&mut self, secants: &[f64]) {
        for (i, &d) in secants.iter().enumerate() {
            if d == 0.0 {
                self.slopes[i] = 0.0;
                self.slopes[i + 1] = 0.0;
                continue;
            }
            for j in [i, i + 1] {
                if self.slopes[j] * d < 0.0 {
                    self.slopes[j] = 0.0;
                }
            }
            let a = self.slopes[i] / d;
            let b = self.slopes[i + 1] / d;
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                self.slopes[i] = tau * a * d;
                self.slopes[i + 1] = tau * b * d;
            }
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Value and first derivative at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return (self.ys[0] + self.slopes[0] * (x - self.xs[0]), self.slopes[0]);
        }
        if x >= self.xs[n - 1] {
            return (
                self.ys[n - 1] + self.slopes[n - 1] * (x - self.xs[n - 1]),
                self.slopes[n - 1],
            );
        }
        let i = self.xs.partition_point(|&k| k <= x) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let deriv = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        (value, deriv)
    }
}

fn check_knots(xs: &[f64], ys: &[f64]) -> Result<(), GeometryError> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return Err(GeometryError::InvalidProfile(
            "need at least two knots with matching values".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(GeometryError::InvalidProfile("non-finite knot".into()));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GeometryError::InvalidProfile("knot abscissae must increase strictly".into()));
    }
    Ok(())
}
