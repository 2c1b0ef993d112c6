//! Monotone piecewise-cubic Hermite interpolation.

use crate::{Error, Result};

/// Fritsch–Carlson PCHIP through `(x_k, y_k)` with strictly increasing `x`.
#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::Validation("interpolation needs at least two points".into()));
        }
        if x.iter().any(|v| v.is_nan()) || x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation("interpolation abscissae must increase".into()));
        }
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes.fill(delta[0]);
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slopes[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { x, y, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Value at `t`; `None` outside the data range.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let k = (self.x.partition_point(|&v| v <= t).max(1) - 1).min(self.x.len() - 2);
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        Some(
            (2.0 * s3 - 3.0 * s2 + 1.0) * self.y[k]
                + (s3 - 2.0 * s2 + s) * h * self.slopes[k]
                + (-2.0 * s3 + 3.0 * s2) * self.y[k + 1]
                + (s3 - s2) * h * self.slopes[k + 1],
        )
    }

    /// The `t` with `eval(t) = target` for data increasing in `x`; `None`
    /// when `target` lies outside the range of `y`.
    pub fn solve_increasing(&self, target: f64) -> Option<f64> {
        let n = self.y.len();
        if !(target >= self.y[0] && target <= self.y[n - 1]) {
            return None;
        }
        let k = (self.y.partition_point(|&v| v < target).max(1) - 1).min(n - 2);
        let (mut lo, mut hi) = (self.x[k], self.x[k + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Three-point end slope, limited to keep the end interval monotone.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
