//! One-dimensional interpolants: monotone piecewise cubic Hermite (for
//! tabulated warping and profile functions) and interpolating cubic splines
//! (for sampled parameter grids).

use crate::error::{GeometryError, Result};

fn check_knots(xs: &[f64], ys: &[f64], min: usize) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(GeometryError::InvalidParameter(format!(
            "knot count mismatch: {} abscissae, {} values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < min {
        return Err(GeometryError::InvalidParameter(format!(
            "need at least {min} knots, got {}",
            xs.len()
        )));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(GeometryError::InvalidParameter(
            "knots must be strictly increasing".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(GeometryError::InvalidParameter("knots must be finite".into()));
    }
    Ok(())
}

fn locate(xs: &[f64], x: f64) -> usize {
    match xs.partition_point(|&k| k <= x) {
        0 => 0,
        i if i >= xs.len() => xs.len() - 2,
        i => i - 1,
    }
}

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_knots(&xs, &ys, 2)?;
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes = vec![delta[0]; 2];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] <= 0.0 {
                    slopes[k] = 0.0;
                } else {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slopes[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { xs, ys, slopes })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Value, first and second derivative at `x` (extrapolates the end cells).
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let value =
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
        let d1 = (6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1;
        let d2 = (12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * m1;
        (value, d1 / h, d2 / (h * h))
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Interpolating cubic spline through strictly increasing knots, stored by
/// its second derivatives at the knots.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    second: Vec<f64>,
}

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    c[0] = upper[0] / d;
    rhs[0] /= d;
    for i in 1..n {
        d = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / d;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

impl CubicSpline {
    /// Zero second derivative at both ends.
    pub fn natural(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_knots(&xs, &ys, 3)?;
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let m = n - 2;
        let (mut lower, mut diag, mut upper, mut rhs) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for k in 0..m {
            let i = k + 1;
            lower[k] = h[i - 1];
            diag[k] = 2.0 * (h[i - 1] + h[i]);
            upper[k] = h[i];
            rhs[k] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
        let mut second = vec![0.0; n];
        second[1..n - 1].copy_from_slice(&rhs);
        Ok(Self { xs, ys, second })
    }

    /// Third derivative continuous across the second and the second-to-last
    /// knots. Fourth-order accurate up to the ends; needs four knots.
    pub fn not_a_knot(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        check_knots(&xs, &ys, 4)?;
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let m = n - 2;
        let (mut lower, mut diag, mut upper, mut rhs) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for k in 0..m {
            let i = k + 1;
            lower[k] = h[i - 1];
            diag[k] = 2.0 * (h[i - 1] + h[i]);
            upper[k] = h[i];
            rhs[k] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
        }
        // M0 = ((h0 + h1) M1 - h0 M2) / h1, and symmetrically at the right end
        let (h0, h1) = (h[0], h[1]);
        diag[0] += h0 * (h0 + h1) / h1;
        upper[0] -= h0 * h0 / h1;
        let (ha, hb) = (h[n - 3], h[n - 2]);
        diag[m - 1] += hb * (ha + hb) / ha;
        lower[m - 1] -= hb * hb / ha;
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
        let mut second = vec![0.0; n];
        second[1..n - 1].copy_from_slice(&rhs);
        second[0] = ((h0 + h1) * second[1] - h0 * second[2]) / h1;
        second[n - 1] = ((ha + hb) * second[n - 2] - hb * second[n - 3]) / ha;
        Ok(Self { xs, ys, second })
    }

    /// `(value, first derivative, second derivative)`; the end pieces are
    /// extended beyond the knot range.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let d2 = a * m0 + b * m1;
        (value, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_cubic_reproduces_knots_and_stays_monotone() {
        let xs = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let ys = vec![0.0, 0.1, 0.1, 2.0, 2.1];
        let p = MonotoneCubic::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x).0 - y).abs() < 1e-14);
        }
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=400 {
            let v = p.eval(k as f64 * 0.01).0;
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }

    #[test]
    fn natural_spline_is_exact_for_lines() {
        let xs: Vec<f64> = (0..6).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let s = CubicSpline::natural(xs, ys).unwrap();
        let (v, d, dd) = s.eval(1.3);
        assert!((v - 2.9).abs() < 1e-13);
        assert!((d - 3.0).abs() < 1e-13);
        assert!(dd.abs() < 1e-12);
    }

    #[test]
    fn not_a_knot_spline_is_exact_for_cubics() {
        let xs: Vec<f64> = vec![0.0, 0.3, 0.7, 1.0, 1.6, 2.0];
        let p = |x: f64| x * x * x - 2.0 * x * x + 0.5;
        let s = CubicSpline::not_a_knot(xs.clone(), xs.iter().map(|&x| p(x)).collect()).unwrap();
        for x in [0.05, 0.5, 1.3, 1.95] {
            let (v, d, dd) = s.eval(x);
            assert!((v - p(x)).abs() < 1e-12);
            assert!((d - (3.0 * x * x - 4.0 * x)).abs() < 1e-11);
            assert!((dd - (6.0 * x - 4.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(MonotoneCubic::new(vec![0.0, 2.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
    }
}
