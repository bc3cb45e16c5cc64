//! Quadrature, monotone interpolation and root bracketing.

use crate::error::{Error, Result};

/// Composite Simpson rule on `panels` panels (each panel uses its midpoint).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    cumulative_simpson(f, a, b, panels).1.last().copied().unwrap_or(0.0)
}

/// Nodes `x_0..x_n` and the running Simpson integral `∫_a^{x_j} f`.
pub fn cumulative_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    let nodes: Vec<f64> = (0..=n).map(|j| if j == n { b } else { a + j as f64 * h }).collect();
    let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let mut acc = Vec::with_capacity(n + 1);
    acc.push(0.0);
    let mut sum = 0.0;
    for j in 0..n {
        let mid = f(0.5 * (nodes[j] + nodes[j + 1]));
        sum += (nodes[j + 1] - nodes[j]) / 6.0 * (values[j] + 4.0 * mid + values[j + 1]);
        acc.push(sum);
    }
    (nodes, acc)
}

/// Simpson integral of samples on an equally spaced grid spanning `length`.
/// An odd interval count closes with Simpson's 3/8 rule on the last three.
pub fn simpson_uniform(values: &[f64], length: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    if n == 0 {
        return 0.0;
    }
    let h = length / n as f64;
    if n == 1 {
        return 0.5 * h * (values[0] + values[1]);
    }
    let even = if n % 2 == 0 { n } else { n - 3 };
    let mut sum = 0.0;
    for j in (0..even).step_by(2) {
        sum += values[j] + 4.0 * values[j + 1] + values[j + 2];
    }
    let mut total = h / 3.0 * sum;
    if even < n {
        let v = &values[even..];
        total += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
    }
    total
}

/// Piecewise cubic Hermite interpolant of monotone data.
///
/// Node slopes are either supplied (exact derivatives) or estimated with the
/// Fritsch–Butland harmonic mean; either way they are limited so each segment
/// stays monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_nodes(&x, &y)?;
        let d = estimate_slopes(&x, &y);
        Ok(Self::limited(x, y, d))
    }

    /// Use the given node slopes where finite; non-finite entries are
    /// replaced by estimates.
    pub fn with_slopes(x: Vec<f64>, y: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        check_nodes(&x, &y)?;
        if slopes.len() != x.len() {
            return Err(Error::InvalidParameter("slope count differs from node count".into()));
        }
        let est = estimate_slopes(&x, &y);
        let d = slopes.iter().zip(est).map(|(&s, e)| if s.is_finite() { s } else { e }).collect();
        Ok(Self::limited(x, y, d))
    }

    fn limited(x: Vec<f64>, y: Vec<f64>, mut d: Vec<f64>) -> Self {
        // Fritsch–Carlson: keep (α, β) inside the circle of radius 3.
        for k in 0..x.len() - 1 {
            let delta = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
            if delta == 0.0 {
                d[k] = 0.0;
                d[k + 1] = 0.0;
                continue;
            }
            let a = d[k] / delta;
            let b = d[k + 1] / delta;
            if a < 0.0 {
                d[k] = 0.0;
            }
            if b < 0.0 {
                d[k + 1] = 0.0;
            }
            let r = a * a + b * b;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                d[k] = tau * a * delta;
                d[k + 1] = tau * b * delta;
            }
        }
        Self { x, y, d }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    fn segment(&self, x: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.x.len() - 2),
        }
    }

    /// Value and derivative at `x` (clamped to the node range).
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let x = x.clamp(self.x[0], *self.x.last().unwrap());
        let k = self.segment(x);
        let h = self.x[k + 1] - self.x[k];
        let s = (x - self.x[k]) / h;
        let (y0, y1, d0, d1) = (self.y[k], self.y[k + 1], self.d[k] * h, self.d[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1;
        let deriv = ((6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * d0 + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * d1)
            / h;
        (value, deriv)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).0
    }

    /// Solve `self(x) = y` for non-decreasing data.
    pub fn inverse(&self, y: f64) -> f64 {
        let last = self.y.len() - 1;
        if y <= self.y[0] {
            return self.x[0];
        }
        if y >= self.y[last] {
            return self.x[last];
        }
        let k = self.y.partition_point(|&v| v <= y).saturating_sub(1).min(last - 1);
        let (mut lo, mut hi) = (self.x[k], self.x[k + 1]);
        // Newton with a bisection safeguard; the segment is monotone.
        let mut x = lo + (hi - lo) * (y - self.y[k]) / (self.y[k + 1] - self.y[k]);
        for _ in 0..60 {
            let (v, dv) = self.eval_with_derivative(x);
            let r = v - y;
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            if r.abs() <= 1e-15 * y.abs().max(1e-300) || hi - lo <= 1e-16 * hi.abs().max(1.0) {
                break;
            }
            let step = x - r / dv;
            x = if dv > 0.0 && step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        }
        x
    }
}

fn check_nodes(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter("need at least two (x, y) pairs of equal length".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("interpolation nodes must be strictly increasing".into()));
    }
    if y.windows(2).any(|w| w[1] < w[0]) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("interpolated values must be finite and non-decreasing".into()));
    }
    Ok(())
}

fn estimate_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k])).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a * b > 0.0 {
            let (h0, h1) = (x[k] - x[k - 1], x[k + 1] - x[k]);
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
    d[n - 1] = end(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// Bisection on `[lo, hi]` until the bracket is below `rel_tol · max(|lo|, |hi|)`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NoSolution(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
