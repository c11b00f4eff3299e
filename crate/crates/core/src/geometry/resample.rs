//! Arclength-uniform resampling through a periodic cubic spline in the parameter.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::geometry::curve::{check_spacing, ClosedCurve};
use crate::{Result, Vec2};

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
const GL_X: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Periodic cubic spline through plane nodes on the uniform grid `x_j = j h`.
#[derive(Clone, Debug)]
pub struct PeriodicSpline {
    h: f64,
    y: Vec<Vec2>,
    m: Vec<Vec2>,
}

impl PeriodicSpline {
    pub fn new(nodes: &[Vec2]) -> Self {
        let n = nodes.len();
        let h = TAU / n as f64;
        let xs: Vec<f64> = nodes.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = nodes.iter().map(|p| p.y).collect();
        let mx = second_moments(&xs, h);
        let my = second_moments(&ys, h);
        Self {
            h,
            y: nodes.to_vec(),
            m: mx.into_iter().zip(my).map(|(a, b)| Vec2::new(a, b)).collect(),
        }
    }

    fn len(&self) -> usize {
        self.y.len()
    }

    fn coeffs(&self, j: usize) -> (Vec2, Vec2, Vec2, Vec2) {
        let n = self.len();
        let (y0, y1) = (self.y[j], self.y[(j + 1) % n]);
        let (m0, m1) = (self.m[j], self.m[(j + 1) % n]);
        let h = self.h;
        let b = (y1 - y0) / h - (m0 * 2.0 + m1) * (h / 6.0);
        (y0, b, m0 * 0.5, (m1 - m0) / (6.0 * h))
    }

    /// Position at local offset `t` in `[0, h]` of interval `j`.
    pub fn eval(&self, j: usize, t: f64) -> Vec2 {
        let (a, b, c, d) = self.coeffs(j);
        a + (b + (c + d * t) * t) * t
    }

    pub fn eval_d1(&self, j: usize, t: f64) -> Vec2 {
        let (_, b, c, d) = self.coeffs(j);
        b + (c * 2.0 + d * (3.0 * t)) * t
    }

    /// Arclength of interval `j` between offsets 0 and `t`.
    pub fn arclength(&self, j: usize, t: f64) -> f64 {
        let half = 0.5 * t;
        GL_X.iter()
            .zip(GL_W)
            .map(|(&x, w)| w * self.eval_d1(j, half * (x + 1.0)).norm())
            .sum::<f64>()
            * half
    }
}

/// Solves the circulant system `M_{j-1} + 4 M_j + M_{j+1} = 6 (y_{j+1} - 2 y_j + y_{j-1}) / h^2`.
fn second_moments(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut rhs: Vec<Complex<f64>> = (0..n)
        .map(|j| {
            let v = y[(j + 1) % n] - 2.0 * y[j] + y[(j + n - 1) % n];
            Complex::new(6.0 * v / (h * h), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut rhs);
    for (k, c) in rhs.iter_mut().enumerate() {
        *c /= 4.0 + 2.0 * (TAU * k as f64 / n as f64).cos();
    }
    planner.plan_fft_inverse(n).process(&mut rhs);
    rhs.into_iter().map(|c| c.re / n as f64).collect()
}

/// Re-places the nodes at equal arclength along the spline through the current nodes.
///
/// Node 0 is kept fixed; the node count is unchanged.
pub fn resample_uniform_arclength(curve: &ClosedCurve) -> Result<ClosedCurve> {
    check_spacing(curve.nodes())?;
    let spline = PeriodicSpline::new(curve.nodes());
    let n = curve.len();
    let h = spline.h;

    let mut cumulative = Vec::with_capacity(n + 1);
    cumulative.push(0.0);
    for j in 0..n {
        let last = cumulative[j];
        cumulative.push(last + spline.arclength(j, h));
    }
    let total = cumulative[n];

    let mut out = Vec::with_capacity(n);
    out.push(curve.nodes()[0]);
    let mut j = 0;
    for k in 1..n {
        let target = total * k as f64 / n as f64;
        while cumulative[j + 1] < target {
            j += 1;
        }
        let t = invert_arclength(&spline, j, target - cumulative[j], cumulative[j + 1] - cumulative[j]);
        out.push(spline.eval(j, t));
    }
    ClosedCurve::new(out)
}

/// Finds `t` in `[0, h]` with `arclength(j, t) = want`, Newton safeguarded by bisection.
fn invert_arclength(spline: &PeriodicSpline, j: usize, want: f64, seg: f64) -> f64 {
    let h = spline.h;
    let (mut lo, mut hi) = (0.0, h);
    let mut t = (want / seg * h).clamp(0.0, h);
    for _ in 0..60 {
        let err = spline.arclength(j, t) - want;
        if err > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let speed = spline.eval_d1(j, t).norm();
        let mut next = t - err / speed;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * h {
            return next;
        }
        t = next;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::diff::DiffScheme;
    use crate::geometry::CurveGeometry;

    fn chord_spread(c: &ClosedCurve) -> f64 {
        let n = c.len();
        let chords: Vec<f64> = (0..n).map(|j| (c.nodes()[(j + 1) % n] - c.nodes()[j]).norm()).collect();
        let mean = chords.iter().sum::<f64>() / n as f64;
        chords.iter().map(|c| (c - mean).abs() / mean).fold(0.0, f64::max)
    }

    #[test]
    fn uniform_circle_is_a_fixed_point() {
        let c = ClosedCurve::circle(1.3, Vec2::ZERO, 128).unwrap();
        let r = resample_uniform_arclength(&c).unwrap();
        let err = c
            .nodes()
            .iter()
            .zip(r.nodes())
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn clustered_circle_is_equalized() {
        let c = ClosedCurve::sampled(256, |x| Vec2::from_polar(1.0, x + 0.3 * x.sin())).unwrap();
        assert!(chord_spread(&c) > 0.2);
        let r = resample_uniform_arclength(&c).unwrap();
        assert!(chord_spread(&r) < 1e-6, "{}", chord_spread(&r));
        let off_trace = r.nodes().iter().map(|p| (p.norm() - 1.0).abs()).fold(0.0, f64::max);
        assert!(off_trace < 1e-7, "{off_trace}");
    }

    #[test]
    fn ellipse_trace_and_length_preserved() {
        let e = ClosedCurve::ellipse(2.0, 1.0, 256).unwrap();
        let r = resample_uniform_arclength(&e).unwrap();
        let rel = (r.total_length() - e.total_length()).abs() / e.total_length();
        assert!(rel < 1e-6, "{rel}");
        // distance to the ellipse, first order in the implicit residual
        let dist = r
            .nodes()
            .iter()
            .map(|p| {
                let f = (p.x / 2.0).powi(2) + p.y * p.y - 1.0;
                let grad = Vec2::new(p.x / 2.0, 2.0 * p.y).norm();
                f.abs() / grad
            })
            .fold(0.0, f64::max);
        assert!(dist < 1e-6, "{dist}");
    }

    #[test]
    fn curvature_unchanged_by_resampling_to_second_order() {
        let e = ClosedCurve::ellipse(1.5, 1.0, 256).unwrap();
        let r = resample_uniform_arclength(&e).unwrap();
        let ke: f64 = CurveGeometry::new(&e, DiffScheme::Central2)
            .unwrap()
            .curvature()
            .iter()
            .cloned()
            .fold(0.0, f64::max);
        let kr: f64 = CurveGeometry::new(&r, DiffScheme::Central2)
            .unwrap()
            .curvature()
            .iter()
            .cloned()
            .fold(0.0, f64::max);
        // max curvature a/b^2 = 1.5 sampled at a node in both parametrizations
        assert!((ke - 1.5).abs() < 1e-3 && (kr - 1.5).abs() < 1e-3, "{ke} {kr}");
        assert!((e.enclosed_area() - r.enclosed_area()).abs() < 1e-6);
    }
}
