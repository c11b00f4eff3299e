//! Periodic differentiation on a uniform grid over `[0, 2pi)`.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::Vec2;

/// How parameter derivatives of node data are approximated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiffScheme {
    /// Second-order central differences.
    #[default]
    #[serde(alias = "2")]
    Central2,
    /// Fourth-order central differences.
    #[serde(alias = "4")]
    Central4,
    /// Fourier differentiation; exact on trigonometric polynomials of degree < N/2.
    Spectral,
}

impl DiffScheme {
    /// Central-difference accuracy order; `None` for the spectral scheme.
    pub fn order(self) -> Option<u32> {
        match self {
            DiffScheme::Central2 => Some(2),
            DiffScheme::Central4 => Some(4),
            DiffScheme::Spectral => None,
        }
    }

    pub fn from_order(order: u32) -> Option<Self> {
        match order {
            2 => Some(DiffScheme::Central2),
            4 => Some(DiffScheme::Central4),
            _ => None,
        }
    }

    /// Largest eigenvalue magnitude of the discrete second derivative, times h^2.
    pub(crate) fn second_derivative_radius(self) -> f64 {
        match self {
            DiffScheme::Central2 => 4.0,
            DiffScheme::Central4 => 16.0 / 3.0,
            DiffScheme::Spectral => std::f64::consts::PI * std::f64::consts::PI,
        }
    }
}

/// First and second derivatives of periodic samples `u(x_j)`, `x_j = 2 pi j / N`.
pub fn periodic_derivatives(u: &[f64], scheme: DiffScheme) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let h = TAU / n as f64;
    let at = |j: isize| u[j.rem_euclid(n as isize) as usize];
    match scheme {
        DiffScheme::Central2 => {
            let mut d1 = Vec::with_capacity(n);
            let mut d2 = Vec::with_capacity(n);
            for j in 0..n as isize {
                let (um, u0, up) = (at(j - 1), at(j), at(j + 1));
                d1.push((up - um) / (2.0 * h));
                d2.push((up - 2.0 * u0 + um) / (h * h));
            }
            (d1, d2)
        }
        DiffScheme::Central4 => {
            let mut d1 = Vec::with_capacity(n);
            let mut d2 = Vec::with_capacity(n);
            for j in 0..n as isize {
                let (umm, um, u0, up, upp) = (at(j - 2), at(j - 1), at(j), at(j + 1), at(j + 2));
                d1.push((-upp + 8.0 * up - 8.0 * um + umm) / (12.0 * h));
                d2.push((-upp + 16.0 * up - 30.0 * u0 + 16.0 * um - umm) / (12.0 * h * h));
            }
            (d1, d2)
        }
        DiffScheme::Spectral => spectral_derivatives(u),
    }
}

/// Componentwise [`periodic_derivatives`] for plane-valued samples.
pub fn periodic_derivatives_vec(v: &[Vec2], scheme: DiffScheme) -> (Vec<Vec2>, Vec<Vec2>) {
    let xs: Vec<f64> = v.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = v.iter().map(|p| p.y).collect();
    let (x1, x2) = periodic_derivatives(&xs, scheme);
    let (y1, y2) = periodic_derivatives(&ys, scheme);
    let d1 = x1.into_iter().zip(y1).map(|(x, y)| Vec2::new(x, y)).collect();
    let d2 = x2.into_iter().zip(y2).map(|(x, y)| Vec2::new(x, y)).collect();
    (d1, d2)
}

/// Signed wavenumber of FFT bin `k`.
fn wavenumber(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

fn spectral_derivatives(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);

    let mut hat: Vec<Complex<f64>> = u.iter().map(|&x| Complex::new(x, 0.0)).collect();
    fwd.process(&mut hat);

    let mut d1 = hat.clone();
    let mut d2 = hat;
    for k in 0..n {
        let w = wavenumber(k, n);
        // The Nyquist mode has no odd derivative on a real grid.
        let w1 = if n.is_multiple_of(2) && k == n / 2 { 0.0 } else { w };
        d1[k] *= Complex::new(0.0, w1);
        d2[k] *= -w * w;
    }
    inv.process(&mut d1);
    inv.process(&mut d2);
    let scale = 1.0 / n as f64;
    (
        d1.into_iter().map(|c| c.re * scale).collect(),
        d2.into_iter().map(|c| c.re * scale).collect(),
    )
}

/// Trapezoid rule for a periodic integrand sampled on the uniform grid.
pub fn periodic_integral(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut n = 0usize;
    let mut sum = 0.0;
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        return 0.0;
    }
    sum * TAU / n as f64
}
