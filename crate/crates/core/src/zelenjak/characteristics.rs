//! Method of characteristics for the weight PDE with a general anisotropy:
//! `dxt1/ds = 2 g(phi) - xt2^2`, `dxt2/ds = xt1 xt2`, `dphi/ds = xt2`, `db/ds = -xt1`.

use serde::Serialize;

use crate::flow::Anisotropy;
use crate::{Error, Result};

/// State norm beyond which a characteristic is considered to have blown up.
pub const CHAR_BLOWUP_NORM: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CharState {
    pub s: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub phi: f64,
    pub b: f64,
}

impl CharState {
    pub fn new(xi1: f64, xi2: f64, phi: f64, b: f64) -> Self {
        Self {
            s: 0.0,
            xi1,
            xi2,
            phi,
            b,
        }
    }

    fn y(&self) -> [f64; 4] {
        [self.xi1, self.xi2, self.phi, self.b]
    }

    fn norm(&self) -> f64 {
        self.y().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn field(g: &Anisotropy, y: [f64; 4]) -> [f64; 4] {
    [2.0 * g.at_angle(y[2]) - y[1] * y[1], y[0] * y[1], y[1], -y[0]]
}

fn shift(y: [f64; 4], k: [f64; 4], a: f64) -> [f64; 4] {
    [y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]]
}

/// Classical RK4 along the characteristic from `init` over a parameter span `s_span`
/// (negative spans integrate backwards) with step magnitude `ds`.
///
/// The returned path starts with `init` and ends exactly at `init.s + s_span`.
pub fn characteristics_integrate(g: &Anisotropy, init: CharState, s_span: f64, ds: f64) -> Result<Vec<CharState>> {
    if !(ds > 0.0 && ds.is_finite()) || !s_span.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need ds > 0 and a finite span, got ds = {ds}, span = {s_span}"
        )));
    }
    let steps = (s_span.abs() / ds).ceil().max(0.0) as usize;
    let mut path = Vec::with_capacity(steps + 1);
    path.push(init);
    if steps == 0 {
        return Ok(path);
    }
    let h = s_span / steps as f64;
    let mut y = init.y();
    for i in 1..=steps {
        let k1 = field(g, y);
        let k2 = field(g, shift(y, k1, 0.5 * h));
        let k3 = field(g, shift(y, k2, 0.5 * h));
        let k4 = field(g, shift(y, k3, h));
        for j in 0..4 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let state = CharState {
            s: init.s + h * i as f64,
            xi1: y[0],
            xi2: y[1],
            phi: y[2],
            b: y[3],
        };
        let norm = state.norm();
        if !(norm <= CHAR_BLOWUP_NORM) {
            return Err(Error::CharacteristicBlowup { s: state.s, norm });
        }
        path.push(state);
    }
    Ok(path)
}
