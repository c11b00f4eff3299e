//! Pointwise checks of the identities that produce the monotonicity formulas,
//! and a characteristics integrator for the first-order PDE of the weight
//! exponent `b` (with `c = e^b`, `rho = c |eta|`):
//!
//! `grad b . (2 g(phi) - xt2^2, xt1 xt2, xt2) = -xt1`
//!
//! in the rotated coordinates `xt1 = <xi, eta/|eta|>`, `xt2 = <xi, eta_nu/|eta|>`.

mod battery;
mod characteristics;
mod checks;
mod fields;

pub use battery::{random_cone_points, verify_identities, CheckResult, CheckStatus};
pub use characteristics::{characteristics_integrate, CharState, CHAR_BLOWUP_NORM};
pub use checks::{
    corrected_gauge_ode_residual, gauge_ode_residual, hessian_identity_check, main_c_residual, orthogonality_check,
    orthogonality_check_arc, pde_residual, remains_closed_form, remains_residual, remains_stated_mismatch, solve_f_ode,
    GradientMode,
};
pub use fields::{
    ConeField, ExpOfTilde, FnField, HuiskenC, HuiskenWeight, LinearField, LogWeight, ScalarField3, StarC,
};

use crate::{Error, Result, Vec2};

/// A point `(xi, eta)` with `eta != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    pub xi: Vec2,
    pub eta: Vec2,
}

impl EvalPoint {
    pub fn new(xi: Vec2, eta: Vec2) -> Result<Self> {
        if !(eta.norm() > 0.0) {
            return Err(Error::InvalidParameter("eta must be nonzero".into()));
        }
        Ok(Self { xi, eta })
    }

    /// Polar angle of `eta`.
    pub fn phi(&self) -> f64 {
        self.eta.angle()
    }

    /// `<xi, eta_nu>` with `eta_nu` the clockwise rotation of `eta`.
    pub fn cone_dot(&self) -> f64 {
        self.xi.dot(self.eta.rot_cw())
    }
}

/// Rotated coordinates `(xt1, xt2, phi)` of an [`EvalPoint`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TildeCoords {
    pub xi1: f64,
    pub xi2: f64,
    pub phi: f64,
}

impl TildeCoords {
    pub const fn new(xi1: f64, xi2: f64, phi: f64) -> Self {
        Self { xi1, xi2, phi }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.xi1, self.xi2, self.phi]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn xi_norm_sq(&self) -> f64 {
        self.xi1 * self.xi1 + self.xi2 * self.xi2
    }
}

/// `xt1 = xi1 cos phi + xi2 sin phi`, `xt2 = xi1 sin phi - xi2 cos phi`.
///
/// `xt1` is the component of `xi` along `eta` and `xt2 = |xi| cos psi` the component
/// along the outer normal `eta_nu`.
pub fn to_tilde(point: &EvalPoint) -> TildeCoords {
    let phi = point.phi();
    let (s, c) = phi.sin_cos();
    let (x1, x2) = (point.xi.x, point.xi.y);
    TildeCoords::new(x1 * c + x2 * s, x1 * s - x2 * c, phi)
}

/// Inverse of [`to_tilde`] with `|eta| = eta_norm`.
pub fn from_tilde(t: TildeCoords, eta_norm: f64) -> EvalPoint {
    let (s, c) = t.phi.sin_cos();
    EvalPoint {
        xi: Vec2::new(t.xi1 * c + t.xi2 * s, t.xi1 * s - t.xi2 * c),
        eta: Vec2::new(c, s) * eta_norm,
    }
}
