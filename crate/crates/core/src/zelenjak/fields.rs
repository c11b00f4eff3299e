use super::{to_tilde, EvalPoint, TildeCoords};
use crate::Vec2;

/// Scalar field of `(xt1, xt2, phi)`, e.g. the exponent `b` of the weight `c = e^b`.
pub trait ScalarField3 {
    fn value(&self, p: TildeCoords) -> f64;

    /// Analytic gradient, when known.
    fn gradient(&self, _p: TildeCoords) -> Option<[f64; 3]> {
        None
    }

    /// Central differences with steps `1e-5 max(1, |p_i|)`.
    fn fd_gradient(&self, p: TildeCoords) -> [f64; 3] {
        let x = p.as_array();
        let mut grad = [0.0; 3];
        for i in 0..3 {
            let h = 1e-5 * x[i].abs().max(1.0);
            let mut plus = x;
            let mut minus = x;
            plus[i] += h;
            minus[i] -= h;
            grad[i] =
                (self.value(TildeCoords::from_array(plus)) - self.value(TildeCoords::from_array(minus))) / (2.0 * h);
        }
        grad
    }
}

/// `b = -(xt1^2 + xt2^2)/4`, the Gaussian weight.
#[derive(Clone, Copy, Debug, Default)]
pub struct HuiskenWeight;

impl ScalarField3 for HuiskenWeight {
    fn value(&self, p: TildeCoords) -> f64 {
        -0.25 * p.xi_norm_sq()
    }

    fn gradient(&self, p: TildeCoords) -> Option<[f64; 3]> {
        Some([-0.5 * p.xi1, -0.5 * p.xi2, 0.0])
    }
}

/// `b = -log |xt2|`, the star weight.
#[derive(Clone, Copy, Debug, Default)]
pub struct LogWeight;

impl ScalarField3 for LogWeight {
    fn value(&self, p: TildeCoords) -> f64 {
        -p.xi2.abs().ln()
    }

    fn gradient(&self, p: TildeCoords) -> Option<[f64; 3]> {
        (p.xi2 != 0.0).then(|| [0.0, -1.0 / p.xi2, 0.0])
    }
}

/// `b = k . (xt1, xt2, phi)`.
#[derive(Clone, Copy, Debug)]
pub struct LinearField(pub [f64; 3]);

impl ScalarField3 for LinearField {
    fn value(&self, p: TildeCoords) -> f64 {
        let x = p.as_array();
        (0..3).map(|i| self.0[i] * x[i]).sum()
    }

    fn gradient(&self, _p: TildeCoords) -> Option<[f64; 3]> {
        Some(self.0)
    }
}

/// Sampled field without analytic gradient.
pub struct FnField<F>(pub F);

impl<F: Fn(TildeCoords) -> f64> ScalarField3 for FnField<F> {
    fn value(&self, p: TildeCoords) -> f64 {
        (self.0)(p)
    }
}

/// Field `c(xi, eta)`, homogeneous of order 0 in `eta`.
pub trait ConeField {
    fn value(&self, xi: Vec2, eta: Vec2) -> f64;

    /// `(D_xi c, D_eta c)` when known analytically.
    fn gradient(&self, _xi: Vec2, _eta: Vec2) -> Option<(Vec2, Vec2)> {
        None
    }

    /// Central differences with steps `1e-5 max(1, |.|)` in `xi` and `1e-5 |eta|` in `eta`.
    fn fd_gradient(&self, xi: Vec2, eta: Vec2) -> (Vec2, Vec2) {
        let hx = 1e-5 * xi.norm().max(1.0);
        let he = 1e-5 * eta.norm();
        let ex = Vec2::new(1.0, 0.0);
        let ey = Vec2::new(0.0, 1.0);
        let d = |f: &dyn Fn(f64) -> f64, h: f64| (f(h) - f(-h)) / (2.0 * h);
        let dxi = Vec2::new(
            d(&|h| self.value(xi + ex * h, eta), hx),
            d(&|h| self.value(xi + ey * h, eta), hx),
        );
        let deta = Vec2::new(
            d(&|h| self.value(xi, eta + ex * h), he),
            d(&|h| self.value(xi, eta + ey * h), he),
        );
        (dxi, deta)
    }
}

/// `c = exp(-|xi|^2/4)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HuiskenC;

impl ConeField for HuiskenC {
    fn value(&self, xi: Vec2, _eta: Vec2) -> f64 {
        (-0.25 * xi.norm_sq()).exp()
    }

    fn gradient(&self, xi: Vec2, eta: Vec2) -> Option<(Vec2, Vec2)> {
        Some((xi * (-0.5 * self.value(xi, eta)), Vec2::ZERO))
    }
}

/// `c = |eta| / <xi, eta_nu>` on the cone `<xi, eta_nu> > 0`, so `rho = c |eta|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct StarC;

impl ConeField for StarC {
    fn value(&self, xi: Vec2, eta: Vec2) -> f64 {
        eta.norm() / xi.dot(eta.rot_cw())
    }

    fn gradient(&self, xi: Vec2, eta: Vec2) -> Option<(Vec2, Vec2)> {
        let dot = xi.dot(eta.rot_cw());
        if dot == 0.0 {
            return None;
        }
        let e = eta.norm();
        let dxi = eta.rot_cw() * (-e / (dot * dot));
        let deta = eta / (e * dot) - xi.rot_ccw() * (e / (dot * dot));
        Some((dxi, deta))
    }
}

/// `c = exp(b(to_tilde(xi, eta)))` for a tilde-coordinate exponent `b`.
pub struct ExpOfTilde<B>(pub B);

impl<B: ScalarField3> ConeField for ExpOfTilde<B> {
    fn value(&self, xi: Vec2, eta: Vec2) -> f64 {
        self.0.value(to_tilde(&EvalPoint { xi, eta })).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_and_fd_gradients_agree() {
        let p = TildeCoords::new(1.3, -0.7, 2.1);
        for (name, f) in [
            ("huisken", &HuiskenWeight as &dyn ScalarField3),
            ("log", &LogWeight),
            ("linear", &LinearField([0.3, -2.0, 1.5])),
        ] {
            let a = f.gradient(p).unwrap();
            let n = f.fd_gradient(p);
            for i in 0..3 {
                assert!((a[i] - n[i]).abs() < 1e-6, "{name}[{i}]: {} vs {}", a[i], n[i]);
            }
        }
        let (xi, eta) = (Vec2::new(1.1, 0.4), Vec2::new(-0.5, 1.3));
        for f in [&HuiskenC as &dyn ConeField, &StarC] {
            let (a_xi, a_eta) = f.gradient(xi, eta).unwrap();
            let (n_xi, n_eta) = f.fd_gradient(xi, eta);
            assert!((a_xi - n_xi).norm() < 1e-6 && (a_eta - n_eta).norm() < 1e-6);
        }
    }

    #[test]
    fn star_c_is_the_exponential_of_the_log_weight() {
        let (xi, eta) = (Vec2::new(1.1, 0.4), Vec2::new(-0.5, 1.3));
        let a = StarC.value(xi, eta);
        let b = ExpOfTilde(LogWeight).value(xi, eta);
        assert!((a - b).abs() < 1e-12 * a);
    }
}
