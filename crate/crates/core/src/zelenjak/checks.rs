use super::fields::{ConeField, ScalarField3};
use super::{EvalPoint, TildeCoords};
use crate::flow::Anisotropy;
use crate::functionals::{big_f, rho, DensityKind};
use crate::{Error, Result, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientMode {
    Analytic,
    FiniteDifference,
}

fn field_gradient(b: &dyn ScalarField3, p: TildeCoords, mode: GradientMode) -> Result<[f64; 3]> {
    let grad = match mode {
        GradientMode::Analytic => b.gradient(p).ok_or(Error::GradientUnavailable)?,
        GradientMode::FiniteDifference => b.fd_gradient(p),
    };
    if grad.iter().all(|g| g.is_finite()) {
        Ok(grad)
    } else {
        Err(Error::GradientUnavailable)
    }
}

/// `grad b . (2 g(phi) - xt2^2, xt1 xt2, xt2) + xt1`.
pub fn pde_residual(b: &dyn ScalarField3, p: TildeCoords, g: &Anisotropy, mode: GradientMode) -> Result<f64> {
    let grad = field_gradient(b, p, mode)?;
    let dir = [2.0 * g.at_angle(p.phi) - p.xi2 * p.xi2, p.xi1 * p.xi2, p.xi2];
    Ok(grad[0] * dir[0] + grad[1] * dir[1] + grad[2] * dir[2] + p.xi1)
}

/// `2 g <eta, D_xi c> - |eta|^2 <xi, D_eta c> + c <xi, eta>`.
pub fn main_c_residual(c: &dyn ConeField, point: &EvalPoint, g: &Anisotropy, mode: GradientMode) -> Result<f64> {
    let (xi, eta) = (point.xi, point.eta);
    let (dxi, deta) = match mode {
        GradientMode::Analytic => c.gradient(xi, eta).ok_or(Error::GradientUnavailable)?,
        GradientMode::FiniteDifference => c.fd_gradient(xi, eta),
    };
    let value = c.value(xi, eta);
    let res = 2.0 * g.eval(eta) * eta.dot(dxi) - eta.norm_sq() * xi.dot(deta) + value * xi.dot(eta);
    if res.is_finite() {
        Ok(res)
    } else {
        Err(Error::GradientUnavailable)
    }
}

/// Samples `f(psi) = c1 cos psi + c2 sin psi + int_0^psi h(s) sin(psi - s) ds` on `grid`.
///
/// Uses `sin(psi - s) = sin psi cos s - cos psi sin s` and cumulative Simpson sums
/// (one midpoint per grid interval) of `h cos` and `h sin`, started from 0.
pub fn solve_f_ode(h: impl Fn(f64) -> f64, c1: f64, c2: f64, grid: &[f64]) -> Result<Vec<f64>> {
    const MIN_POINTS: usize = 16;
    if grid.len() < MIN_POINTS {
        return Err(Error::GridTooCoarse {
            got: grid.len(),
            min: MIN_POINTS,
        });
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("psi grid must be strictly increasing".into()));
    }
    let hc = |s: f64| h(s) * s.cos();
    let hs = |s: f64| h(s) * s.sin();
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));

    // anchor: grid point closest to 0, integrated from 0 on a fine subdivision
    let anchor = (0..grid.len())
        .min_by(|&i, &j| grid[i].abs().total_cmp(&grid[j].abs()))
        .expect("grid is non-empty");
    let mut ic = vec![0.0; grid.len()];
    let mut is = vec![0.0; grid.len()];
    let a = grid[anchor];
    const ANCHOR_PIECES: usize = 64;
    for k in 0..ANCHOR_PIECES {
        let lo = a * k as f64 / ANCHOR_PIECES as f64;
        let hi = a * (k + 1) as f64 / ANCHOR_PIECES as f64;
        ic[anchor] += simpson(&hc, lo, hi);
        is[anchor] += simpson(&hs, lo, hi);
    }
    for i in anchor + 1..grid.len() {
        ic[i] = ic[i - 1] + simpson(&hc, grid[i - 1], grid[i]);
        is[i] = is[i - 1] + simpson(&hs, grid[i - 1], grid[i]);
    }
    for i in (0..anchor).rev() {
        ic[i] = ic[i + 1] - simpson(&hc, grid[i], grid[i + 1]);
        is[i] = is[i + 1] - simpson(&hs, grid[i], grid[i + 1]);
    }
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let (s, c) = p.sin_cos();
            c1 * c + c2 * s + s * ic[i] - c * is[i]
        })
        .collect())
}

fn central(a: &dyn Fn(f64) -> f64, r: f64, h: f64) -> f64 {
    (a(r + h) - a(r - h)) / (2.0 * h)
}

/// `r a'(r) + a(r) - r/2 - 1/r`, with `a'` by central differences (`h = 1e-6`).
pub fn gauge_ode_residual(a: &dyn Fn(f64) -> f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    let h = 1e-6f64.min(0.5 * r);
    Ok(r * central(a, r, h) + a(r) - 0.5 * r - 1.0 / r)
}

/// `r a'(r) + a(r) - 1/r + r/2`: the gauge equation whose solution
/// `log(r)/r - r/4` cancels the residual equations exactly.
pub fn corrected_gauge_ode_residual(a: &dyn Fn(f64) -> f64, r: f64) -> Result<f64> {
    Ok(gauge_ode_residual(a, r)? + r)
}

/// Trapezoid integrals `(int c g cos phi dphi, int c g sin phi dphi)` over `[0, 2 pi)` at fixed `xi`.
pub fn orthogonality_check(c: &dyn Fn(Vec2, f64) -> f64, g: &Anisotropy, xi: Vec2, quadrature_n: usize) -> (f64, f64) {
    let h = std::f64::consts::TAU / quadrature_n as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for k in 0..quadrature_n {
        let phi = h * k as f64;
        let w = c(xi, phi) * g.at_angle(phi) * h;
        a += w * phi.cos();
        b += w * phi.sin();
    }
    (a, b)
}

/// Midpoint-rule version of [`orthogonality_check`] over the open arc where
/// `<xi, eta_nu> > 0`, i.e. `phi in (theta, theta + pi)` for `xi = |xi| e^{i theta}`.
pub fn orthogonality_check_arc(
    c: &dyn Fn(Vec2, f64) -> f64,
    g: &Anisotropy,
    xi: Vec2,
    quadrature_n: usize,
) -> (f64, f64) {
    let theta = xi.angle();
    let h = std::f64::consts::PI / quadrature_n as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for k in 0..quadrature_n {
        let phi = theta + h * (k as f64 + 0.5);
        let w = c(xi, phi) * g.at_angle(phi) * h;
        a += w * phi.cos();
        b += w * phi.sin();
    }
    (a, b)
}

fn require_cone(kind: DensityKind, point: &EvalPoint) -> Result<()> {
    if kind.is_star() && !(point.cone_dot() > 0.0) {
        return Err(Error::ConeViolation { dot: point.cone_dot() });
    }
    Ok(())
}

/// `max |D^2_eta F - rho g |eta|^{-1} D^2 |eta||` with the Hessian by central differences.
pub fn hessian_identity_check(kind: DensityKind, point: &EvalPoint, g: &Anisotropy) -> Result<f64> {
    require_cone(kind, point)?;
    let (xi, eta) = (point.xi, point.eta);
    let h = 1e-4 * eta.norm();
    let f = |e: Vec2| big_f(xi, e, kind);
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    let f0 = f(eta)?;
    let hxx = (f(eta + ex)? - 2.0 * f0 + f(eta - ex)?) / (h * h);
    let hyy = (f(eta + ey)? - 2.0 * f0 + f(eta - ey)?) / (h * h);
    let hxy = (f(eta + ex + ey)? - f(eta + ex - ey)? - f(eta - ex + ey)? + f(eta - ex - ey)?) / (4.0 * h * h);

    let e = eta.norm();
    let scale = rho(xi, eta, kind)? * g.eval(eta) / e.powi(4);
    let (e1, e2) = (eta.x, eta.y);
    let rxx = scale * e2 * e2;
    let ryy = scale * e1 * e1;
    let rxy = -scale * e1 * e2;
    Ok((hxx - rxx).abs().max((hyy - ryy).abs()).max((hxy - rxy).abs()))
}

/// Left-minus-right sides of the two residual equations
///
/// `F_xi1 - F_xi1eta1 eta1 - F_xi2eta1 eta2 = rho (-xi1 eta2^2 + xi2 eta1 eta2) / (2 |eta|^2)`,
/// `F_xi2 - F_xi1eta2 eta1 - F_xi2eta2 eta2 = rho (-xi2 eta1^2 + xi1 eta1 eta2) / (2 |eta|^2)`,
///
/// with all derivatives of `F` by central differences.
pub fn remains_residual(kind: DensityKind, point: &EvalPoint) -> Result<[f64; 2]> {
    require_cone(kind, point)?;
    let (xi, eta) = (point.xi, point.eta);
    let hx = 1e-4 * xi.norm().max(1e-3);
    let he = 1e-4 * eta.norm();
    let unit = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
    let f = |x: Vec2, e: Vec2| big_f(x, e, kind);

    let d_xi = |a: usize| -> Result<f64> { Ok((f(xi + unit[a] * hx, eta)? - f(xi - unit[a] * hx, eta)?) / (2.0 * hx)) };
    let d_xi_eta = |a: usize, b: usize| -> Result<f64> {
        let (dx, de) = (unit[a] * hx, unit[b] * he);
        Ok(
            (f(xi + dx, eta + de)? - f(xi + dx, eta - de)? - f(xi - dx, eta + de)? + f(xi - dx, eta - de)?)
                / (4.0 * hx * he),
        )
    };

    let r = rho(xi, eta, kind)?;
    let e2 = eta.norm_sq();
    let (x1, x2, n1, n2) = (xi.x, xi.y, eta.x, eta.y);
    let lhs1 = d_xi(0)? - d_xi_eta(0, 0)? * n1 - d_xi_eta(1, 0)? * n2;
    let lhs2 = d_xi(1)? - d_xi_eta(0, 1)? * n1 - d_xi_eta(1, 1)? * n2;
    let rhs1 = r * (-x1 * n2 * n2 + x2 * n1 * n2) / (2.0 * e2);
    let rhs2 = r * (-x2 * n1 * n1 + x1 * n1 * n2) / (2.0 * e2);
    Ok([lhs1 - rhs1, lhs2 - rhs2])
}

/// Mismatch of the raw star density claimed for the residual equations:
/// `(eta2 (1/|xi|^2 + 1/2), -eta1 (1/|xi|^2 + 1/2))`.
pub fn remains_stated_mismatch(point: &EvalPoint) -> [f64; 2] {
    let k = 1.0 / point.xi.norm_sq() + 0.5;
    [point.eta.y * k, -point.eta.x * k]
}

/// Exact residual of [`remains_residual`] for every density kind:
/// zero for Huisken and corrected, `(eta2, -eta1)` for repaired and
/// `(eta2, -eta1)(1/2 - 1/|xi|^2)` for raw.
pub fn remains_closed_form(kind: DensityKind, point: &EvalPoint) -> [f64; 2] {
    let k = match kind {
        DensityKind::Huisken | DensityKind::Corrected => 0.0,
        DensityKind::Repaired => 1.0,
        DensityKind::Raw => 0.5 - 1.0 / point.xi.norm_sq(),
    };
    [point.eta.y * k, -point.eta.x * k]
}
