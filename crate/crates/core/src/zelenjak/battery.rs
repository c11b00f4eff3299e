//! Seeded random-point batteries over all pointwise identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::characteristics::{characteristics_integrate, CharState};
use super::checks::*;
use super::fields::{ExpOfTilde, HuiskenC, HuiskenWeight, LogWeight, StarC};
use super::{to_tilde, EvalPoint};
use crate::flow::Anisotropy;
use crate::functionals::{f_profile, DensityKind};
use crate::{Result, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Reported, not judged.
    Info,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "true",
            CheckStatus::Fail => "false",
            CheckStatus::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
}

impl CheckResult {
    fn judged(name: &str, points: usize, max_residual: f64, tolerance: f64) -> Self {
        let status = if max_residual <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name: name.to_string(),
            points,
            max_residual,
            tolerance,
            status,
        }
    }

    fn info(name: &str, points: usize, max_residual: f64) -> Self {
        Self {
            name: name.to_string(),
            points,
            max_residual,
            tolerance: f64::NAN,
            status: CheckStatus::Info,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// Random points with `|xi| in [0.5, 2.5]`, `|eta| in [0.5, 2]` and the angle between
/// `xi` and `eta_nu` at most 1.2 rad, so `cos psi >= 0.36`.
pub fn random_cone_points(rng: &mut impl Rng, n: usize) -> Vec<EvalPoint> {
    (0..n)
        .map(|_| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let xi = Vec2::from_polar(rng.gen_range(0.5..2.5), theta);
            let psi: f64 = rng.gen_range(-1.2..1.2);
            let normal = Vec2::from_polar(1.0, theta + psi);
            let eta = normal.rot_ccw() * rng.gen_range(0.5..2.0);
            EvalPoint { xi, eta }
        })
        .collect()
}

fn max_over<T>(items: &[T], f: impl Fn(&T) -> Result<f64>) -> Result<f64> {
    items.iter().try_fold(0.0f64, |m, it| Ok(m.max(f(it)?.abs())))
}

fn max2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}

/// Runs every derivation check on `points` seeded random cone points.
pub fn verify_identities(seed: u64, points: usize) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = random_cone_points(&mut rng, points);
    let iso = Anisotropy::Isotropic;
    let n = pts.len();
    let mut out = Vec::new();

    // coordinates
    out.push(CheckResult::judged(
        "tilde_norm",
        n,
        max_over(&pts, |p| Ok(to_tilde(p).xi_norm_sq() - p.xi.norm_sq()))?,
        1e-12,
    ));
    out.push(CheckResult::judged(
        "tilde_cos_psi",
        n,
        max_over(&pts, |p| {
            let cos_psi = p.cone_dot() / (p.xi.norm() * p.eta.norm());
            Ok(to_tilde(p).xi2 / p.xi.norm() - cos_psi)
        })?,
        1e-12,
    ));

    // first-order PDE for b
    for (name, mode, tol) in [
        ("pde_huisken_analytic", GradientMode::Analytic, 1e-12),
        ("pde_huisken_fd", GradientMode::FiniteDifference, 1e-6),
    ] {
        let r = max_over(&pts, |p| pde_residual(&HuiskenWeight, to_tilde(p), &iso, mode))?;
        out.push(CheckResult::judged(name, n, r, tol));
    }
    for (name, mode, tol) in [
        ("pde_log_analytic", GradientMode::Analytic, 1e-12),
        ("pde_log_fd", GradientMode::FiniteDifference, 1e-6),
    ] {
        let r = max_over(&pts, |p| pde_residual(&LogWeight, to_tilde(p), &iso, mode))?;
        out.push(CheckResult::judged(name, n, r, tol));
    }

    // compatibility equation for c
    out.push(CheckResult::judged(
        "main_c_huisken",
        n,
        max_over(&pts, |p| main_c_residual(&HuiskenC, p, &iso, GradientMode::Analytic))?,
        1e-10,
    ));
    out.push(CheckResult::judged(
        "main_c_star_analytic",
        n,
        max_over(&pts, |p| main_c_residual(&StarC, p, &iso, GradientMode::Analytic))?,
        1e-10,
    ));
    out.push(CheckResult::judged(
        "main_c_star_fd",
        n,
        max_over(&pts, |p| {
            main_c_residual(&StarC, p, &iso, GradientMode::FiniteDifference)
        })?,
        1e-6,
    ));
    let consistency = max_over(&pts, |p| {
        let a = main_c_residual(&ExpOfTilde(HuiskenWeight), p, &iso, GradientMode::FiniteDifference)?;
        let b = main_c_residual(&ExpOfTilde(LogWeight), p, &iso, GradientMode::FiniteDifference)?;
        Ok(a.abs().max(b.abs()))
    })?;
    out.push(CheckResult::judged("main_c_from_tilde_b", n, consistency, 1e-6));

    // Hessian constraint
    for kind in [DensityKind::Huisken, DensityKind::Raw, DensityKind::Repaired] {
        let r = max_over(&pts, |p| hessian_identity_check(kind, p, &iso))?;
        out.push(CheckResult::judged(&format!("hessian_{kind}"), n, r, 1e-5));
    }

    // residual equations
    let zero = [0.0, 0.0];
    for kind in [DensityKind::Huisken, DensityKind::Repaired] {
        let r = max_over(&pts, |p| Ok(max2(remains_residual(kind, p)?, zero)))?;
        out.push(CheckResult::judged(&format!("remains_{kind}_zero"), n, r, 1e-5));
    }
    let r = max_over(&pts, |p| {
        Ok(max2(remains_residual(DensityKind::Raw, p)?, remains_stated_mismatch(p)))
    })?;
    out.push(CheckResult::judged("remains_raw_stated_mismatch", n, r, 1e-5));
    for kind in [DensityKind::Raw, DensityKind::Repaired, DensityKind::Corrected] {
        let r = max_over(&pts, |p| {
            Ok(max2(remains_residual(kind, p)?, remains_closed_form(kind, p)))
        })?;
        out.push(CheckResult::info(&format!("remains_{kind}_closed_form"), n, r));
    }

    // gauge ODE
    let radii: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..5.0)).collect();
    let repaired = |r: f64| r / 4.0 + r.ln() / r;
    let with_homogeneous = |r: f64| r / 4.0 + r.ln() / r + 1.0 / r;
    let corrected = |r: f64| r.ln() / r - r / 4.0;
    out.push(CheckResult::judged(
        "gauge_ode_repaired",
        n,
        max_over(&radii, |&r| gauge_ode_residual(&repaired, r))?,
        1e-9,
    ));
    out.push(CheckResult::judged(
        "gauge_ode_homogeneous",
        n,
        max_over(&radii, |&r| gauge_ode_residual(&with_homogeneous, r))?,
        1e-9,
    ));
    out.push(CheckResult::info(
        "gauge_ode_corrected",
        n,
        max_over(&radii, |&r| corrected_gauge_ode_residual(&corrected, r))?,
    ));

    // profile ODE through the convolution formula
    let m = 28_001;
    let grid: Vec<f64> = (0..m).map(|i| -1.4 + 2.8 * i as f64 / (m - 1) as f64).collect();
    let h = |s: f64| 1.0 / s.cos();
    let f = solve_f_ode(h, 0.0, 0.0, &grid)?;
    let d = grid[1] - grid[0];
    let ode = (1..m - 1)
        .map(|i| ((f[i + 1] - 2.0 * f[i] + f[i - 1]) / (d * d) + f[i] - h(grid[i])).abs())
        .fold(0.0, f64::max);
    out.push(CheckResult::judged("f_ode_residual", m - 2, ode, 1e-6));
    let profile = grid
        .iter()
        .zip(&f)
        .map(|(&p, &v)| Ok((v - f_profile(p)?).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(CheckResult::judged("f_ode_matches_profile", m, profile, 1e-9));

    // orthogonality constraints
    let xis: Vec<Vec2> = pts.iter().map(|p| p.xi).collect();
    let gauss = |xi: Vec2, _phi: f64| (-0.25 * xi.norm_sq()).exp();
    let g2 = Anisotropy::Harmonic {
        amplitude: 0.3,
        frequency: 2,
        phase: 0.0,
    };
    for (name, g) in [("orthogonality_huisken", &iso), ("orthogonality_huisken_g2", &g2)] {
        let r = max_over(&xis, |&xi| {
            let (a, b) = orthogonality_check(&gauss, g, xi, 256);
            Ok(a.abs().max(b.abs()))
        })?;
        out.push(CheckResult::judged(name, n, r, 1e-12));
    }
    let star = |xi: Vec2, phi: f64| 1.0 / xi.dot(Vec2::new(phi.sin(), -phi.cos()));
    let r = max_over(&xis, |&xi| {
        let (a, b) = orthogonality_check_arc(&star, &iso, xi, 4096);
        Ok(a.abs().max(b.abs()))
    })?;
    out.push(CheckResult::info("orthogonality_star_arc", n, r));

    // characteristics on the Gaussian solution
    let init_count = n.clamp(1, 20);
    let mut worst: f64 = 0.0;
    for _ in 0..init_count {
        let (x1, x2, phi) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.0..6.0),
        );
        let init = CharState::new(x1, x2, phi, -(x1 * x1 + x2 * x2) / 4.0);
        for p in characteristics_integrate(&iso, init, 2.0, 1e-3)? {
            worst = worst.max((p.b + (p.xi1 * p.xi1 + p.xi2 * p.xi2) / 4.0).abs());
        }
    }
    out.push(CheckResult::judged("characteristics_huisken", init_count, worst, 1e-6));

    Ok(out)
}
