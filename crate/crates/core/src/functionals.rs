//! Monotonicity densities, functionals, dissipations and their discrete identities.
//!
//! All functionals are integrals over the parameter circle `x in [0, 2 pi)`
//! evaluated by the trapezoid rule on the node grid. The rescaled normal velocity
//! is `V = <v, n>/2 - g k` (outer normal `n`), computed from the spatial data of a
//! single sample so it does not depend on the parametrization.
//!
//! Star densities use the angle `psi` between the position `xi` and the outer normal
//! `eta_nu = (eta_2, -eta_1)`, and read `|eta|/|xi| f(psi) + a(|xi|) |eta| cos psi`
//! with one of three gauges `a`:
//! - raw: `a = 0`;
//! - repaired: `a(r) = r/4 + log(r)/r`;
//! - corrected: `a(r) = log(r)/r - r/4`.
//!
//! The repaired functional satisfies `dF/dtau + D = dA/dtau` (`A` the enclosed
//! area), so it is exactly dissipative only along rescaled flows with `A = 2 pi`,
//! which holds when the rescaling uses the true blow-up time. The corrected gauge
//! differs from it by `-A` and satisfies `dF/dtau + D = 0` unconditionally.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::flow::{Anisotropy, Sample, Trajectory};
use crate::geometry::diff::periodic_integral;
use crate::geometry::{ClosedCurve, CurveGeometry, DiffScheme};
use crate::{Error, Result, Vec2};

/// Default star-shape margin on `cos psi` (keeps `1/cos psi <= 20`).
pub const STAR_MARGIN: f64 = 0.05;

/// Largest `|psi|` accepted by the profile.
pub const PROFILE_LIMIT: f64 = FRAC_PI_2 - 1e-9;

fn check_profile_domain(psi: f64) -> Result<()> {
    if psi.abs() < PROFILE_LIMIT {
        Ok(())
    } else {
        Err(Error::ProfileDomain(psi))
    }
}

/// `f(psi) = psi sin psi + cos psi log(cos psi)` on `(-pi/2, pi/2)`.
pub fn f_profile(psi: f64) -> Result<f64> {
    check_profile_domain(psi)?;
    let c = psi.cos();
    Ok(psi * psi.sin() + c * c.ln())
}

/// `f'(psi) = psi cos psi - sin psi log(cos psi)`.
pub fn f_prime(psi: f64) -> Result<f64> {
    check_profile_domain(psi)?;
    let c = psi.cos();
    Ok(psi * c - psi.sin() * c.ln())
}

/// `f''(psi) = 1/cos psi - f(psi)`.
pub fn f_second(psi: f64) -> Result<f64> {
    Ok(psi.cos().recip() - f_profile(psi)?)
}

/// Samples `(psi, f, f', f'')` on `points` equispaced angles in `[-limit, limit]`.
pub fn profile_table(points: usize, limit: f64) -> Result<Vec<[f64; 4]>> {
    if points < 2 {
        return Err(Error::GridTooCoarse { got: points, min: 2 });
    }
    check_profile_domain(limit)?;
    (0..points)
        .map(|i| {
            let psi = -limit + 2.0 * limit * i as f64 / (points - 1) as f64;
            Ok([psi, f_profile(psi)?, f_prime(psi)?, f_second(psi)?])
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    /// `F = rho = exp(-|xi|^2/4) |eta|`.
    Huisken,
    /// Star density without gauge term.
    Raw,
    /// Star density with gauge `r/4 + log(r)/r`.
    Repaired,
    /// Star density with gauge `log(r)/r - r/4`.
    Corrected,
}

impl DensityKind {
    pub const ALL: [DensityKind; 4] = [
        DensityKind::Huisken,
        DensityKind::Raw,
        DensityKind::Repaired,
        DensityKind::Corrected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DensityKind::Huisken => "huisken",
            DensityKind::Raw => "raw",
            DensityKind::Repaired => "repaired",
            DensityKind::Corrected => "corrected",
        }
    }

    pub fn is_star(self) -> bool {
        self != DensityKind::Huisken
    }

    /// Gauge coefficient `a(r)` of the `|eta| cos psi` term.
    pub fn gauge(self, r: f64) -> f64 {
        match self {
            DensityKind::Huisken | DensityKind::Raw => 0.0,
            DensityKind::Repaired => 0.25 * r + r.ln() / r,
            DensityKind::Corrected => r.ln() / r - 0.25 * r,
        }
    }
}

impl std::fmt::Display for DensityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `exp(-|xi|^2/4) |eta|`.
pub fn huisken_density(xi: Vec2, eta: Vec2) -> f64 {
    (-0.25 * xi.norm_sq()).exp() * eta.norm()
}

/// `<xi, eta_nu>` with `eta_nu = eta` rotated clockwise; errors outside the open cone.
pub fn cone_dot(xi: Vec2, eta: Vec2) -> Result<f64> {
    let dot = xi.dot(eta.rot_cw());
    if dot > 0.0 {
        Ok(dot)
    } else {
        Err(Error::ConeViolation { dot })
    }
}

/// Pointwise density `F(xi, eta)`.
pub fn big_f(xi: Vec2, eta: Vec2, kind: DensityKind) -> Result<f64> {
    if kind == DensityKind::Huisken {
        return Ok(huisken_density(xi, eta));
    }
    let dot = cone_dot(xi, eta)?;
    let (r, e) = (xi.norm(), eta.norm());
    let cos_psi = (dot / (r * e)).min(1.0);
    let psi = cos_psi.acos();
    Ok(e / r * f_profile(psi)? + kind.gauge(r) * e * cos_psi)
}

/// Pointwise weight `rho(xi, eta)`: Huisken's density, or `|eta|^2 / <xi, eta_nu>`.
pub fn rho(xi: Vec2, eta: Vec2, kind: DensityKind) -> Result<f64> {
    if kind == DensityKind::Huisken {
        return Ok(huisken_density(xi, eta));
    }
    Ok(eta.norm_sq() / cone_dot(xi, eta)?)
}

/// Velocity `d/dtau v = v/2 - g k n` of the rescaled flow, from geometry.
fn tau_velocity(geom: &CurveGeometry, g: &Anisotropy) -> Vec<Vec2> {
    geom.positions()
        .iter()
        .zip(geom.normal())
        .zip(geom.curvature())
        .zip(geom.d1())
        .map(|(((v, n), k), d)| *v * 0.5 - *n * (g.eval(*d) * k))
        .collect()
}

/// `V = <v, n>/2 - g k` at every node.
pub fn normal_velocity(geom: &CurveGeometry, g: &Anisotropy) -> Vec<f64> {
    crate::flow::rescaled_normal_velocity(geom, g)
}

/// Value of the functional `int F(v, v') dx` of the given kind.
///
/// Star kinds require `cos psi >= STAR_MARGIN` everywhere.
pub fn functional_value(geom: &CurveGeometry, kind: DensityKind) -> Result<f64> {
    let speed = geom.speed();
    let radius = geom.radius();
    if kind == DensityKind::Huisken {
        return Ok(periodic_integral(
            radius.iter().zip(speed).map(|(r, s)| (-0.25 * r * r).exp() * s),
        ));
    }
    let cos_psi = geom.require_star_shaped(STAR_MARGIN)?;
    let psi = geom.psi()?;
    let mut terms = Vec::with_capacity(geom.len());
    for j in 0..geom.len() {
        let (s, r, c) = (speed[j], radius[j], cos_psi[j]);
        terms.push(s / r * f_profile(psi[j])? + kind.gauge(r) * s * c);
    }
    Ok(periodic_integral(terms))
}

/// Huisken's functional `int exp(-|v|^2/4) |v'| dx`.
pub fn huisken_value(geom: &CurveGeometry) -> f64 {
    functional_value(geom, DensityKind::Huisken).expect("Huisken functional is total")
}

/// `int |v'|/|v| ( f(psi) + (log(|v|^2)/2 + |v|^2/4) cos psi ) dx`.
pub fn star_value(geom: &CurveGeometry) -> Result<f64> {
    functional_value(geom, DensityKind::Repaired)
}

/// Dissipation `int V^2 rho(v, v') dx` for the weight of the given kind.
pub fn dissipation(geom: &CurveGeometry, kind: DensityKind, g: &Anisotropy) -> Result<f64> {
    let v = normal_velocity(geom, g);
    let speed = geom.speed();
    let radius = geom.radius();
    if kind == DensityKind::Huisken {
        return Ok(periodic_integral(
            (0..geom.len()).map(|j| v[j] * v[j] * (-0.25 * radius[j] * radius[j]).exp() * speed[j]),
        ));
    }
    let cos_psi = geom.require_star_shaped(STAR_MARGIN)?;
    Ok(periodic_integral(
        (0..geom.len()).map(|j| v[j] * v[j] * speed[j] / (radius[j] * cos_psi[j])),
    ))
}

pub fn huisken_dissipation(geom: &CurveGeometry, g: &Anisotropy) -> f64 {
    dissipation(geom, DensityKind::Huisken, g).expect("Huisken dissipation is total")
}

/// `int |d/dtau v . nu|^2 |v'|/|v| / cos psi dx`.
pub fn star_dissipation(geom: &CurveGeometry, g: &Anisotropy) -> Result<f64> {
    dissipation(geom, DensityKind::Repaired, g)
}

/// `int (v2' d/dtau v1 - v1' d/dtau v2) (1/2 + 1/|v|^2) dx`.
pub fn extra_term(geom: &CurveGeometry, g: &Anisotropy) -> Result<f64> {
    geom.cos_psi()?;
    let vel = tau_velocity(geom, g);
    Ok(periodic_integral((0..geom.len()).map(|j| {
        let flux = geom.d1()[j].rot_cw().dot(vel[j]);
        flux * (0.5 + 1.0 / (geom.radius()[j] * geom.radius()[j]))
    })))
}

/// `int (v2' d/dtau v1 - v1' d/dtau v2) dx`, the rate of change of the enclosed area.
pub fn area_rate(geom: &CurveGeometry, g: &Anisotropy) -> f64 {
    let vel = tau_velocity(geom, g);
    periodic_integral((0..geom.len()).map(|j| geom.d1()[j].rot_cw().dot(vel[j])))
}

/// One row of a functional report at a trajectory sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FunctionalReport {
    pub tau: f64,
    pub kind: DensityKind,
    pub value: f64,
    pub dissipation: f64,
    /// Only nonzero for [`DensityKind::Raw`].
    pub extra_term: f64,
    /// `dF/dtau + D (+ extra_term)` with `dF/dtau` by centered differences.
    pub residual: f64,
}

/// Three-point derivative at the middle of a possibly nonuniform stencil.
pub fn centered_derivative(t: [f64; 3], f: [f64; 3]) -> f64 {
    let h1 = t[1] - t[0];
    let h2 = t[2] - t[1];
    -h2 / (h1 * (h1 + h2)) * f[0] + (h2 - h1) / (h1 * h2) * f[1] + h1 / (h2 * (h1 + h2)) * f[2]
}

/// Identity residual at the middle of three consecutive rescaled samples `(tau, curve)`.
pub fn identity_report(
    samples: [(f64, &ClosedCurve); 3],
    kind: DensityKind,
    g: &Anisotropy,
    scheme: DiffScheme,
) -> Result<FunctionalReport> {
    if kind.is_star() && !g.is_isotropic() {
        return Err(Error::UnsupportedAnisotropy);
    }
    let mut values = [0.0; 3];
    let mut mid = None;
    for (i, (_, curve)) in samples.iter().enumerate() {
        let geom = CurveGeometry::new(curve, scheme)?;
        values[i] = functional_value(&geom, kind)?;
        if i == 1 {
            mid = Some(geom);
        }
    }
    let geom = mid.expect("middle sample evaluated");
    let taus = [samples[0].0, samples[1].0, samples[2].0];
    let rate = centered_derivative(taus, values);
    let d = dissipation(&geom, kind, g)?;
    let extra = if kind == DensityKind::Raw {
        extra_term(&geom, g)?
    } else {
        0.0
    };
    Ok(FunctionalReport {
        tau: taus[1],
        kind,
        value: values[1],
        dissipation: d,
        extra_term: extra,
        residual: rate + d + extra,
    })
}

fn triple(s: &[Sample], i: usize) -> [(f64, &ClosedCurve); 3] {
    [
        (s[i - 1].time, &s[i - 1].curve),
        (s[i].time, &s[i].curve),
        (s[i + 1].time, &s[i + 1].curve),
    ]
}

/// Identity with the f-only density and the extra term on the right-hand side.
pub fn raw_star_identity(
    samples: [(f64, &ClosedCurve); 3],
    g: &Anisotropy,
    scheme: DiffScheme,
) -> Result<FunctionalReport> {
    identity_report(samples, DensityKind::Raw, g, scheme)
}

/// Identity with the gauge `r/4 + log(r)/r`; residual is `dF/dtau + D`.
pub fn repaired_star_identity(
    samples: [(f64, &ClosedCurve); 3],
    g: &Anisotropy,
    scheme: DiffScheme,
) -> Result<FunctionalReport> {
    identity_report(samples, DensityKind::Repaired, g, scheme)
}

pub fn huisken_identity(
    samples: [(f64, &ClosedCurve); 3],
    g: &Anisotropy,
    scheme: DiffScheme,
) -> Result<FunctionalReport> {
    identity_report(samples, DensityKind::Huisken, g, scheme)
}

/// Reports at every interior sample of a rescaled trajectory.
pub fn identity_series(
    traj: &Trajectory,
    kind: DensityKind,
    g: &Anisotropy,
    scheme: DiffScheme,
) -> Result<Vec<FunctionalReport>> {
    let s = &traj.samples;
    (1..s.len().saturating_sub(1))
        .map(|i| identity_report(triple(s, i), kind, g, scheme))
        .collect()
}

/// Functional values at every sample.
pub fn value_series(traj: &Trajectory, kind: DensityKind, scheme: DiffScheme) -> Result<Vec<(f64, f64)>> {
    traj.samples
        .iter()
        .map(|s| {
            let geom = CurveGeometry::new(&s.curve, scheme)?;
            Ok((s.time, functional_value(&geom, kind)?))
        })
        .collect()
}

/// Largest relative increase `max (F_{i+1} - F_i) / |F_i|` over consecutive values.
pub fn max_relative_increase(values: &[(f64, f64)]) -> f64 {
    values
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / w[0].1.abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    fn circle(r: f64, n: usize) -> CurveGeometry {
        let c = ClosedCurve::circle(r, Vec2::ZERO, n).unwrap();
        CurveGeometry::new(&c, DiffScheme::Spectral).unwrap()
    }

    #[test]
    fn profile_values() {
        assert_eq!(f_profile(0.0).unwrap(), 0.0);
        assert!((f_profile(FRAC_PI_4).unwrap() - 0.31029).abs() < 1e-4);
        assert!((f_profile(1.5).unwrap() - 1.30886).abs() < 1e-4);
        assert_eq!(f_profile(-1.5).unwrap(), f_profile(1.5).unwrap());
        assert!(matches!(f_profile(FRAC_PI_2), Err(Error::ProfileDomain(_))));
        assert!(f_profile(-PROFILE_LIMIT).is_err());
    }

    #[test]
    fn profile_derivative_matches_difference_quotient() {
        for psi in [-1.3, -0.4, 0.2, 1.1] {
            let h = 1e-6;
            let fd = (f_profile(psi + h).unwrap() - f_profile(psi - h).unwrap()) / (2.0 * h);
            assert!((fd - f_prime(psi).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn profile_ode_by_central_differences() {
        let h = 1e-4;
        let mut worst: f64 = 0.0;
        for i in 0..=280 {
            let psi = -1.4 + 0.01 * i as f64;
            let fpp =
                (f_profile(psi + h).unwrap() - 2.0 * f_profile(psi).unwrap() + f_profile(psi - h).unwrap()) / (h * h);
            worst = worst.max((fpp + f_profile(psi).unwrap() - 1.0 / psi.cos()).abs());
        }
        assert!(worst <= 1e-6, "{worst}");
    }

    #[test]
    fn huisken_value_on_stationary_circle() {
        let v = huisken_value(&circle(SQRT_2, 256));
        let exact = 2.0 * SQRT_2 * PI * (-0.5f64).exp();
        assert!((v - exact).abs() < 1e-6);
        assert!((exact - 5.389489).abs() < 1e-6);
    }

    #[test]
    fn huisken_density_is_one_homogeneous() {
        let (xi, eta) = (Vec2::new(0.3, -1.2), Vec2::new(0.7, 0.4));
        assert!((huisken_density(xi, eta * 3.0) - 3.0 * huisken_density(xi, eta)).abs() < 1e-14);
    }

    #[test]
    fn star_value_on_circles() {
        let v = star_value(&circle(SQRT_2, 256)).unwrap();
        assert!((v - PI * (1.0 + 2f64.ln())).abs() < 1e-6);
        assert!((v - 5.319179).abs() < 1e-6);
        let v = star_value(&circle(1.0, 256)).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-6);
        let off = ClosedCurve::circle(1.0, Vec2::new(2.0, 0.0), 128).unwrap();
        let geom = CurveGeometry::new(&off, DiffScheme::Central2).unwrap();
        assert!(matches!(star_value(&geom), Err(Error::NotStarShaped { .. })));
    }

    #[test]
    fn star_dissipation_on_circles() {
        let iso = Anisotropy::Isotropic;
        assert!(star_dissipation(&circle(SQRT_2, 256), &iso).unwrap() <= 1e-6);
        let d = star_dissipation(&circle(1.0, 256), &iso).unwrap();
        assert!((d - PI / 2.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn extra_term_on_unit_circle() {
        // V = 1/2 - 1, |v'| = 1: integrand (-1/2)(1/2 + 1)
        let e = extra_term(&circle(1.0, 256), &Anisotropy::Isotropic).unwrap();
        assert!((e + 1.5 * PI).abs() < 1e-5, "{e}");
    }

    #[test]
    fn pointwise_densities() {
        let xi = Vec2::new(SQRT_2, 0.0);
        let eta = Vec2::new(0.0, SQRT_2);
        let f = big_f(xi, eta, DensityKind::Repaired).unwrap();
        assert!((f - (0.5 + 0.5 * 2f64.ln())).abs() < 1e-12);
        assert!((f - 0.84657).abs() < 1e-5);

        let (xi, eta) = (Vec2::new(1.2, 0.3), Vec2::new(-0.3, 1.2));
        let r1 = rho(xi, eta, DensityKind::Repaired).unwrap();
        let r2 = rho(xi, eta * 2.5, DensityKind::Repaired).unwrap();
        assert!((r2 - 2.5 * r1).abs() < 1e-12);

        let err = big_f(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), DensityKind::Repaired);
        assert!(matches!(err, Err(Error::ConeViolation { .. })));
    }

    #[test]
    fn gauge_difference_is_exact() {
        let (xi, eta) = (Vec2::new(0.8, -1.1), Vec2::new(1.3, 0.6));
        let r = xi.norm();
        let cos_psi = cone_dot(xi, eta).unwrap() / (r * eta.norm());
        let diff = big_f(xi, eta, DensityKind::Repaired).unwrap() - big_f(xi, eta, DensityKind::Raw).unwrap();
        let expected = eta.norm() * (r / 4.0 + r.ln() / r) * cos_psi;
        assert!((diff - expected).abs() < 1e-12);
    }

    #[test]
    fn centered_derivative_is_exact_on_quadratics() {
        let f = |t: f64| 3.0 * t * t - t + 2.0;
        let t = [0.1, 0.25, 0.32];
        let d = centered_derivative(t, [f(t[0]), f(t[1]), f(t[2])]);
        assert!((d - (6.0 * 0.25 - 1.0)).abs() < 1e-12);
    }
}
