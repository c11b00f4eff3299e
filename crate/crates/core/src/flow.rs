//! Time integration of the physical and the self-similarly rescaled flow.
//!
//! Physical flow: `d/dt v = g(v') k N_in`, where `k N_in` is the curvature vector
//! `(v1' v2'' - v2' v1'') / |v'|^4 (-v2', v1')`. Rescaled flow about a singularity
//! at the origin at time `T`: `tau = -log(T - t)`, `w = (T - t)^{-1/2} v`, and
//! `d/dtau w = w / 2 + g(w') k N_in`. The full vectors are applied (tangential
//! parts included); only their normal parts carry geometric meaning.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::diff::periodic_derivatives_vec;
use crate::geometry::{resample_uniform_arclength, ClosedCurve, CurveGeometry, DiffScheme, DEGENERACY_REL};
use crate::{Error, Result, Vec2};

/// Positive weight `g` of the tangent direction, homogeneous of order 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Anisotropy {
    /// `g = 1`.
    #[default]
    Isotropic,
    /// `g(phi) = 1 + amplitude cos(frequency phi + phase)`, `|amplitude| < 1`.
    Harmonic { amplitude: f64, frequency: u32, phase: f64 },
}

impl Anisotropy {
    pub fn harmonic(amplitude: f64, frequency: u32, phase: f64) -> Result<Self> {
        if !(amplitude.abs() < 1.0) || !phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "harmonic anisotropy needs |amplitude| < 1, got {amplitude}"
            )));
        }
        Ok(Anisotropy::Harmonic {
            amplitude,
            frequency,
            phase,
        })
    }

    pub fn is_isotropic(&self) -> bool {
        match self {
            Anisotropy::Isotropic => true,
            Anisotropy::Harmonic { amplitude, .. } => *amplitude == 0.0,
        }
    }

    /// `g` as a function of the polar angle of the direction.
    pub fn at_angle(&self, phi: f64) -> f64 {
        match *self {
            Anisotropy::Isotropic => 1.0,
            Anisotropy::Harmonic {
                amplitude,
                frequency,
                phase,
            } => 1.0 + amplitude * (frequency as f64 * phi + phase).cos(),
        }
    }

    /// `g` of a nonzero direction vector.
    pub fn eval(&self, dir: Vec2) -> f64 {
        match self {
            Anisotropy::Isotropic => 1.0,
            _ => self.at_angle(dir.angle()),
        }
    }

    pub fn min(&self) -> f64 {
        match *self {
            Anisotropy::Isotropic => 1.0,
            Anisotropy::Harmonic { amplitude, .. } => 1.0 - amplitude.abs(),
        }
    }

    pub fn max(&self) -> f64 {
        match *self {
            Anisotropy::Isotropic => 1.0,
            Anisotropy::Harmonic { amplitude, .. } => 1.0 + amplitude.abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RhsKind {
    Physical,
    Rescaled,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeScheme {
    #[serde(alias = "euler")]
    ForwardEuler,
    #[default]
    Rk4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    /// `dt = cfl * (min chord)^2 / max g` when no fixed step is given.
    pub cfl: f64,
    /// Resample to uniform arclength every this many steps; 0 disables.
    pub resample_every: u64,
    pub scheme: TimeScheme,
    pub derivative: DiffScheme,
    /// Fixed time step overriding the CFL rule.
    pub dt: Option<f64>,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            cfl: 0.25,
            resample_every: 10,
            scheme: TimeScheme::Rk4,
            derivative: DiffScheme::Central2,
            dt: None,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "cfl must lie in (0, 0.5], got {}",
                self.cfl
            )));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
            }
        }
        Ok(())
    }
}

/// Physical and rescaled time of a run towards a blow-up at `blowup`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowClock {
    t: f64,
    blowup: f64,
}

impl FlowClock {
    pub fn new(t: f64, blowup: f64) -> Result<Self> {
        if !(t < blowup) {
            return Err(Error::BeyondBlowup { t, blowup });
        }
        Ok(Self { t, blowup })
    }

    /// Clock at rescaled time `tau`.
    pub fn at_tau(tau: f64, blowup: f64) -> Self {
        Self {
            t: blowup - (-tau).exp(),
            blowup,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn blowup(&self) -> f64 {
        self.blowup
    }

    pub fn tau(&self) -> f64 {
        -(self.blowup - self.t).ln()
    }

    /// Spatial factor `(T - t)^{-1/2}` from physical to rescaled coordinates.
    pub fn scale(&self) -> f64 {
        (self.blowup - self.t).powf(-0.5)
    }
}

fn degenerate_speed(d1: &[Vec2]) -> Result<()> {
    let n = d1.len();
    let h = TAU / n as f64;
    let length: f64 = d1.iter().map(|d| d.norm()).sum::<f64>() * h;
    let threshold = DEGENERACY_REL * length;
    match d1.iter().enumerate().find(|(_, d)| !(d.norm() * h > threshold)) {
        Some((node, d)) => Err(Error::DegenerateCurve {
            node,
            spacing: d.norm() * h,
            threshold,
        }),
        None => Ok(()),
    }
}

fn physical_rhs_nodes(nodes: &[Vec2], g: &Anisotropy, scheme: DiffScheme) -> Result<Vec<Vec2>> {
    let (d1, d2) = periodic_derivatives_vec(nodes, scheme);
    degenerate_speed(&d1)?;
    Ok(d1
        .iter()
        .zip(&d2)
        .map(|(a, b)| {
            let s2 = a.norm_sq();
            a.rot_ccw() * (g.eval(*a) * a.cross(*b) / (s2 * s2))
        })
        .collect())
}

fn rhs_nodes(nodes: &[Vec2], kind: RhsKind, g: &Anisotropy, scheme: DiffScheme) -> Result<Vec<Vec2>> {
    let mut out = physical_rhs_nodes(nodes, g, scheme)?;
    if kind == RhsKind::Rescaled {
        for (o, v) in out.iter_mut().zip(nodes) {
            *o += *v * 0.5;
        }
    }
    Ok(out)
}

/// `g(v') (v1' v2'' - v2' v1'') / |v'|^4 (-v2', v1')` at every node.
///
/// Its component along the outer normal is `-g k`; the curve moves inward where convex.
pub fn physical_rhs(curve: &ClosedCurve, g: &Anisotropy, scheme: DiffScheme) -> Result<Vec<Vec2>> {
    physical_rhs_nodes(curve.nodes(), g, scheme)
}

/// `v / 2 + physical_rhs` at every node.
pub fn rescaled_rhs(curve: &ClosedCurve, g: &Anisotropy, scheme: DiffScheme) -> Result<Vec<Vec2>> {
    rhs_nodes(curve.nodes(), RhsKind::Rescaled, g, scheme)
}

pub fn rhs(curve: &ClosedCurve, kind: RhsKind, g: &Anisotropy, scheme: DiffScheme) -> Result<Vec<Vec2>> {
    rhs_nodes(curve.nodes(), kind, g, scheme)
}

/// Normal velocity `d/dtau v . n` of the rescaled flow, from the geometry alone.
pub fn rescaled_normal_velocity(geom: &CurveGeometry, g: &Anisotropy) -> Vec<f64> {
    geom.positions()
        .iter()
        .zip(geom.normal())
        .zip(geom.curvature())
        .zip(geom.d1())
        .map(|(((v, n), k), d)| 0.5 * v.dot(*n) - g.eval(*d) * k)
        .collect()
}

/// Explicit step size `cfl * (min chord)^2 / max g`.
pub fn stable_dt(curve: &ClosedCurve, g: &Anisotropy, config: &FlowConfig) -> f64 {
    // Scale the CFL number so the step stays inside the stability region of the
    // chosen stencil at the documented default.
    let stencil = config.derivative.second_derivative_radius() / 4.0;
    config.cfl * curve.min_chord().powi(2) / (g.max() * stencil)
}

fn axpy(base: &[Vec2], k: &[Vec2], a: f64) -> Vec<Vec2> {
    base.iter().zip(k).map(|(b, k)| *b + *k * a).collect()
}

fn advance(nodes: &[Vec2], kind: RhsKind, g: &Anisotropy, config: &FlowConfig, dt: f64) -> Result<Vec<Vec2>> {
    let f = |x: &[Vec2]| rhs_nodes(x, kind, g, config.derivative);
    match config.scheme {
        TimeScheme::ForwardEuler => {
            let k1 = f(nodes)?;
            Ok(axpy(nodes, &k1, dt))
        }
        TimeScheme::Rk4 => {
            let k1 = f(nodes)?;
            let k2 = f(&axpy(nodes, &k1, 0.5 * dt))?;
            let k3 = f(&axpy(nodes, &k2, 0.5 * dt))?;
            let k4 = f(&axpy(nodes, &k3, dt))?;
            Ok(nodes
                .iter()
                .enumerate()
                .map(|(j, v)| *v + (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (dt / 6.0))
                .collect())
        }
    }
}

/// One step without resampling. `dt = None` uses [`stable_dt`].
pub fn step(
    curve: &ClosedCurve,
    kind: RhsKind,
    g: &Anisotropy,
    config: &FlowConfig,
    dt: Option<f64>,
) -> Result<ClosedCurve> {
    let dt = dt.or(config.dt).unwrap_or_else(|| stable_dt(curve, g, config));
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("dt must be non-negative, got {dt}")));
    }
    let next = advance(curve.nodes(), kind, g, config, dt)?;
    degenerate_speed(&periodic_derivatives_vec(&next, config.derivative).0)?;
    ClosedCurve::new(next)
}

/// Stepper that applies the configured resampling cadence.
#[derive(Clone, Debug)]
pub struct Integrator {
    kind: RhsKind,
    g: Anisotropy,
    config: FlowConfig,
    steps: u64,
}

impl Integrator {
    pub fn new(kind: RhsKind, g: Anisotropy, config: FlowConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            kind,
            g,
            config,
            steps: 0,
        })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn config(&self) -> &FlowConfig {
        &self.config
    }

    pub fn next_dt(&self, curve: &ClosedCurve) -> f64 {
        self.config
            .dt
            .unwrap_or_else(|| stable_dt(curve, &self.g, &self.config))
    }

    pub fn step(&mut self, curve: &ClosedCurve, dt: f64) -> Result<ClosedCurve> {
        let mut next = step(curve, self.kind, &self.g, &self.config, Some(dt))?;
        self.steps += 1;
        let every = self.config.resample_every;
        if every > 0 && self.steps.is_multiple_of(every) {
            next = resample_uniform_arclength(&next)?;
        }
        Ok(next)
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub index: usize,
    pub step: u64,
    /// Physical time for physical runs, rescaled time for rescaled runs,
    /// measured from the start of the run.
    pub time: f64,
    pub curve: ClosedCurve,
}

/// Why a run stopped before its horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct Singularity {
    pub time: f64,
    pub step: u64,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub kind: RhsKind,
    pub samples: Vec<Sample>,
    pub singularity: Option<Singularity>,
    pub steps: u64,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }
}

/// Runs stop with a singularity once the step falls below this fraction of the horizon.
pub const MIN_DT_REL: f64 = 1e-12;

/// Integrates from `initial` up to `horizon`, recording every `observer_stride`-th step
/// plus the final state. Numerical failure ends the run early with `singularity` set.
pub fn run(
    initial: &ClosedCurve,
    kind: RhsKind,
    g: &Anisotropy,
    config: &FlowConfig,
    horizon: f64,
    observer_stride: u64,
) -> Result<Trajectory> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if observer_stride == 0 {
        return Err(Error::InvalidParameter("observer stride must be at least 1".into()));
    }
    let mut integrator = Integrator::new(kind, g.clone(), config.clone())?;
    let mut samples = vec![Sample {
        index: 0,
        step: 0,
        time: 0.0,
        curve: initial.clone(),
    }];
    let mut curve = initial.clone();
    let mut t = 0.0;
    let mut singularity = None;
    let mut recorded_last = true;

    loop {
        let nominal = integrator.next_dt(&curve);
        if nominal < MIN_DT_REL * horizon {
            let (node, chord) = curve.min_chord_node();
            singularity = Some(Singularity {
                time: t,
                step: integrator.steps(),
                message: format!("time step collapsed to {nominal:e}; shortest chord {chord:e} at node {node}"),
            });
            break;
        }
        let remaining = horizon - t;
        if remaining <= 1e-6 * nominal {
            break;
        }
        let dt = nominal.min(remaining);
        match integrator.step(&curve, dt) {
            Ok(next) => curve = next,
            Err(e) => {
                singularity = Some(Singularity {
                    time: t,
                    step: integrator.steps(),
                    message: e.to_string(),
                });
                break;
            }
        }
        t += dt;
        recorded_last = false;
        if integrator.steps() % observer_stride == 0 {
            samples.push(Sample {
                index: samples.len(),
                step: integrator.steps(),
                time: t,
                curve: curve.clone(),
            });
            recorded_last = true;
        }
    }
    if !recorded_last {
        samples.push(Sample {
            index: samples.len(),
            step: integrator.steps(),
            time: t,
            curve,
        });
    }
    Ok(Trajectory {
        kind,
        samples,
        singularity,
        steps: integrator.steps(),
    })
}

/// Blow-up time `T = A / (2 pi)` of the isotropic flow, from the area law `dA/dt = -2 pi`.
pub fn estimate_blowup_time(curve: &ClosedCurve, g: &Anisotropy) -> Result<f64> {
    if !g.is_isotropic() {
        return Err(Error::UnsupportedAnisotropy);
    }
    Ok(curve.enclosed_area() / TAU)
}

/// Scales a physical curve at time `t` by `(T - t)^{-1/2}`; returns it with `tau = -log(T - t)`.
pub fn to_rescaled(curve: &ClosedCurve, t: f64, blowup: f64) -> Result<(ClosedCurve, f64)> {
    let clock = FlowClock::new(t, blowup)?;
    Ok((curve.scaled(clock.scale())?, clock.tau()))
}

/// Inverse of [`to_rescaled`]: physical curve and time for rescaled data at `tau`.
pub fn to_physical(curve: &ClosedCurve, tau: f64, blowup: f64) -> Result<(ClosedCurve, f64)> {
    let clock = FlowClock::at_tau(tau, blowup);
    Ok((curve.scaled(clock.scale().recip())?, clock.t()))
}

/// Rescales an isotropic initial curve about its own estimated blow-up time,
/// so the result has enclosed area `2 pi` at `tau = -log T`.
pub fn normalize_for_rescaled(curve: &ClosedCurve, g: &Anisotropy) -> Result<ClosedCurve> {
    let blowup = estimate_blowup_time(curve, g)?;
    Ok(to_rescaled(curve, 0.0, blowup)?.0)
}
