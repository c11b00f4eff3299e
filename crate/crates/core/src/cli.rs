//! Command-line front end.
//!
//! Every run is described by a [`RunConfig`]. It is built from defaults, an
//! optional JSON file given with `--config`, and command-line flags, in that
//! order. The resolved configuration is echoed as `config.json` in the output
//! directory, and feeding that file back through `--config` reproduces the run.
//!
//! Output directory precedence: `--out`, then `STARFLOW_OUT`, then the `out`
//! field of the config file, then `starflow_out`.
//!
//! Runs default to fourth-order stencils; `--deriv central2` selects the
//! library default.
//!
//! Exit codes: 0 on success, 2 on validation failure, 3 on numerical failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::flow::{
    estimate_blowup_time, normalize_for_rescaled, run, Anisotropy, FlowConfig, RhsKind, TimeScheme, Trajectory,
};
use crate::functionals::{
    dissipation, extra_term, functional_value, identity_series, profile_table, DensityKind, FunctionalReport,
};
use crate::geometry::{ClosedCurve, CurveGeometry, DiffScheme};
use crate::io;
use crate::zelenjak::{characteristics_integrate, verify_identities, CharState, CheckStatus};
use crate::{Error, Result, Vec2};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const OUT_ENV: &str = "STARFLOW_OUT";
pub const DEFAULT_OUT: &str = "starflow_out";

/// Half-width of the psi range written by `profile-f`.
pub const PROFILE_RANGE: f64 = 1.5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Physical flow of a closed curve.
    Simulate,
    /// Rescaled flow with functional identity reports.
    #[default]
    Rescaled,
    /// Functional values and dissipations of a single curve.
    Functionals,
    /// Random-point battery over all pointwise identities.
    VerifyIdentities,
    /// One characteristic of the first-order PDE for the weight.
    Characteristics,
    /// Table of the profile f and its derivatives.
    ProfileF,
}

/// Full description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// `circle:r=..,cx=..,cy=..`, `ellipse:a=..,b=..`, `star:r0=..,eps=..,k=..` or `csv:PATH`.
    pub curve: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub scheme: TimeScheme,
    pub derivative: DiffScheme,
    pub cfl: f64,
    pub dt: Option<f64>,
    pub horizon: f64,
    pub stride: u64,
    pub resample_every: u64,
    /// Rescale the initial curve about its estimated blow-up time (rescaled runs).
    pub normalize: bool,
    pub anisotropy: Anisotropy,
    pub kinds: Vec<DensityKind>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub points: usize,
    pub grid: usize,
    /// Characteristic start `(xi1, xi2, phi, b)`.
    pub init: [f64; 4],
    pub span: f64,
    pub ds: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let flow = FlowConfig::default();
        Self {
            command: Command::default(),
            curve: "circle:r=1.4142135623730951".into(),
            n: 256,
            scheme: flow.scheme,
            derivative: DiffScheme::Central4,
            cfl: flow.cfl,
            dt: flow.dt,
            horizon: 1.0,
            stride: 10,
            resample_every: flow.resample_every,
            normalize: true,
            anisotropy: Anisotropy::Isotropic,
            kinds: vec![DensityKind::Huisken, DensityKind::Raw, DensityKind::Repaired],
            out: None,
            seed: 7,
            points: 1000,
            grid: 257,
            init: [1.0, 1.0, 0.0, -0.5],
            span: 2.0,
            ds: 1e-3,
        }
    }
}

impl RunConfig {
    pub fn flow_config(&self) -> FlowConfig {
        FlowConfig {
            cfl: self.cfl,
            resample_every: self.resample_every,
            scheme: self.scheme,
            derivative: self.derivative,
            dt: self.dt,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
            }
        };
        self.flow_config().validate()?;
        positive("horizon", self.horizon)?;
        positive("span", self.span.abs())?;
        positive("ds", self.ds)?;
        if let Some(dt) = self.dt {
            positive("dt", dt)?;
        }
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be at least 1".into()));
        }
        if self.points == 0 {
            return Err(Error::InvalidParameter("points must be at least 1".into()));
        }
        if self.grid < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points, got {}",
                self.grid
            )));
        }
        if self.n < crate::geometry::MIN_NODES {
            return Err(Error::TooFewNodes {
                got: self.n,
                min: crate::geometry::MIN_NODES,
            });
        }
        if let Anisotropy::Harmonic { amplitude, .. } = self.anisotropy {
            if !(amplitude.abs() < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "anisotropy amplitude must satisfy |a| < 1, got {amplitude}"
                )));
            }
        }
        parse_curve_spec(&self.curve)?;
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "starflow",
    version,
    about = "Planar curve shortening flow and its monotonicity formulas"
)]
struct Cli {
    /// Command to run; defaults to the one in --config.
    #[arg(value_enum)]
    command: Option<Command>,
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    curve: Option<String>,
    /// Number of nodes.
    #[arg(long = "N", visible_alias = "n")]
    n: Option<usize>,
    /// Time scheme: rk4 or euler.
    #[arg(long, value_parser = parse_time_scheme)]
    scheme: Option<TimeScheme>,
    /// Spatial derivatives: central2, central4 or spectral.
    #[arg(long, value_parser = parse_diff_scheme)]
    deriv: Option<DiffScheme>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Fixed time step overriding the CFL rule.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Record every this many steps.
    #[arg(long)]
    stride: Option<u64>,
    #[arg(long)]
    resample_every: Option<u64>,
    /// Rescale the initial curve about its estimated blow-up time: true or false.
    #[arg(long)]
    normalize: Option<bool>,
    /// `isotropic` or `harmonic:amp=..,k=..,phase=..`.
    #[arg(long = "g", value_parser = parse_anisotropy)]
    anisotropy: Option<Anisotropy>,
    /// Comma-separated functional kinds: huisken, raw, repaired, corrected.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    kinds: Option<Vec<DensityKind>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    /// Characteristic start `xi1,xi2,phi,b`.
    #[arg(long, value_delimiter = ',', num_args = 4, allow_negative_numbers = true)]
    init: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    span: Option<f64>,
    #[arg(long)]
    ds: Option<f64>,
}

fn parse_time_scheme(s: &str) -> std::result::Result<TimeScheme, String> {
    match s.to_ascii_lowercase().as_str() {
        "rk4" => Ok(TimeScheme::Rk4),
        "euler" | "forwardeuler" | "forward-euler" => Ok(TimeScheme::ForwardEuler),
        other => Err(format!("unknown time scheme {other:?}")),
    }
}

fn parse_diff_scheme(s: &str) -> std::result::Result<DiffScheme, String> {
    match s.to_ascii_lowercase().as_str() {
        "2" | "central2" => Ok(DiffScheme::Central2),
        "4" | "central4" => Ok(DiffScheme::Central4),
        "spectral" => Ok(DiffScheme::Spectral),
        other => Err(format!("unknown derivative scheme {other:?}")),
    }
}

fn parse_kind(s: &str) -> std::result::Result<DensityKind, String> {
    DensityKind::ALL
        .into_iter()
        .find(|k| k.name() == s.trim().to_ascii_lowercase())
        .ok_or_else(|| format!("unknown functional kind {s:?}"))
}

fn parse_anisotropy(s: &str) -> std::result::Result<Anisotropy, String> {
    let (name, params) = split_spec(s);
    match name {
        "isotropic" | "1" => Ok(Anisotropy::Isotropic),
        "harmonic" => {
            let p = params_map(params).map_err(|e| e.to_string())?;
            let amp = get(&p, "amp", 0.0).map_err(|e| e.to_string())?;
            let k = get(&p, "k", 2.0).map_err(|e| e.to_string())?;
            let phase = get(&p, "phase", 0.0).map_err(|e| e.to_string())?;
            if k < 0.0 || k.fract() != 0.0 {
                return Err(format!("harmonic frequency must be a nonnegative integer, got {k}"));
            }
            Anisotropy::harmonic(amp, k as u32, phase).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown anisotropy {other:?}")),
    }
}

fn split_spec(s: &str) -> (&str, &str) {
    match s.split_once(':') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), ""),
    }
}

fn params_map(params: &str) -> Result<Vec<(String, f64)>> {
    params
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {p:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse value of {:?}", k.trim())))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn get(params: &[(String, f64)], key: &str, default: f64) -> Result<f64> {
    Ok(params.iter().rev().find(|(k, _)| k == key).map_or(default, |(_, v)| *v))
}

/// Parsed form of a curve specification string.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec {
    Circle {
        r: f64,
        center: Vec2,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `r(theta) = r0 (1 + eps cos(k theta))`.
    Star {
        r0: f64,
        eps: f64,
        k: u32,
    },
    Csv(PathBuf),
}

pub fn parse_curve_spec(s: &str) -> Result<CurveSpec> {
    let (name, params) = split_spec(s);
    if name == "csv" {
        if params.is_empty() {
            return Err(Error::InvalidParameter("csv curve needs a path".into()));
        }
        return Ok(CurveSpec::Csv(PathBuf::from(params)));
    }
    let p = params_map(params)?;
    let known: &[&str] = match name {
        "circle" => &["r", "cx", "cy"],
        "ellipse" => &["a", "b"],
        "star" => &["r0", "eps", "k"],
        other => return Err(Error::InvalidParameter(format!("unknown curve {other:?}"))),
    };
    if let Some((k, _)) = p.iter().find(|(k, _)| !known.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!(
            "unknown parameter {k:?} for curve {name}"
        )));
    }
    let spec = match name {
        "circle" => CurveSpec::Circle {
            r: get(&p, "r", 1.0)?,
            center: Vec2::new(get(&p, "cx", 0.0)?, get(&p, "cy", 0.0)?),
        },
        "ellipse" => CurveSpec::Ellipse {
            a: get(&p, "a", 1.5)?,
            b: get(&p, "b", 1.0)?,
        },
        _ => {
            let k = get(&p, "k", 3.0)?;
            if k < 1.0 || k.fract() != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "star k must be a positive integer, got {k}"
                )));
            }
            CurveSpec::Star {
                r0: get(&p, "r0", std::f64::consts::SQRT_2)?,
                eps: get(&p, "eps", 0.2)?,
                k: k as u32,
            }
        }
    };
    match spec {
        CurveSpec::Circle { r, .. } if !(r > 0.0) => Err(Error::InvalidParameter(format!(
            "circle radius must be positive, got {r}"
        ))),
        CurveSpec::Ellipse { a, b } if !(a > 0.0 && b > 0.0) => Err(Error::InvalidParameter(format!(
            "ellipse axes must be positive, got {a}, {b}"
        ))),
        CurveSpec::Star { r0, eps, .. } if !(r0 > 0.0 && eps.abs() < 1.0) => Err(Error::InvalidParameter(format!(
            "star needs r0 > 0 and |eps| < 1, got {r0}, {eps}"
        ))),
        spec => Ok(spec),
    }
}

pub fn build_curve(spec: &CurveSpec, n: usize) -> Result<ClosedCurve> {
    match spec {
        CurveSpec::Circle { r, center } => ClosedCurve::circle(*r, *center, n),
        CurveSpec::Ellipse { a, b } => ClosedCurve::ellipse(*a, *b, n),
        CurveSpec::Star { r0, eps, k } => {
            let (r0, eps, k) = (*r0, *eps, *k as f64);
            ClosedCurve::polar(move |th| r0 * (1.0 + eps * (k * th).cos()), n)
        }
        CurveSpec::Csv(path) => io::read_curve_csv(path),
    }
}

/// Config from defaults, the optional JSON file and flag overrides; the output
/// directory is left as given and resolved by [`output_dir`].
fn resolve(cli: Cli) -> Result<(RunConfig, Option<PathBuf>)> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = cli.$field { cfg.$field = v; } )* };
    }
    set!(
        command,
        curve,
        n,
        scheme,
        cfl,
        horizon,
        stride,
        resample_every,
        normalize,
        anisotropy,
        kinds,
        seed,
        points,
        grid,
        span,
        ds
    );
    if let Some(d) = cli.deriv {
        cfg.derivative = d;
    }
    if cli.dt.is_some() {
        cfg.dt = cli.dt;
    }
    if let Some(init) = cli.init {
        cfg.init = [init[0], init[1], init[2], init[3]];
    }
    Ok((cfg, cli.out))
}

/// `--out`, then `STARFLOW_OUT`, then the config field, then [`DEFAULT_OUT`].
pub fn output_dir(flag: Option<PathBuf>, config: Option<&Path>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| config.map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// Outcome of a completed command that still may have hit a numerical failure.
#[derive(Debug, Default)]
pub struct RunSummary {
    pub lines: Vec<String>,
    /// Early stop of a flow run.
    pub failure: Option<String>,
}

/// Runs `cfg` writing into `out`.
pub fn execute(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    fs::create_dir_all(out)?;
    let echo = serde_json::to_string_pretty(cfg).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    fs::write(out.join("config.json"), echo + "\n")?;
    match cfg.command {
        Command::Simulate => simulate(cfg, out),
        Command::Rescaled => rescaled(cfg, out),
        Command::Functionals => functionals(cfg, out),
        Command::VerifyIdentities => verify(cfg, out),
        Command::Characteristics => characteristics(cfg, out),
        Command::ProfileF => profile(cfg, out),
    }
}

fn initial_curve(cfg: &RunConfig) -> Result<ClosedCurve> {
    build_curve(&parse_curve_spec(&cfg.curve)?, cfg.n)
}

fn failure_of(traj: &Trajectory) -> Option<String> {
    traj.singularity
        .as_ref()
        .map(|s| format!("run stopped at time {} (step {}): {}", s.time, s.step, s.message))
}

fn simulate(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let curve = initial_curve(cfg)?;
    let blowup = estimate_blowup_time(&curve, &cfg.anisotropy).ok();
    let traj = run(
        &curve,
        RhsKind::Physical,
        &cfg.anisotropy,
        &cfg.flow_config(),
        cfg.horizon,
        cfg.stride,
    )?;
    io::write_trajectory(out, &traj, blowup, cfg.derivative)?;
    let last = traj.last();
    Ok(RunSummary {
        lines: vec![format!(
            "simulate: {} samples, {} steps, final time {}, area {}",
            traj.samples.len(),
            traj.steps,
            last.time,
            last.curve.enclosed_area()
        )],
        failure: failure_of(&traj),
    })
}

fn rescaled(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let original = initial_curve(cfg)?;
    let blowup = estimate_blowup_time(&original, &cfg.anisotropy).ok();
    let curve = if cfg.normalize {
        normalize_for_rescaled(&original, &cfg.anisotropy)?
    } else {
        original
    };
    let traj = run(
        &curve,
        RhsKind::Rescaled,
        &cfg.anisotropy,
        &cfg.flow_config(),
        cfg.horizon,
        cfg.stride,
    )?;
    io::write_trajectory(out, &traj, blowup, cfg.derivative)?;
    let mut lines = Vec::new();
    let mut reports: Vec<FunctionalReport> = Vec::new();
    for &kind in &cfg.kinds {
        if kind.is_star() && !cfg.anisotropy.is_isotropic() {
            lines.push(format!("{kind}: skipped, star functionals need isotropic g"));
            continue;
        }
        let series = identity_series(&traj, kind, &cfg.anisotropy, cfg.derivative)?;
        let max_res = series.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
        let (lo, hi) = series.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.value), hi.max(r.value))
        });
        lines.push(format!("{kind}: value in [{lo}, {hi}], max |residual| {max_res:e}"));
        reports.extend(series);
    }
    io::write_reports(&out.join("report.csv"), &reports)?;
    Ok(RunSummary {
        lines,
        failure: failure_of(&traj),
    })
}

fn functionals(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let curve = initial_curve(cfg)?;
    let geom = CurveGeometry::new(&curve, cfg.derivative)?;
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for &kind in &cfg.kinds {
        if kind.is_star() && !cfg.anisotropy.is_isotropic() {
            lines.push(format!("{kind}: skipped, star functionals need isotropic g"));
            continue;
        }
        let value = functional_value(&geom, kind)?;
        let d = dissipation(&geom, kind, &cfg.anisotropy)?;
        let extra = if kind == DensityKind::Raw {
            extra_term(&geom, &cfg.anisotropy)?
        } else {
            0.0
        };
        lines.push(format!("{kind}: value {value}, dissipation {d}, extra term {extra}"));
        reports.push(FunctionalReport {
            tau: 0.0,
            kind,
            value,
            dissipation: d,
            extra_term: extra,
            residual: f64::NAN,
        });
    }
    io::write_reports(&out.join("report.csv"), &reports)?;
    Ok(RunSummary { lines, failure: None })
}

fn verify(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let checks = verify_identities(cfg.seed, cfg.points)?;
    io::write_checks(&out.join("verification.csv"), &checks)?;
    let mut lines: Vec<String> = checks
        .iter()
        .map(|c| {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Info => "INFO",
            };
            format!("{tag} {} points={} max_residual={:e}", c.name, c.points, c.max_residual)
        })
        .collect();
    let failed = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
    lines.push(format!("{} checks, {failed} failed", checks.len()));
    Ok(RunSummary { lines, failure: None })
}

fn characteristics(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let [x1, x2, phi, b] = cfg.init;
    let states = characteristics_integrate(&cfg.anisotropy, CharState::new(x1, x2, phi, b), cfg.span, cfg.ds)?;
    io::write_characteristics(&out.join("characteristics.csv"), &states)?;
    let last = states.last().copied().unwrap_or(CharState::new(x1, x2, phi, b));
    Ok(RunSummary {
        lines: vec![format!(
            "characteristics: {} states, end s={} xi=({}, {}) phi={} b={}",
            states.len(),
            last.s,
            last.xi1,
            last.xi2,
            last.phi,
            last.b
        )],
        failure: None,
    })
}

fn profile(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let table = profile_table(cfg.grid, PROFILE_RANGE)?;
    io::write_profile(&out.join("profile_f.csv"), &table)?;
    let fmax = table.iter().map(|r| r[1]).fold(f64::NEG_INFINITY, f64::max);
    Ok(RunSummary {
        lines: vec![format!(
            "profile-f: {} points on |psi| <= {PROFILE_RANGE}, max f {fmax}",
            table.len()
        )],
        failure: None,
    })
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_VALIDATION
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let (cfg, out_flag) = match resolve(cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let out = output_dir(out_flag, cfg.out.as_deref());
    match execute(&cfg, &out) {
        Ok(summary) => {
            for line in &summary.lines {
                println!("{line}");
            }
            match summary.failure {
                Some(msg) => {
                    eprintln!("numerical failure: {msg}");
                    EXIT_NUMERICAL
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_specs_parse() {
        assert_eq!(
            parse_curve_spec("circle:r=2,cx=0.5").unwrap(),
            CurveSpec::Circle {
                r: 2.0,
                center: Vec2::new(0.5, 0.0)
            }
        );
        assert_eq!(
            parse_curve_spec("ellipse:a=1.5,b=1").unwrap(),
            CurveSpec::Ellipse { a: 1.5, b: 1.0 }
        );
        assert!(matches!(
            parse_curve_spec("star:eps=0.2,k=3"),
            Ok(CurveSpec::Star { k: 3, .. })
        ));
        assert_eq!(
            parse_curve_spec("csv:a/b.csv").unwrap(),
            CurveSpec::Csv("a/b.csv".into())
        );
        for bad in ["blob", "circle:r=-1", "circle:q=1", "star:k=1.5", "ellipse:a=x"] {
            assert!(parse_curve_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn anisotropy_flag_parses() {
        assert_eq!(parse_anisotropy("isotropic").unwrap(), Anisotropy::Isotropic);
        assert_eq!(
            parse_anisotropy("harmonic:amp=0.3,k=2").unwrap(),
            Anisotropy::Harmonic {
                amplitude: 0.3,
                frequency: 2,
                phase: 0.0
            }
        );
        assert!(parse_anisotropy("harmonic:amp=1.5").is_err());
    }

    #[test]
    fn config_json_round_trips() {
        let cfg = RunConfig {
            command: Command::Simulate,
            dt: Some(1e-4),
            anisotropy: Anisotropy::Harmonic {
                amplitude: 0.2,
                frequency: 3,
                phase: 0.1,
            },
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }

    #[test]
    fn validation_rejects_bad_numbers() {
        let bad = [
            RunConfig {
                horizon: 0.0,
                ..RunConfig::default()
            },
            RunConfig {
                cfl: 0.9,
                ..RunConfig::default()
            },
            RunConfig {
                stride: 0,
                ..RunConfig::default()
            },
            RunConfig {
                n: 8,
                ..RunConfig::default()
            },
            RunConfig {
                dt: Some(-1.0),
                ..RunConfig::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn unknown_flag_is_a_validation_failure() {
        assert_eq!(
            main_with_args(["starflow", "simulate", "--bogus", "1"]),
            EXIT_VALIDATION
        );
        assert_eq!(main_with_args(["starflow", "frobnicate"]), EXIT_VALIDATION);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"command":"profile-f","grid":33,"seed":5}"#).unwrap();
        let cli = Cli::try_parse_from(["starflow", "--config", path.to_str().unwrap(), "--grid", "65"]).unwrap();
        let (cfg, _) = resolve(cli).unwrap();
        assert_eq!(cfg.command, Command::ProfileF);
        assert_eq!(cfg.grid, 65);
        assert_eq!(cfg.seed, 5);
    }
}
