//! CSV input and output. Numbers are written with 17 significant digits so
//! doubles round-trip exactly.

use std::fs;
use std::path::{Path, PathBuf};

use crate::flow::{RhsKind, Trajectory};
use crate::functionals::FunctionalReport;
use crate::geometry::{ClosedCurve, CurveGeometry, DiffScheme};
use crate::zelenjak::{CharState, CheckResult};
use crate::{Error, Result, Vec2};

/// Formats a double with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::MalformedCsv(format!("{}: {other:?}", path.display())),
    }
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads nodes from a CSV with header `v1,v2`; orientation is normalized by [`ClosedCurve::new`].
pub fn read_curve_csv(path: &Path) -> Result<ClosedCurve> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.len() != 2 || headers.get(0).map(str::trim) != Some("v1") || headers.get(1).map(str::trim) != Some("v2")
    {
        return Err(Error::MalformedCsv(format!(
            "{}: expected header v1,v2, found {:?}",
            path.display(),
            headers.iter().collect::<Vec<_>>()
        )));
    }
    let mut nodes = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let parse = |i: usize| -> Result<f64> {
            let field = rec.get(i).unwrap_or("").trim();
            field.parse::<f64>().map_err(|_| {
                Error::MalformedCsv(format!("{}: row {}: cannot parse {field:?}", path.display(), line + 1))
            })
        };
        nodes.push(Vec2::new(parse(0)?, parse(1)?));
    }
    ClosedCurve::new(nodes)
}

pub fn write_curve_csv(path: &Path, curve: &ClosedCurve) -> Result<()> {
    write_rows(
        path,
        &["v1", "v2"],
        curve.nodes().iter().map(|p| vec![fmt_f64(p.x), fmt_f64(p.y)]),
    )
}

/// Physical and rescaled time of a sample, given the blow-up time of the run.
fn sample_times(kind: RhsKind, time: f64, blowup: Option<f64>) -> (f64, f64) {
    match (kind, blowup) {
        (RhsKind::Physical, Some(big_t)) if time < big_t => (time, -(1.0 - time / big_t).ln()),
        (RhsKind::Physical, _) => (time, f64::NAN),
        (RhsKind::Rescaled, Some(big_t)) => (big_t * (1.0 - (-time).exp()), time),
        (RhsKind::Rescaled, None) => (f64::NAN, time),
    }
}

/// Writes `trajectory.csv` and `curves/sample_XXXXX.csv` under `dir`.
pub fn write_trajectory(dir: &Path, traj: &Trajectory, blowup: Option<f64>, scheme: DiffScheme) -> Result<()> {
    let curves = dir.join("curves");
    fs::create_dir_all(&curves)?;
    let mut rows = Vec::with_capacity(traj.samples.len());
    for s in &traj.samples {
        let (time, tau) = sample_times(traj.kind, s.time, blowup);
        let min_cos = CurveGeometry::new(&s.curve, scheme)
            .and_then(|g| g.min_cos_psi())
            .map(|(_, c)| c)
            .unwrap_or(f64::NAN);
        rows.push(vec![
            s.index.to_string(),
            fmt_f64(time),
            fmt_f64(tau),
            fmt_f64(s.curve.enclosed_area()),
            fmt_f64(s.curve.total_length()),
            fmt_f64(min_cos),
        ]);
        write_curve_csv(&curve_sample_path(dir, s.index), &s.curve)?;
    }
    write_rows(
        &dir.join("trajectory.csv"),
        &["sample_index", "time", "tau", "area", "length", "min_cospsi"],
        rows,
    )
}

pub fn curve_sample_path(dir: &Path, index: usize) -> PathBuf {
    dir.join("curves").join(format!("sample_{index:05}.csv"))
}

pub fn write_reports(path: &Path, reports: &[FunctionalReport]) -> Result<()> {
    write_rows(
        path,
        &["tau", "kind", "value", "dissipation", "extra_term", "residual"],
        reports.iter().map(|r| {
            vec![
                fmt_f64(r.tau),
                r.kind.name().to_string(),
                fmt_f64(r.value),
                fmt_f64(r.dissipation),
                fmt_f64(r.extra_term),
                fmt_f64(r.residual),
            ]
        }),
    )
}

pub fn write_checks(path: &Path, checks: &[CheckResult]) -> Result<()> {
    write_rows(
        path,
        &["check_name", "points", "max_residual", "pass"],
        checks.iter().map(|c| {
            vec![
                c.name.clone(),
                c.points.to_string(),
                fmt_f64(c.max_residual),
                c.status.as_str().to_string(),
            ]
        }),
    )
}

pub fn write_characteristics(path: &Path, states: &[CharState]) -> Result<()> {
    write_rows(
        path,
        &["s", "xi1", "xi2", "phi", "b"],
        states
            .iter()
            .map(|c| [c.s, c.xi1, c.xi2, c.phi, c.b].iter().map(|&x| fmt_f64(x)).collect()),
    )
}

/// Rows of `(psi, f, f', f'')`.
pub fn write_profile(path: &Path, table: &[[f64; 4]]) -> Result<()> {
    write_rows(
        path,
        &["psi", "f", "f_prime", "f_second"],
        table.iter().map(|row| row.iter().map(|&x| fmt_f64(x)).collect()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubles_round_trip() {
        for x in [0.1, std::f64::consts::PI, -1.0 / 3.0, 1e-300, 6.02214076e23] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn curve_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let curve = ClosedCurve::ellipse(1.5, 0.7, 64).unwrap();
        write_curve_csv(&path, &curve).unwrap();
        let back = read_curve_csv(&path).unwrap();
        assert_eq!(back.nodes(), curve.nodes());
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cw.csv");
        let mut text = String::from("v1,v2\n");
        for j in 0..32 {
            let x = -std::f64::consts::TAU * j as f64 / 32.0;
            text.push_str(&format!("{},{}\n", x.cos(), x.sin()));
        }
        fs::write(&path, text).unwrap();
        let c = read_curve_csv(&path).unwrap();
        assert!(c.enclosed_area() > 0.0);
    }

    #[test]
    fn malformed_csv_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "x,y\n1,2\n").unwrap();
        assert!(matches!(read_curve_csv(&path), Err(Error::MalformedCsv(_))));
        fs::write(&path, "v1,v2\n1,abc\n").unwrap();
        assert!(matches!(read_curve_csv(&path), Err(Error::MalformedCsv(_))));
    }
}
