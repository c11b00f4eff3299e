use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn starflow(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_starflow"));
    cmd.args(args).env_remove("STARFLOW_OUT");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn rescaled_circle_report_is_constant_with_small_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = starflow(
        &[
            "rescaled",
            "--curve",
            "circle:r=1.4142135",
            "--N",
            "256",
            "--horizon",
            "1.0",
            "--out",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(&out.join("report.csv"));
    assert_eq!(
        rows[0],
        ["tau", "kind", "value", "dissipation", "extra_term", "residual"]
    );
    for kind in ["huisken", "raw", "repaired"] {
        let vals: Vec<(f64, f64)> = rows[1..]
            .iter()
            .filter(|r| r[1] == kind)
            .map(|r| (r[2].parse().unwrap(), r[5].parse().unwrap()))
            .collect();
        assert!(!vals.is_empty());
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v.0), h.max(v.0)));
        assert!(hi - lo <= 1e-3, "{kind}: values vary by {}", hi - lo);
        assert!(vals.iter().all(|v| v.1.abs() <= 1e-3), "{kind}");
    }
    let traj = read_csv(&out.join("trajectory.csv"));
    assert_eq!(traj[0], ["sample_index", "time", "tau", "area", "length", "min_cospsi"]);
    assert!(out.join("curves").join("sample_00000.csv").exists());
    assert!(out.join("config.json").exists());
}

#[test]
fn verify_identities_writes_one_line_per_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = starflow(
        &[
            "verify-identities",
            "--seed",
            "7",
            "--points",
            "100",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success());
    let rows = read_csv(&dir.path().join("verification.csv"));
    assert_eq!(rows[0], ["check_name", "points", "max_residual", "pass"]);
    assert!(rows.len() > 20);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("PASS pde_huisken_analytic"));
}

#[test]
fn profile_table_covers_the_requested_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = starflow(
        &["profile-f", "--grid", "257", "--out", dir.path().to_str().unwrap()],
        &[],
    );
    assert!(o.status.success());
    let rows = read_csv(&dir.path().join("profile_f.csv"));
    assert_eq!(rows.len(), 258);
    let first: f64 = rows[1][0].parse().unwrap();
    let last: f64 = rows[257][0].parse().unwrap();
    assert_eq!((first, last), (-1.5, 1.5));
    for r in &rows[1..] {
        let f: f64 = r[1].parse().unwrap();
        let f2: f64 = r[3].parse().unwrap();
        assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&f) && f2 > 0.0);
        // 17 significant digits
        assert_eq!(r[1].split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
    }
}

#[test]
fn env_var_sets_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_env");
    let o = starflow(&["profile-f", "--grid", "9"], &[("STARFLOW_OUT", &target)]);
    assert!(o.status.success());
    assert!(target.join("profile_f.csv").exists());
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let o = starflow(
        &[
            "simulate",
            "--curve",
            "ellipse:a=1.5,b=1",
            "--N",
            "64",
            "--horizon",
            "0.05",
            "--out",
            first.to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success());
    let cfg = first.join("config.json");
    let o = starflow(
        &["--config", cfg.to_str().unwrap(), "--out", second.to_str().unwrap()],
        &[],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(&cfg).unwrap(), fs::read(second.join("config.json")).unwrap());
    assert_eq!(
        fs::read(first.join("trajectory.csv")).unwrap(),
        fs::read(second.join("trajectory.csv")).unwrap()
    );
}

#[test]
fn csv_curves_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let mut text = String::from("v1,v2\n");
    for j in 0..64 {
        let x = std::f64::consts::TAU * j as f64 / 64.0;
        text.push_str(&format!("{},{}\n", 1.3 * x.cos(), x.sin()));
    }
    fs::write(&path, text).unwrap();
    let spec = format!("csv:{}", path.display());
    let o = starflow(
        &[
            "functionals",
            "--curve",
            &spec,
            "--out",
            dir.path().join("o").to_str().unwrap(),
        ],
        &[],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read_csv(&dir.path().join("o").join("report.csv")).len(), 4);
}

#[test]
fn validation_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "v1,v2\n1,nope\n").unwrap();
    let bad_spec = format!("csv:{}", bad.display());
    for args in [
        vec!["simulate", "--unknown-flag"],
        vec!["simulate", "--cfl", "0.9", "--out", out],
        vec!["simulate", "--N", "4", "--out", out],
        vec!["simulate", "--curve", "blob", "--out", out],
        vec!["functionals", "--curve", &bad_spec, "--out", out],
    ] {
        let o = starflow(&args, &[]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn unwritable_output_directory_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("occupied");
    fs::write(&file, "").unwrap();
    let o = starflow(&["profile-f", "--out", file.join("sub").to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn star_shape_loss_exits_with_three_and_names_the_node() {
    let dir = tempfile::tempdir().unwrap();
    let o = starflow(
        &[
            "functionals",
            "--curve",
            "circle:r=1,cx=2",
            "--kinds",
            "repaired",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("node"), "{err}");
}

#[test]
fn collapsing_run_exits_with_three_after_writing_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = starflow(
        &[
            "simulate",
            "--curve",
            "circle:r=0.3",
            "--N",
            "32",
            "--horizon",
            "1",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(dir.path().join("trajectory.csv").exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("node"));
}
