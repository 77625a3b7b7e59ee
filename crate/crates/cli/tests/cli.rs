use mstl_cli::formats::{parse_potential_csv, parse_scattering_json, parse_trajectory_csv};
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn mstl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mstl"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env("MSTL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&read(&dir.join("report.json"))).unwrap()
}

#[test]
fn forward_of_zero_is_transparent() {
    let d = tempfile::tempdir().unwrap();
    let out = mstl(
        &["forward", "--potential", "zero", "--m", "2", "--x-min", "-2", "--x-max", "2", "--n-rho", "64"],
        d.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for side in ["right.json", "left.json"] {
        let p = d.path().join(side);
        let data = parse_scattering_json(&read(&p), &p).unwrap();
        assert_eq!(data.dim(), 2);
        assert!(data.bound_states.is_empty());
        assert_eq!(data.max_s_norm(), 0.0);
    }
    let rep = report(d.path());
    assert_eq!(rep["passed"], Value::Bool(true));
    assert_eq!(rep["conditions"].as_array().unwrap().len(), 3);
}

#[test]
fn soliton_matches_sech_squared_and_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = mstl(&["soliton", "--tau", "1", "--weight", "2"], d.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let p = a.path().join("potential.csv");
    let text = read(&p);
    assert_eq!(text, read(&b.path().join("potential.csv")));
    assert_eq!(read(&a.path().join("report.json")), read(&b.path().join("report.json")));
    let q = parse_potential_csv(&text, &p).unwrap();
    let err = q
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| (v[(0, 0)].re + 2.0 / q.grid().x(j).cosh().powi(2)).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-4, "{err}");
}

#[test]
fn roundtrip_reports_a_small_error() {
    let d = tempfile::tempdir().unwrap();
    let out = mstl(&["roundtrip", "--x-min", "-4", "--x-max", "4"], d.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let err: f64 = stdout.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(err <= 0.02);
    assert_eq!(report(d.path())["relative_l1_error"].as_f64(), Some(err));
}

#[test]
fn invert_reads_forward_output() {
    let d = tempfile::tempdir().unwrap();
    let out = mstl(
        &[
            "forward",
            "--potential",
            "box",
            "--x-min",
            "-3",
            "--x-max",
            "3",
            "--dx",
            "0.005",
            "--rho-max",
            "20",
            "--n-rho",
            "512",
        ],
        d.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let right = d.path().join("right.json");
    let inv = tempfile::tempdir().unwrap();
    let out = mstl(
        &["invert", "--right", right.to_str().unwrap(), "--x-min", "-3", "--x-max", "3", "--dx", "0.02"],
        inv.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(inv.path());
    assert_eq!(rep["inversion"]["left_derived"], Value::Bool(true));
    let p = inv.path().join("potential.csv");
    let q = parse_potential_csv(&read(&p), &p).unwrap();
    let mid = q.values()[q.grid().nearest(0.0)][(0, 0)].re;
    assert!((mid - 1.0).abs() < 0.1, "box height {mid}");
}

#[test]
fn kdv_writes_a_parsable_trajectory() {
    let d = tempfile::tempdir().unwrap();
    let out = mstl(
        &[
            "kdv", "--tau", "1", "--weight", "2", "--t-max", "0.2", "--n-t", "3", "--x-min", "-6", "--x-max", "6",
            "--dx", "0.05",
        ],
        d.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let p = d.path().join("trajectory.csv");
    let (times, pots) = parse_trajectory_csv(&read(&p), &p).unwrap();
    assert_eq!(times, vec![0.0, 0.1, 0.2]);
    assert_eq!(pots.len(), 3);
    assert_eq!(report(d.path())["residuals"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes_follow_the_failure_class() {
    let d = tempfile::tempdir().unwrap();
    let missing = mstl(&["validate", "--data", "/nonexistent/data.json"], d.path());
    assert_eq!(missing.status.code(), Some(4));

    let bad = d.path().join("bad.json");
    std::fs::write(&bad, r#"{"m":2,"side":"right","rho":[-0.5,0.5],"S":[[[[0,0],[0,0]],[[0,0],[0,0]]],[[[0,0],[0,0]],[[0,0],[0,0]]]],"bound_states":[{"tau":1,"N":[[[1,0],[0,0]],[[0,0],[-0.1,0]]]}]}"#).unwrap();
    let out = mstl(&["validate", "--data", bad.to_str().unwrap()], d.path());
    assert_eq!(out.status.code(), Some(2));
    let rep = report(d.path());
    let items = rep["conditions"][0]["items"].as_array().unwrap();
    let psd = items.iter().find(|i| i["name"] == "N positive semidefinite").unwrap();
    assert_eq!(psd["passed"], Value::Bool(false));

    let odd = mstl(&["soliton", "--tau", "1", "--tau", "2", "--weight", "1"], d.path());
    assert_eq!(odd.status.code(), Some(2));
    let garbled = d.path().join("garbled.json");
    std::fs::write(&garbled, "{not json").unwrap();
    let out = mstl(&["invert", "--right", garbled.to_str().unwrap()], d.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn error_classes_map_to_exit_codes() {
    use mstl_cli::error::CliError;
    assert_eq!(CliError::Core(mstl::Error::InvalidInput("x".into())).exit_code(), 2);
    assert_eq!(CliError::Core(mstl::Error::IllPosed { x: 0.0, cond: 1e20 }).exit_code(), 3);
    assert_eq!(CliError::Accuracy("x".into()).exit_code(), 3);
}
