use std::path::Path;

use quatrad::cli::run_with;
use quatrad::io::{read_matrix, write_matrix};
use quatrad::qlinalg::random_matrix;
use quatrad::{MatrixKind, QMatrix, Quaternion};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(
        std::iter::once("quatrad").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn report(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("stdout is a JSON report")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let (code, out, _) = run(&[
        "gen",
        "--kind",
        "normal",
        "--n",
        "4",
        "--seed",
        "7",
        "--out",
        p(&path),
    ]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["verb"], "gen");
    assert_eq!(r["seed"], 7);
    assert_eq!(
        read_matrix(&path).unwrap(),
        random_matrix(MatrixKind::Normal, 4, 7)
    );

    let (code, out, _) = run(&["check", p(&path)]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["pass"], true);
}

#[test]
fn gen_without_out_prints_matrix() {
    let (code, out, _) = run(&["gen", "--kind", "unitary", "--n", "3"]);
    assert_eq!(code, 0);
    let a = quatrad::io::matrix_from_json(&out).unwrap();
    assert_eq!(
        a,
        random_matrix(MatrixKind::Unitary, 3, quatrad::DEFAULT_SEED)
    );
}

#[test]
fn numrad_on_nilpotent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nil.json");
    let nil = QMatrix::from_fn(2, 2, |r, c| {
        if (r, c) == (0, 1) {
            Quaternion::ONE
        } else {
            Quaternion::ZERO
        }
    });
    write_matrix(&path, &nil).unwrap();
    let (code, out, _) = run(&["numrad", p(&path), "--restarts", "8", "--seed", "3"]);
    assert_eq!(code, 0);
    let r = report(&out);
    let value = r["outputs"]["estimate"]["value"].as_f64().unwrap();
    assert!((value - 0.5).abs() < 1e-6);
    assert_eq!(r["seed"], 3);
    assert_eq!(r["outputs"]["norm"].as_f64().unwrap(), 1.0);
}

#[test]
fn sspec_answers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dj.json");
    write_matrix(&path, &QMatrix::from_diag(&[Quaternion::J])).unwrap();
    let (code, out, err) = run(&["sspec", p(&path), "--q", "0,0,1,0"]);
    assert_eq!(code, 0);
    assert!(err.contains("in point spectrum: true"));
    assert_eq!(report(&out)["outputs"]["in_point_spectrum"], true);
    let (_, _, err) = run(&["sspec", p(&path), "--q", "0,1,0,0"]);
    assert!(err.contains("in point spectrum: true"));
    let (_, _, err) = run(&["sspec", p(&path), "--q", "-2,0,0,0"]);
    assert!(err.contains("in point spectrum: false"));
}

#[test]
fn malformed_input_names_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"n":2,"m":2,"entries":[[1,0,0,0],[0,0,0,0],[0,0,"z",0],[1,0,0,0]]}"#,
    )
    .unwrap();
    let (code, out, err) = run(&["norm", p(&path)]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("entry 2"), "{err}");
}

#[test]
fn verbs_on_random_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let general = dir.path().join("g.json");
    let positive = dir.path().join("p.json");
    write_matrix(&general, &random_matrix(MatrixKind::General, 3, 1)).unwrap();
    write_matrix(&positive, &random_matrix(MatrixKind::Positive, 3, 1)).unwrap();

    let (code, out, _) = run(&["polar", p(&general)]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["outputs"]["v"]["n"], 3);

    let (code, out, _) = run(&["sqrt", p(&positive)]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["pass"], true);
    let (code, _, err) = run(&["sqrt", p(&general)]);
    assert_eq!(code, 2);
    assert!(err.contains("not positive"));

    let (code, out, _) = run(&["perturb", p(&general), "--eps", "0.25"]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["outputs"]["eps"], 0.25);
    assert!(r["outputs"]["norms"]["K"].as_f64().unwrap() <= 0.25 + 1e-12);
    let (code, _, _) = run(&["perturb", p(&general), "--eps", "-1"]);
    assert_eq!(code, 2);

    let (code, out, _) = run(&["spectrum", p(&positive)]);
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["outputs"]["qs"].as_array().unwrap().len(), 3);
    assert!(!r["outputs"]["classes"].as_array().unwrap().is_empty());
    let (code, _, err) = run(&["spectrum", p(&general)]);
    assert_eq!(code, 2);
    assert!(err.contains("not normal"));

    let (code, out, _) = run(&["wrange", p(&general), "--count", "5", "--slice", "k"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "w,x,y,z,slice_re,slice_im");
    assert_eq!(lines.len(), 6);

    let (code, out, _) = run(&["extend-demo", p(&positive)]);
    assert_eq!(code, 0);
    assert_eq!(report(&out)["pass"], true);
}

#[test]
fn check_trials_reports_in_order() {
    let (code, out, _) = run(&[
        "check",
        "--trials",
        "4",
        "--n",
        "3",
        "--kind",
        "selfadjoint",
        "--seed",
        "10",
    ]);
    assert_eq!(code, 0);
    let r = report(&out);
    let rows = r["outputs"]["trials"].as_array().unwrap();
    let seeds: Vec<u64> = rows.iter().map(|t| t["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, [10, 11, 12, 13]);
    assert_eq!(r["pass"], true);
}

#[test]
fn exit_code_follows_pass_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    write_matrix(&path, &random_matrix(MatrixKind::General, 4, 9)).unwrap();
    let (code, out, _) = run(&["check", p(&path)]);
    assert_eq!(code == 0, report(&out)["pass"] == true);
    let (code, _, _) = run(&["check", p(&path), "--trials", "2"]);
    assert_eq!(code, 2);
}
