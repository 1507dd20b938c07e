use std::path::Path;
use std::process::{Command, Output};

fn freeplate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeplate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn bounds_row_for_unit_disk_area() {
    let out = freeplate(&["bounds", "--n", "2", "--volume", "3.141592653589793", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,kroger_sum_bound,kroger_eig_bound,plate_sum_bound,plate_eig_bound")
    );
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert_eq!(row[0], 1.0);
    assert!((row[1] - 2.0).abs() < 1e-10);
    assert!((row[2] - 8.0).abs() < 1e-10);
    assert!((row[3] - 16.0 / 3.0).abs() < 1e-10);
    assert!((row[4] - 36.0).abs() < 1e-9);
}

#[test]
fn bounds_with_zero_m_is_an_empty_table() {
    let out = freeplate(&["bounds", "--n", "2", "--volume", "3.141592653589793", "--m", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn bounds_on_the_unit_interval_increase() {
    let out = freeplate(&["bounds", "--n", "1", "--volume", "1", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Vec<f64>> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    for pair in rows.windows(2) {
        for col in 1..5 {
            assert!(pair[1][col] > pair[0][col], "column {col} not increasing");
        }
    }
}

#[test]
fn bounds_long_format() {
    let out = freeplate(&["bounds", "--n", "1", "--volume", "1", "--m", "2", "--long"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("m,bound_kind,value\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn invalid_bounds_arguments_exit_2() {
    let out = freeplate(&["bounds", "--n", "2", "--volume", "-1", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = freeplate(&["bounds", "--n", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_count_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "zero.json",
        r#"{"domain": {"kind": "rectangle", "extents": [1.0, 1.0]},
            "operator": "plate", "count": 0, "checks": ["bounds"]}"#,
    );
    let out = freeplate(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("count"));
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", "{ not json");
    assert_eq!(freeplate(&["verify", "--config", &cfg]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        freeplate(&["verify", "--config", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn square_plate_bounds_pass_and_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum = dir.path().join("spectrum.json");
    let report = dir.path().join("report.csv");
    let body = format!(
        r#"{{"domain": {{"kind": "rectangle", "extents": [1.0, 1.0]}},
            "operator": "plate", "tau": 0.0, "count": 11, "m_max": 10,
            "checks": ["bounds"], "spectrum_out": {:?}, "report_out": {:?}}}"#,
        spectrum, report
    );
    let cfg = write_config(dir.path(), "square.json", &body);
    let out = freeplate(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("m,sum_computed,sum_bound,eig_computed,eig_bound,slack_sum,slack_eig,status")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[7], "pass");
        assert!(f[5].parse::<f64>().unwrap() >= 0.0);
        assert!(f[6].parse::<f64>().unwrap() >= 0.0);
    }

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&spectrum).unwrap()).unwrap();
    assert_eq!(json["values"].as_array().unwrap().len(), 11);
    assert_eq!(json["operator"], "plate");
}

#[test]
fn membrane_square_matches_oracle() {
    let out = freeplate(&[
        "verify", "--domain", "rectangle", "--extents", "1,1", "--operator", "membrane",
        "--m", "8", "--check", "oracle", "--check", "bounds",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    let dev: f64 = err
        .lines()
        .find_map(|l| l.strip_prefix("oracle: max deviation "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev <= 1e-6);
}

#[test]
fn failed_check_exits_1_and_names_the_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "strict.json",
        r#"{"domain": {"kind": "rectangle", "extents": [1.0, 1.0]},
            "operator": "membrane", "count": 8, "checks": ["oracle"],
            "oracle_tol": 1e-300}"#,
    );
    let out = freeplate(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL oracle deviation"));
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let args = [
        "verify", "--domain", "disk", "--extents", "1", "--tau", "1", "--m", "5",
    ];
    let a = freeplate(&args);
    let b = freeplate(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn compute_writes_spectrum_json() {
    let out = freeplate(&["compute", "--n", "1", "--volume", "1", "--count", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let values = json["values"].as_array().unwrap();
    assert_eq!(values.len(), 4);
    let lambda3 = values[2].as_f64().unwrap();
    assert!((lambda3 - 500.5639017404326).abs() / 500.5639017404326 < 1e-6);
    assert_eq!(json["domain"]["kind"], "interval");
}

#[test]
fn fourier_check_square_plate() {
    let out = freeplate(&[
        "fourier-check", "--domain", "rectangle", "--extents", "1,1", "--m", "3", "--points", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("m,r,N,D,ratio,lambda_next,margin\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 3);
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(f[3] > 0.0);
        assert!(f[6] >= 0.0);
    }
}

#[test]
fn fourier_check_rejects_membrane() {
    let out = freeplate(&[
        "fourier-check", "--domain", "rectangle", "--extents", "1,1", "--operator", "membrane",
        "--m", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_conflicts_with_inline_flags() {
    let out = freeplate(&["verify", "--config", "x.json", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
