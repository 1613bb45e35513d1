use std::path::{Path, PathBuf};
use std::process::Command;

use num_complex::Complex64;
use serde_json::Value;

use su3lab::cli::{csv_header, manifest_path, run};
use su3lab::fiber::FIBER_TOL;
use su3lab::trace::delta_defect;

fn su3lab(args: &[&str]) -> i32 {
    let mut full = vec!["su3lab"];
    full.extend_from_slice(args);
    run(full)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn report_without_manifest(path: &Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("manifest");
    v
}

#[test]
fn empty_sample_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    assert_eq!(su3lab(&["sample", "--count", "0", "--seed", "1", "--out", path_str(&out)]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, format!("{}\n", csv_header().join(",")));
    assert_eq!(csv_header().len(), 20);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(manifest_path(&out)).unwrap()).unwrap();
    assert_eq!(m["command"], "sample");
    assert_eq!(m["seed"], 1);
}

#[test]
fn sample_traces_lie_in_the_domain_and_reruns_match() {
    let dir = tempfile::tempdir().unwrap();
    for (name, extra) in [("haar", vec![]), ("fiber", vec!["--trace", "-0.4,0.9"])] {
        let x = dir.path().join(format!("{name}_x.csv"));
        let y = dir.path().join(format!("{name}_y.csv"));
        for out in [&x, &y] {
            let mut args = vec!["sample", "--count", "200", "--seed", "17", "--out", path_str(out)];
            args.extend(&extra);
            assert_eq!(su3lab(&args), 0);
        }
        assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap());
        let (header, rows) = read_rows(&x);
        assert_eq!(header, csv_header());
        assert_eq!(rows.len(), 200);
        for row in &rows {
            for k in 0..9 {
                let z = Complex64::new(row[1 + 2 * k], row[2 + 2 * k]);
                assert!(delta_defect(z) <= 1e-9, "{z}");
            }
        }
        if name == "fiber" {
            let idx = header.iter().position(|h| h == "tr_comm_re").unwrap();
            for row in &rows {
                assert!((row[idx] + 0.4).abs() <= 1e-9 && (row[idx + 1] - 0.9).abs() <= 1e-9);
                assert!(row[19] <= FIBER_TOL);
            }
        }
    }
}

#[test]
fn orbit_rows_and_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    assert_eq!(su3lab(&["orbit", "--c-spec", "haar", "-N", "1", "--seed", "3", "--out", path_str(&one)]), 0);
    assert_eq!(read_rows(&one).1.len(), 1);

    let long = dir.path().join("long.csv");
    let args = ["orbit", "--c-spec", "trace=0.2,-0.7", "-N", "10000", "--word-length", "20", "--seed", "3", "--out", path_str(&long)];
    assert_eq!(su3lab(&args), 0);
    let (_, rows) = read_rows(&long);
    assert_eq!(rows.len(), 10_000);
    let worst = rows.iter().map(|r| r[19]).fold(0.0, f64::max);
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = path_str(&out);
    assert_eq!(su3lab(&["orbit", "--c-spec", "central=1", "-N", "3", "--seed", "1", "--out", o]), 2);
    assert_eq!(su3lab(&["orbit", "--c-spec", "trace=3,0", "-N", "3", "--seed", "1", "--out", o]), 2);
    assert_eq!(su3lab(&["sample", "--count", "3", "--trace", "5,5", "--seed", "1", "--out", o]), 2);
    assert_eq!(su3lab(&["sample", "--count", "3", "--out", o]), 2);
    assert_eq!(su3lab(&["sample", "--count", "x", "--seed", "1"]), 2);
    assert_eq!(su3lab(&["bogus"]), 2);
    let unwritable = dir.path().join("missing").join("x.csv");
    assert_eq!(su3lab(&["sample", "--count", "3", "--seed", "1", "--out", path_str(&unwritable)]), 2);
    let no_config = dir.path().join("absent.cfg");
    assert_eq!(su3lab(&["experiment", path_str(&no_config)]), 2);
    let unknown = write_config(dir.path(), "u.cfg", "kind = tea_party\nseed = 1\n");
    assert_eq!(su3lab(&["experiment", path_str(&unknown)]), 2);
}

#[test]
fn missing_seed_is_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", "kind = central_fiber_rigidity\n");
    let output = Command::new(env!("CARGO_BIN_EXE_su3lab"))
        .arg("experiment")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("\"seed\""), "{stderr}");

    let out = dir.path().join("r.json");
    let code = su3lab(&["experiment", path_str(&cfg), "--seed", "5", "--out", path_str(&out)]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["manifest"]["seed"], 5);
}

#[test]
fn failed_threshold_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "m.cfg",
        "kind = mcg_orbit_distribution\nc_spec = trace=0.1,0.3\nN = 40\nword_length = 10\nseed = 2\nks_threshold = 1e-9\n",
    );
    let out = dir.path().join("r.json");
    assert_eq!(su3lab(&["experiment", path_str(&cfg), "--out", path_str(&out)]), 1);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert_eq!(report["pass_ks"], false);
}

#[test]
fn order_three_coset_is_periodic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.cfg",
        "# a of order three\nkind = coset_twist_orbit\nN = 300\nseed = 4\na_angles = 0, 0.3333333333333333\nreference_samples = 1000\n",
    );
    let out = dir.path().join("r.json");
    assert_eq!(su3lab(&["experiment", path_str(&cfg), "--out", path_str(&out)]), 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    // stats hold one entry per trial
    assert_eq!(report["periodic"], serde_json::json!([true]));
    assert_eq!(report["period"], serde_json::json!([3]));
}

#[test]
fn experiment_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        "kind = submersion_census\nc_spec = angles=0.11,0.29\nN = 40\ntrials = 2\nseed = 8\n",
        "kind = abelian_hyperbolic_test\nword = aba\nN = 2000\nreference_samples = 2000\nseed = 8\n",
        "kind = mcg_orbit_distribution\nN = 30\nword_length = 8\nseed = 8\n",
    ];
    for (i, text) in configs.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("{i}.cfg"), text);
        let x = dir.path().join(format!("{i}_x.json"));
        let y = dir.path().join(format!("{i}_y.json"));
        let cx = su3lab(&["experiment", path_str(&cfg), "--out", path_str(&x)]);
        let cy = su3lab(&["experiment", path_str(&cfg), "--out", path_str(&y)]);
        assert_eq!(cx, cy);
        assert!(cx <= 1, "{text}");
        assert_eq!(report_without_manifest(&x), report_without_manifest(&y), "{text}");
    }
}
