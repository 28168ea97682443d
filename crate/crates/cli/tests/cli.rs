use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pindist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pindist"))
        .args(args)
        .env_remove("PINDIST_THREADS")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn reports(dir: &Path) -> Vec<(String, serde_json::Value)> {
    let mut entries: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    entries
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), json(p)))
        .collect()
}

#[test]
fn verify_full_plane_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let o = pindist(&["verify", "--p", "3", "--d", "2", "--set", "full", "--a", "2/1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rs = reports(&out);
    assert!(rs.len() >= 4);
    for (name, r) in &rs {
        assert_eq!(r["schema"], "pindist-report/1", "{name}");
        assert_eq!(r["passed"], true, "{name}");
        assert_eq!(r["field"]["p"], 3);
    }
    let checks: Vec<&str> = rs.iter().map(|(_, r)| r["check"].as_str().unwrap()).collect();
    assert!(checks.contains(&"main_theorem"));
    assert!(checks.contains(&"second_moment_identity"));
}

#[test]
fn even_characteristic_is_rejected() {
    let o = pindist(&["verify", "--p", "2", "--d", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn decimal_parameter_is_rejected() {
    let o = pindist(&["verify", "--p", "3", "--a", "1.5"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn cap_is_enforced() {
    let o = pindist(&["sweep", "--p", "101", "--d", "3", "--cap", "1000"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_extension_field_random_set() {
    let o = pindist(&["verify", "--p", "3", "--k", "2", "--d", "2", "--set", "random:20:seed=1", "--a", "3/2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rs: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(rs.iter().all(|r| r["passed"] == true));
    let set_checks = rs.iter().filter(|r| r["check"] != "field_axioms" && r["check"] != "bisector");
    assert!(set_checks.into_iter().all(|r| r["set_spec"] == "random:20:seed=1"));
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let o = pindist(&["sweep", "--p", "3", "--d", "2", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("pin_index,second_moment,pinned_count"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.ends_with(",33,3")));
    let summary = json(&dir.path().join("sweep.summary.json"));
    assert_eq!(summary["total_second_moment"], 297);
    assert_eq!(summary["identity_rhs"], 297);
    assert_eq!(summary["totals_match"], true);
}

#[test]
fn sweep_backends_write_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for backend in ["naive", "dft"] {
        let path = dir.path().join(format!("{backend}.csv"));
        let o = pindist(&[
            "sweep", "--p", "5", "--d", "3", "--set", "random:30:seed=7", "--backend", backend, "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        csvs.push(fs::read_to_string(path).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn experiment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = pindist(&[
            "experiment", "--p", "7", "--d", "2", "--sizes", "7,14,49", "--trials", "20", "--seed", "100", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(path).unwrap()
    };
    let first = run("a.csv");
    assert_eq!(first, run("b.csv"));
    let rows: Vec<Vec<&str>> = first.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 60);
    assert_eq!(rows[0][2], "100");
    // The whole plane succeeds at every pin.
    for row in rows.iter().filter(|r| r[0] == "49") {
        assert_eq!(row[5], "1.000000");
    }
}

#[test]
fn reports_reproduce_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let run = || {
        let _ = fs::remove_dir_all(&out);
        let o = pindist(&[
            "verify", "--p", "5", "--d", "2", "--set", "random:12:seed=3", "--a", "3/2", "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        reports(&out)
            .into_iter()
            .map(|(name, mut r)| {
                r["metadata"].as_object_mut().unwrap().remove("timestamp");
                (name, r)
            })
            .collect::<Vec<_>>()
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    assert!(a.iter().all(|(_, r)| r["metadata"]["content_hash"].as_str().unwrap().len() == 64));
}

#[test]
fn field_info_reports_modulus() {
    let o = pindist(&["field-info", "--p", "5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["q"], 25);
    assert_eq!(v["modulus"], serde_json::json!([1, 1, 1]));
}
