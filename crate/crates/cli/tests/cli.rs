//! End-to-end runs of the binary: artifact formats, manifests, exit codes,
//! and byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphere-turan"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sphere-turan-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn construct_writes_complex_and_manifest() {
    let dir = tmpdir("construct");
    let out = run(&["construct", "cross-polytope", "--d", "3", "--out", "c16.json"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let complex: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("c16.json")).unwrap()).unwrap();
    assert_eq!(complex["d"], 3);
    assert_eq!(complex["facets"].as_array().unwrap().len(), 16);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("c16.json.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["artifact_version"], 1);
    assert_eq!(manifest["outputs"][0]["path"], "c16.json");
}

#[test]
fn validation_errors_exit_2() {
    let dir = tmpdir("exit2");
    let out = run(&["construct", "cycle", "--k", "2", "--out", "bad.json"], &dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("bad.json").exists(), "no partial outputs on error");
    // Unknown family is a usage error, also 2.
    let out = run(&["construct", "dodecahedron", "--out", "x.json"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tmpdir("exit3");
    // A tree is never a closed sphere; with m facets and one attempt the
    // search must give up.
    let out = run(
        &[
            "construct", "2lc", "--d", "2", "--m", "5", "--seed", "1", "--max-attempts", "0",
            "--out", "x.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.join("x.json").exists());
}

#[test]
fn check_reports_verdicts() {
    let dir = tmpdir("check");
    run(&["construct", "simplex-boundary", "--d", "3", "--out", "s3.json"], &dir);
    let out = run(&["check", "--in", "s3.json"], &dir);
    assert!(out.status.success());
    let verdict: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verdict json on stdout");
    assert_eq!(verdict["status"], "yes");
    assert!(verdict["reason"]["shelling"]["order"].is_array());

    run(&["construct", "tree", "--d", "2", "--m", "4", "--seed", "3", "--out", "tree.json"], &dir);
    let out = run(&["check", "--in", "tree.json"], &dir);
    assert!(out.status.success());
    let verdict: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["status"], "no");
}

#[test]
fn sample_pipeline_witness_flow() {
    let dir = tmpdir("flow");
    let out = run(
        &["census", "s2", "--max-n", "6", "--out", "census.csv", "--catalog-out", "catalog.json"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        std::fs::read_to_string(dir.join("census.csv")).unwrap(),
        "key,count\n4,1\n5,1\n6,2\n"
    );

    let out = run(
        &[
            "pipeline", "--n", "50", "--d", "2", "--epsilon", "0.3", "--catalog", "catalog.json",
            "--seed", "11", "--report", "report.json", "--out", "final.json",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    let sampled = report["sampled_facets"].as_u64().unwrap();
    let altered = report["altered_facets"].as_u64().unwrap();
    let rainbow = report["rainbow_facets"].as_u64().unwrap();
    assert!(sampled >= altered && altered >= rainbow);
    assert!(report["density_statistic"].as_f64().unwrap() > 0.0);

    // Verify the final complex against the catalog from a fresh process.
    run(&["construct", "cross-polytope", "--d", "2", "--out", "oct.json"], &dir);
    let out = run(&["embed-count", "--host", "final.json", "--pattern", "oct.json"], &dir);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["copies"], 0);

    // Dense host: the witness must find a verified sphere.
    let out = run(
        &["sample", "--n", "50", "--d", "2", "--p", "0.57", "--seed", "4", "--out", "dense.json"],
        &dir,
    );
    assert!(out.status.success());
    let out = run(&["witness", "--in", "dense.json", "--out", "sphere.json"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["check", "--in", "sphere.json"], &dir);
    let verdict: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["status"], "yes");

    // Sparse host exhausts the search.
    let out = run(
        &["sample", "--n", "50", "--d", "2", "--p", "0.01", "--seed", "4", "--out", "thin.json"],
        &dir,
    );
    assert!(out.status.success());
    let out = run(&["witness", "--in", "thin.json"], &dir);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn census_2lc_writes_counts() {
    let dir = tmpdir("census2lc");
    let out = run(
        &["census", "2lc", "--d", "2", "--m", "4", "--budget", "30", "--seed", "7", "--out",
            "lc.csv"],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("lc.csv")).unwrap();
    // The only 2-sphere with 4 facets: at most one class is reachable.
    assert!(csv == "key,count\n4,1\n" || csv == "key,count\n4,0\n");
}

#[test]
fn budget_env_var_limits_the_shelling_search() {
    let dir = tmpdir("budgetenv");
    run(&["construct", "simplex-boundary", "--d", "3", "--out", "s3.json"], &dir);
    let out = bin()
        .args(["check", "--in", "s3.json"])
        .env("SPHERE_TURAN_BUDGET", "1")
        .current_dir(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let verdict: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["status"], "unknown");
    assert_eq!(verdict["reason"], "budget_exhausted");
}

#[test]
fn malformed_catalog_is_rejected_at_load() {
    let dir = tmpdir("badcat");
    // A tree of simplices is not a sphere, so a catalog containing it must
    // fail validation before any sampling happens.
    run(&["construct", "tree", "--d", "2", "--m", "4", "--seed", "1", "--out", "tree.json"], &dir);
    let tree = std::fs::read_to_string(dir.join("tree.json")).unwrap();
    let catalog = format!(
        r#"{{"version":1,"growth_constant":1.0,"entries":[{{"name":"bogus","complex":{tree},"balanced":false,"f_vector":[1,6,9,4],"automorphisms":1,"labelings":1}}]}}"#
    );
    std::fs::write(dir.join("bad.json"), catalog).unwrap();
    let out = run(
        &[
            "pipeline", "--n", "30", "--d", "2", "--epsilon", "0.3", "--catalog", "bad.json",
            "--seed", "1", "--report", "r.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.join("r.json").exists());

    let out = run(&["pipeline", "--n", "30", "--d", "2", "--epsilon", "0.3", "--catalog",
        "missing.json", "--seed", "1", "--report", "r.json"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bounds_prints_exact_rationals() {
    let dir = tmpdir("bounds");
    let out = run(&["bounds", "--d", "3"], &dir);
    assert!(out.status.success());
    let table: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(table["lower"], serde_json::json!([26, 7]));
    assert_eq!(table["upper"], serde_json::json!([15, 4]));
}

#[test]
fn reruns_are_byte_identical() {
    let dir_a = tmpdir("rerun-a");
    let dir_b = tmpdir("rerun-b");
    let args = [
        "construct", "flip-seq", "--d", "2", "--steps", "40", "--seed", "99", "--out", "x.json",
        "--trace", "t.json", "--density", "d.csv",
    ];
    assert!(run(&args, &dir_a).status.success());
    assert!(run(&args, &dir_b).status.success());
    for name in ["x.json", "t.json", "d.csv", "x.json.manifest.json"] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }

    let args = [
        "sample", "--n", "40", "--d", "2", "--epsilon", "0.3", "--seed", "7", "--out", "y.json",
    ];
    assert!(run(&args, &dir_a).status.success());
    assert!(run(&args, &dir_b).status.success());
    assert_eq!(
        std::fs::read(dir_a.join("y.json")).unwrap(),
        std::fs::read(dir_b.join("y.json")).unwrap()
    );
}

#[test]
fn sweep_reports_slope() {
    let dir = tmpdir("sweep");
    run(&["census", "s2", "--max-n", "6", "--catalog-out", "catalog.json"], &dir);
    let out = run(
        &[
            "sweep", "--d", "2", "--n", "30,45,60", "--reps", "3", "--epsilon", "0.3",
            "--catalog", "catalog.json", "--seed", "5", "--csv", "sweep.csv",
        ],
        &dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["slope_defined"].as_bool().unwrap());
    let slope = summary["slope"].as_f64().unwrap();
    assert!(slope > 1.5 && slope < 3.5, "rough slope sanity at tiny scale: {slope}");
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert!(csv.starts_with("n,seed,sampled,altered,final\n"));
    assert_eq!(csv.lines().count(), 1 + 9);

    // Single-n sweeps have no slope.
    let out = run(
        &[
            "sweep", "--d", "2", "--n", "30", "--reps", "2", "--epsilon", "0.3", "--catalog",
            "catalog.json", "--seed", "5", "--csv", "one.csv",
        ],
        &dir,
    );
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!summary["slope_defined"].as_bool().unwrap());
    assert!(summary["slope"].is_null());
}
