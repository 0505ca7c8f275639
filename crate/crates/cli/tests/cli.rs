//! Black-box tests of the `noncoherent` binary: exit codes, worked examples,
//! golden files and JSON schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const EPOCH: &str = "1700000000";

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noncoherent"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("SOURCE_DATE_EPOCH", EPOCH)
        .env_remove("NONCOHERENT_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).expect("JSON output")
}

fn code(args: &[&str]) -> i32 {
    cli(args).status.code().expect("exit code")
}

fn docs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas")
}

fn assert_schema(name: &str, doc: &Value) {
    let text = std::fs::read_to_string(docs().join(format!("{name}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["capacity", "--q", "2", "--T", "2", "--m", "1", "--n", "1"]), 0);
    assert_eq!(code(&["capacity", "--q", "6", "--T", "2", "--m", "1", "--n", "1"]), 2);
    assert_eq!(code(&["capacity", "--q", "2", "--T", "2", "--m", "1"]), 2);
    assert_eq!(code(&["capacity", "--q", "2", "--T", "2", "--m", "1", "--n", "1", "--bogus"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["capacity", "--q", "2", "--T", "2", "--m", "1", "--n", "1", "--tol", "0"]), 2);
    assert_eq!(code(&["capacity", "--q", "3", "--T", "6", "--m", "3", "--n", "3", "--tol", "1e-300"]), 3);
    assert_eq!(code(&["bounds", "erasure", "--q", "2", "--T", "3", "--m", "2", "--dist", "2:1"]), 2);
    assert_eq!(code(&["oracle", "rref", "tests/data/missing.txt"]), 1);
    assert_eq!(code(&["mac-sim", "--d1", "3", "--d2", "1", "--q", "2", "--n", "2", "--T", "6"]), 2);
}

#[test]
fn regime_errors_name_the_inequality() {
    let out = cli(&["bounds", "erasure", "--q", "2", "--T", "3", "--m", "2", "--dist", "2:1"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("m <= floor(T/2)"), "{err}");
}

#[test]
fn capacity_example_matches_grid_search() {
    let doc = json(&["capacity", "--q", "2", "--T", "2", "--m", "1", "--n", "1"]);
    // α = (a, 1 − a): output 0 w.p. a + (1 − a)/2, each of the 3 lines w.p. (1 − a)/6;
    // a line input is received intact or erased with probability 1/2 each.
    let mi = |a: f64| {
        let p0 = a + (1.0 - a) / 2.0;
        let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
        h(p0) + 3.0 * h((1.0 - a) / 6.0) - (1.0 - a) * 2.0 * h(0.5)
    };
    let grid = (0..=100_000).map(|i| mi(i as f64 / 100_000.0)).fold(f64::MIN, f64::max);
    assert!((f(&doc["capacity_bits"]) - grid).abs() < 1e-6, "{} vs {grid}", doc["capacity_bits"]);
}

#[test]
fn region_example() {
    let doc = json(&["region", "--m1", "4", "--m2", "3", "--n", "3", "--T", "14"]);
    assert_eq!(doc["corners"], serde_json::json!([[0, 33], [33, 0]]));
    assert_eq!(doc["count"], 2);
    let csv = ok(&["region", "--m1", "4", "--m2", "3", "--n", "3", "--T", "14", "--csv"]);
    assert!(csv.starts_with("# manifest: {"));
    assert!(csv.lines().nth(1) == Some("region,vertex,r1,r2"));
}

#[test]
fn sweep_asymptote_column_is_constant() {
    let csv = ok(&["sweep", "--m", "11", "--n", "7", "--T", "14", "--qlist", "2,3,4,5,7,8,9,11,13,16"]);
    let rows: Vec<&str> = csv.lines().skip(2).collect();
    assert_eq!(rows.len(), 10);
    for r in rows {
        let cols: Vec<f64> = r.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[2], 49.0);
        assert!(cols[1] > 0.0 && cols[1] < 49.0, "{r}");
    }
}

#[test]
fn table1_covers_both_regimes() {
    let csv = ok(&["table1", "--m", "2", "--n", "2", "--qlist", "2,4"]);
    let regimes: std::collections::BTreeSet<&str> =
        csv.lines().skip(2).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(regimes.len(), 2, "{csv}");
}

#[test]
fn golden_outputs() {
    let cases: [(&str, &[&str]); 5] = [
        ("capacity.json", &["capacity", "--q", "2", "--T", "2", "--m", "1", "--n", "1"]),
        ("region.json", &["region", "--m1", "4", "--m2", "3", "--n", "3", "--T", "14"]),
        ("mac-sim.json", &["mac-sim", "--d1", "1", "--d2", "1", "--q", "2", "--n", "2", "--T", "6", "--trials", "2048", "--seed", "7"]),
        ("sweep.csv", &["sweep", "--m", "2", "--n", "2", "--T", "5", "--qlist", "2,3,4"]),
        ("oracle-rref.json", &["oracle", "rref", "tests/data/rref.txt"]),
    ];
    for (file, args) in cases {
        assert_eq!(ok(args), golden(file), "{file}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("noncoherent-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("region.json");
    let args = ["region", "--m1", "4", "--m2", "3", "--n", "3", "--T", "14"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(ok(&with_out), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), ok(&args));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn manifest_records_parameters() {
    let doc = json(&["capacity", "--q", "4", "--T", "5", "--m", "2", "--n", "1"]);
    let m = &doc["manifest"];
    assert_eq!(m["command"], "capacity");
    assert_eq!(m["timestamp"], 1_700_000_000u64);
    assert_eq!(m["params"]["T"], 5);
    assert_eq!(m["params"]["method"], "optimize");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn json_outputs_match_schemas() {
    let cases: [(&str, &[&str]); 14] = [
        ("capacity", &["capacity", "--q", "3", "--T", "5", "--m", "2", "--n", "2"]),
        ("capacity", &["capacity", "--q", "3", "--T", "5", "--m", "2", "--n", "2", "--method", "exactT"]),
        ("capacity", &["capacity", "--q", "3", "--T", "5", "--m", "2", "--n", "2", "--method", "asymptotic"]),
        ("support", &["support", "--q", "64", "--T", "9", "--m", "4", "--n", "3", "--qlist", "2,4,8"]),
        ("support", &["support", "--q", "2", "--T", "4", "--m", "2", "--n", "2"]),
        ("region", &["region", "--m1", "2", "--m2", "1", "--n", "2", "--T", "8"]),
        ("mac-sim", &["mac-sim", "--d1", "1", "--d2", "1", "--q", "2", "--n", "2", "--T", "6", "--trials", "100"]),
        ("simulate", &["simulate", "--q", "2", "--T", "4", "--m", "2", "--n", "2", "--trials", "100", "--dist", "tests/data/alpha.txt"]),
        ("simulate", &["simulate", "--q", "2", "--T", "5", "--m", "2", "--n", "2", "--trials", "100", "--erasure", "0:0.5,2:0.5"]),
        ("bounds-erasure", &["bounds", "erasure", "--q", "2", "--T", "8", "--m", "2", "--dist", "1:0.5,2:0.5"]),
        ("oracle-counts", &["oracle", "counts", "samesum", "--q", "2", "--T", "4", "--d1", "2", "--d2", "2", "--d12", "1"]),
        ("oracle-rref", &["oracle", "rref", "tests/data/rref.txt"]),
        ("oracle-span", &["oracle", "span", "tests/data/span.txt"]),
        ("oracle-enumerate", &["oracle", "enumerate", "--q", "3", "--T", "3", "--d", "1"]),
    ];
    for (name, args) in cases {
        assert_schema(name, &json(args));
    }
    assert_schema("oracle-check", &json(&["oracle", "check", "--q", "2", "--T", "3"]));
}

#[test]
fn schemas_reject_malformed_documents() {
    let mut doc = json(&["mac-sim", "--d1", "1", "--d2", "1", "--q", "2", "--n", "2", "--T", "6", "--trials", "10"]);
    doc.as_object_mut().unwrap().remove("rate");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(docs().join("mac-sim.schema.json")).unwrap()).unwrap();
    assert!(!jsonschema::is_valid(&schema, &doc));
}

#[test]
fn oracle_span_example() {
    let doc = json(&["oracle", "span", "tests/data/span.txt"]);
    assert_eq!(doc["sum"]["dim"], 3);
    assert_eq!(doc["intersection"]["dim"], 1);
    assert_eq!(doc["intersection"]["basis"], serde_json::json!([[0, 1, 0]]));
}

#[test]
fn simulate_reads_dimension_distribution() {
    let doc = json(&["simulate", "--q", "2", "--T", "4", "--m", "2", "--n", "2", "--trials", "4096", "--dist", "tests/data/alpha.txt"]);
    assert_eq!(doc["alpha"], serde_json::json!([0.25, 0.25, 0.5]));
    let hist: u64 = doc["histogram"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(hist, 4096);
}
