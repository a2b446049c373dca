use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn catalog() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn entry(name: &str) -> String {
    catalog().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilgrade")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout of {args:?} is not JSON: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().expect("exit code"), v)
}

#[test]
fn heisenberg_report() {
    let (code, v) = json(&["--json", "report", &entry("heisenberg3.json")]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(v["command"], "report");
    assert_eq!(v["input"]["dim"], 3);
    assert_eq!(r["carnot"]["carnot"], true);
    assert_eq!(r["growth_degree"], 4);
    assert_eq!(r["class"], 2);
    assert_eq!(r["lower_series"], serde_json::json!([3, 1, 0]));
    assert_eq!(r["torus"]["rank"], 2);
    assert_eq!(r["torus"]["certificate"], "PROVEN-MAXIMAL");
    assert_eq!(r["classification"]["label"], "dis-cohopfian");
    assert_eq!(r["classification"]["dis_cohopfian"], true);
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn l55_is_not_carnot() {
    let (code, v) = json(&["--json", "report", &entry("l55.json")]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["carnot"]["carnot"], false);
    assert_eq!(r["class"], 3);
    assert_eq!(r["center_dim"], 1);
    assert_eq!(r["cone"]["contractable"], true);
}

#[test]
fn missing_extension_falls_back_to_json() {
    let (code, v) = json(&["--json", "carnot", &entry("l53")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["carnot"], true);
}

#[test]
fn nonexistent_file_is_an_input_error() {
    let (code, v) = json(&["--json", "report", "/nonexistent/algebra.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");

    let out = run(&["report", "/nonexistent/algebra.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn malformed_json_reports_the_position() {
    let dir = std::env::temp_dir().join(format!("nilgrade-cli-malformed-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\n  \"dim\": 2,\n  \"kind\": \"lie\",\n  \"basis\": [\"a\" \"b\"]\n}\n").unwrap();
    let (code, v) = json(&["--json", "report", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["message"].as_str().unwrap().contains("line 4"));
}

#[test]
fn printed_tables_fail_validation() {
    for name in ["invalid/g12.json", "invalid/h12.json"] {
        let (code, v) = json(&["--json", "report", &entry(name)]);
        assert_eq!(code, 2, "{name}");
        assert_eq!(v["error"]["kind"], "validation");
        let violations = v["error"]["violations"].as_array().unwrap();
        assert!(!violations.is_empty());
        assert!(violations.iter().all(|m| m.as_str().unwrap().contains("Jacobi")));
        assert!(v["input"]["sha256"].is_string());
    }
}

fn catalog_inputs(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            let name = p.file_name().unwrap().to_str().unwrap();
            name.ends_with(".json") && !name.ends_with(".expected.json")
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reports_match_the_expected_documents() {
    let mut checked = 0;
    for dir in [catalog(), catalog().join("invalid")] {
        for input in catalog_inputs(&dir) {
            let expected_path = input.with_extension("expected.json");
            let expected: Value = serde_json::from_str(&std::fs::read_to_string(&expected_path).unwrap()).unwrap();
            let (code, actual) = json(&["--json", "report", input.to_str().unwrap()]);
            assert_eq!(actual, expected, "{}", input.display());
            let expected_code = expected["error"]["exit_code"].as_i64().unwrap_or(0) as i32;
            assert_eq!(code, expected_code, "{}", input.display());
            checked += 1;
        }
    }
    assert_eq!(checked, 15);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let file = entry("l55.json");
    for args in [
        vec!["--json", "report"],
        vec!["--json", "--seed", "7", "torus"],
        vec!["--json", "systole", "--m", "2,3"],
    ] {
        let mut a = args.clone();
        a.push(&file);
        let first = run(&a);
        let second = run(&a);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn timings_only_on_request() {
    let (_, v) = json(&["--json", "--timings", "report", &entry("l56.json")]);
    let t = v["timings_ms"].as_object().expect("timings present");
    assert!(t.contains_key("torus"));
    assert!(t.values().all(|x| x.as_f64().unwrap() >= 0.0));
}

#[test]
fn batch_covers_the_catalog_in_name_order() {
    let (code, v) = json(&["--json", "batch", catalog().to_str().unwrap()]);
    assert_eq!(code, 0);
    let files: Vec<&str> = v["files"].as_array().unwrap().iter().map(|f| f["file"].as_str().unwrap()).collect();
    assert_eq!(files.len(), 13);
    assert!(files.windows(2).all(|w| w[0] < w[1]));
    assert!(!files.iter().any(|f| f.contains("expected")));

    // Each entry carries the same report as the single-file command.
    let heis = v["files"].as_array().unwrap().iter().find(|f| f["file"] == "heisenberg3.json").unwrap();
    let (_, single) = json(&["--json", "report", &entry("heisenberg3.json")]);
    assert_eq!(heis["report"], single["result"]);
}

#[test]
fn batch_exit_code_is_the_worst_file() {
    let (code, v) = json(&["--json", "batch", catalog().join("invalid").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["files"].as_array().unwrap().iter().all(|f| f["exit_code"] == 2));
    let out = run(&["batch", catalog().join("invalid").to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("g12.json"));
}

#[test]
fn carnot_grading_and_derivation() {
    let (code, v) = json(&["--json", "carnot", &entry("l57.json")]);
    assert_eq!(code, 0);
    let dims: Vec<i64> =
        v["result"]["grading"].as_array().unwrap().iter().map(|c| c["dim"].as_i64().unwrap()).collect();
    assert_eq!(dims.iter().sum::<i64>(), 5);
    assert!(v["result"]["derivation"].is_array());

    let (_, v) = json(&["--json", "carnot", &entry("l56.json")]);
    assert_eq!(v["result"]["carnot"], false);
    assert!(v["result"]["certificate_equations"].as_u64().unwrap() > 0);
}

#[test]
fn growth_of_l56() {
    let (code, v) = json(&["--json", "growth", &entry("l56.json")]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["growth_degree"], 11);
    assert_eq!(r["homogeneous_dimension"], 15);
    assert_eq!(r["grading"], "fine-nonnegative");
}

#[test]
fn defendo_indices_match() {
    for name in ["heisenberg3.json", "l56.json"] {
        let (code, v) = json(&["--json", "defendo", &entry(name)]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(v["result"]["passed"], true, "{name}");
    }
}

#[test]
fn systole_slope_of_heisenberg_is_the_growth_degree() {
    let (code, v) = json(&["--json", "systole", "--m", "2,3,4", &entry("heisenberg3.json")]);
    assert_eq!(code, 0);
    let slope = v["result"]["experiment"]["slope"].as_f64().unwrap();
    assert!((slope - 4.0).abs() < 1e-9, "{slope}");
    assert_eq!(v["result"]["experiment"]["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn systole_needs_a_positive_grading() {
    let (code, v) = json(&["--json", "systole", &entry("h16.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "precondition");
}

#[test]
fn precondition_failures_exit_with_two() {
    // assoc4 is associative, not Lie.
    let (code, v) = json(&["--json", "cohopf", &entry("assoc4.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "precondition");
}

#[test]
fn cohopf_with_an_automorphism() {
    let dir = std::env::temp_dir().join(format!("nilgrade-cli-xi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let xi = dir.join("xi.json");
    std::fs::write(&xi, r#"[["2","0","0"],["0","1/2","0"],["0","0","1"]]"#).unwrap();
    let (code, v) = json(&["--json", "cohopf", &entry("heisenberg3.json"), "--automorphism", xi.to_str().unwrap()]);
    let wrong = dir.join("wrong.json");
    std::fs::write(&wrong, r#"[["1","0"],["0","1"]]"#).unwrap();
    let (wrong_code, _) =
        json(&["--json", "cohopf", &entry("heisenberg3.json"), "--automorphism", wrong.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();

    assert_eq!(code, 0);
    let a = &v["result"]["automorphism"];
    assert_eq!(a["is_automorphism"], true);
    assert_eq!(a["stabilizes_some_lattice"], false);
    assert_eq!(a["preserves_some_lattice"], false);
    assert_eq!(a["absolute_grading"]["components"].as_array().unwrap().len(), 3);
    assert_eq!(wrong_code, 2);
}

#[test]
fn text_output_is_readable() {
    let out = run(&["report", &entry("heisenberg3.json")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("carnot       yes"));
    assert!(text.contains("dis-cohopfian"));
}
