use std::path::PathBuf;

use nilpc::cli::run;
use nilpc::format;
use nilpc_core::fixtures;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn nilpc(args: &[&str]) -> nilpc::cli::Outcome {
    let mut all = vec!["nilpc"];
    all.extend_from_slice(args);
    run(all)
}

fn json(args: &[&str]) -> Value {
    let out = nilpc(args);
    assert_eq!(out.code, 0, "{:?} failed: {}", args, out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn fixture_files_match_builtins() {
    for (name, p) in fixtures::all() {
        let path = fixture(&format!("{}.json", name.to_lowercase()));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, format::emit_presentation(name, &p), "{}", path);
        let v = json(&["check", &path]);
        assert_eq!(v["consistent"], true);
    }
}

#[test]
fn inconsistent_file_exits_one() {
    let dir = std::env::temp_dir().join("nilpc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad-heis.json");
    let text = std::fs::read_to_string(fixture("heis.json")).unwrap().replacen("0,\n    0,\n    0", "2,\n    0,\n    0", 1);
    std::fs::write(&path, text).unwrap();
    let out = nilpc(&["check", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["consistent"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nilpc(&["frobnicate"]).code, 2);
    assert_eq!(nilpc(&["check", "/nonexistent/file.json"]).code, 2);
    assert_eq!(nilpc(&["deform", &fixture("zg.json"), "--d", "x", "--c", "1"]).code, 2);
    assert_eq!(nilpc(&["primes"]).code, 2);

    let dir = std::env::temp_dir().join("nilpc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(nilpc(&["analyze", path.to_str().unwrap()]).code, 2);
}

#[test]
fn bad_deformation_data_exits_one() {
    // d must be coprime to e = 5
    let out = nilpc(&["deform", &fixture("zg.json"), "--d", "5", "--c", "1"]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    let out = nilpc(&["deform", &fixture("zg.json"), "--d", "2", "--c", "2"]);
    assert_eq!(out.code, 1, "{}", out.stderr);
}

#[test]
fn deform_reproduces_zk() {
    let out = nilpc(&["deform", &fixture("zg.json"), "--d", "2", "--c", "1", "--name", "ZK"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, std::fs::read_to_string(fixture("zk.json")).unwrap());
    let (_, p) = format::parse_presentation(&out.stdout).unwrap();
    assert_eq!(p, fixtures::zk());
}

#[test]
fn deform_output_round_trips() {
    for d in ["1", "2", "3", "4", "-1", "7"] {
        let out = nilpc(&["deform", &fixture("zg.json"), "--d", d, "--c", "-1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let (name, p) = format::parse_presentation(&out.stdout).unwrap();
        assert_eq!(format::emit_presentation(&name, &p), out.stdout);
    }
}

#[test]
fn zilber_witness_from_files() {
    let v = json(&[
        "inverse-pair",
        &fixture("zh.json"),
        &fixture("zk.json"),
        "--phi",
        &fixture("zh_to_zk.json"),
        "--psi",
        &fixture("zk_to_zh.json"),
    ]);
    assert_eq!(v["inverse"], true);
    let v = json(&["hom", &fixture("zk.json"), &fixture("zh.json"), "--map", &fixture("zk_to_zh.json"), "--verify"]);
    assert_eq!(v["certified"], true);
    assert_eq!(v["multiplicative"], true);
    assert_eq!(v["index"], 1);
}

#[test]
fn wrong_map_is_rejected_with_report() {
    // φ composed the wrong way round is not a homomorphism ZK → ZH
    let out = nilpc(&["hom", &fixture("zk.json"), &fixture("zh.json"), "--map", &fixture("zh_to_zk.json")]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["certified"], false);
}

#[test]
fn analysis_reports() {
    let v = json(&["analyze", &fixture("zg.json")]);
    assert_eq!(v["class"], 2);
    assert_eq!(v["key_subgroups"]["mn_invariants"], serde_json::json!([5]));
    assert_eq!(v["key_subgroups"]["regular"], false);

    let v = json(&["invariants", &fixture("heis.json")]);
    assert_eq!(v["invariants"]["regular"], true);
    assert_eq!(v["invariants"]["hirsch"], 3);

    let v = json(&["series", &fixture("f23.json"), "--kind", "lower"]);
    assert_eq!(v["result"]["series"]["terms"].as_array().unwrap().len(), 4);

    let v = json(&["scalars", &fixture("heis.json")]);
    assert_eq!(v["rings"]["A_R"]["periods"], serde_json::json!([0]));

    let v = json(&["adapt", &fixture("nr.json")]);
    assert_eq!(v["adapted"]["e"], 3);

    let v = json(&["enumerate", &fixture("zg.json")]);
    assert_eq!(v["bound"], 5);
    assert_eq!(v["realized"], 4);
    for c in v["classes"].as_array().unwrap() {
        assert_eq!(c["same_invariants"], true);
    }

    let v = json(&["primes", "--cyclic", "6"]);
    let ideals: Vec<&str> = v["factors"].as_array().unwrap().iter().map(|f| f["ideal"].as_str().unwrap()).collect();
    assert_eq!(ideals, ["(2)", "(3)"]);
}

#[test]
fn refined_series_report() {
    let v = json(&["series", &fixture("zg.json"), "--kind", "refined"]);
    assert!(v["result"]["lower"]["special_gap"]["periods"].is_array());
}

#[test]
fn outputs_are_deterministic() {
    let commands: Vec<Vec<String>> = vec![
        vec!["analyze".into(), fixture("zg.json")],
        vec!["scalars".into(), fixture("f23.json"), "--basis".into()],
        vec!["series".into(), fixture("nr.json"), "--kind".into(), "refined".into()],
        vec!["enumerate".into(), fixture("zg.json")],
        vec!["hom".into(), fixture("zh.json"), fixture("zk.json"), "--map".into(), fixture("zh_to_zk.json"), "--verify".into()],
    ];
    for c in commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let a = nilpc(&args);
        let b = nilpc(&args);
        assert_eq!(a.code, 0, "{:?}: {}", args, a.stderr);
        assert_eq!(a, b);
    }
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_nilpc"))
        .args(["invariants", &fixture("zh.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["name"], "ZH");
}
