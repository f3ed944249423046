use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn knotsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotsum")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn builtin_doc(name: &str) -> Value {
    // `shadow` on a fixture echoes the fixture's own shadow coloring
    let out = knotsum(&["shadow", "--builtin", name, "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    json_of(&out)
}

#[test]
fn exit_codes_on_valid_broken_and_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let good = builtin_doc("3_1");
    let good_path = write(dir.path(), "good.json", &good);
    assert_eq!(knotsum(&["verify", "--input", &good_path]).status.code(), Some(0));

    let mut broken_arc = good.clone();
    broken_arc["arc_colors"]["1"] = json!([{"u": [2, 1], "v": [0, 1]}, {"u": [1, 1], "v": [0, 1]}]);
    let p = write(dir.path(), "broken_arc.json", &broken_arc);
    for cmd in ["verify", "volume", "alexander"] {
        assert_eq!(knotsum(&[cmd, "--input", &p]).status.code(), Some(1), "{cmd}");
    }

    let mut broken_region = good.clone();
    broken_region["region_colors"]["2"] = json!([{"u": [7, 1], "v": [0, 1]}, {"u": [1, 1], "v": [0, 1]}]);
    let p = write(dir.path(), "broken_region.json", &broken_region);
    assert_eq!(knotsum(&["verify", "--input", &p]).status.code(), Some(1));
    assert_eq!(knotsum(&["volume", "--input", &p]).status.code(), Some(1));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let pd = dir.path().join("bad.pd");
    std::fs::write(&pd, "X(1,2,3)").unwrap();
    let mut missing = good.clone();
    missing["arc_colors"].as_object_mut().unwrap().remove("0");
    let missing = write(dir.path(), "missing.json", &missing);
    for args in [
        vec!["volume", "--input", garbage.to_str().unwrap()],
        vec!["parse", "--input", pd.to_str().unwrap()],
        vec!["volume", "--input", &missing],
        vec!["volume", "--input", "/nonexistent/file.json"],
        vec!["alexander", "--builtin", "3_1", "--remove-column", "9"],
        vec!["nonsense"],
        vec![],
    ] {
        assert_eq!(knotsum(&args).status.code(), Some(2), "{args:?}");
    }

    let floating = json_of(&knotsum(&["shadow", "--builtin", "3_1"]));
    let p = write(dir.path(), "floating.json", &floating);
    assert_eq!(knotsum(&["alexander", "--input", &p, "--mode", "exact"]).status.code(), Some(2));
    assert_eq!(knotsum(&["alexander", "--input", &p]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["volume", "--builtin", "3_1#4_1"],
        vec!["alexander", "--builtin", "4_1"],
        vec!["shadow", "--builtin", "4_1"],
        vec!["consum", "--builtin", "3_1", "--builtin", "4_1", "--arc1", "2", "--arc2", "0"],
        vec!["check-example"],
    ] {
        let a = knotsum(&args);
        let b = knotsum(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exact_alexander_of_trefoil() {
    let v = json_of(&knotsum(&["alexander", "--builtin", "3_1", "--mode", "exact"]));
    let one = json!({"u": [1, 1], "v": [0, 1]});
    assert_eq!(v["delta"], json!({"0": one, "2": one}));
    assert_eq!(v["division_remainder_norm"], json!(0.0));
}

#[test]
fn volume_fields() {
    let v = json_of(&knotsum(&["volume", "--builtin", "4_1"]));
    for key in ["w0", "vol", "cs", "max_residual", "residual_ok"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!((v["vol"].as_f64().unwrap() - 2.0299).abs() < 1e-3);
    let plus = json_of(&knotsum(&["volume", "--builtin", "4_1", "--x-root", "1"]));
    assert!((plus["vol"].as_f64().unwrap() + 2.0299).abs() < 1e-3);
}

#[test]
fn consum_factor_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let composite = dir.path().join("sum.json");
    let composite = composite.to_str().unwrap();
    let alternate = r#"[[{"u":[1,1],"v":[0,1]},{"u":[0,1],"v":[0,1]}],[{"u":[1,1],"v":[0,1]},{"u":[1,1],"v":[0,1]}]]"#;
    let out = knotsum(&[
        "consum",
        "--builtin",
        "3_1",
        "--builtin",
        "4_1",
        "--arc1",
        "2",
        "--arc2",
        "0",
        "--mode",
        "exact",
        "--conjugator",
        alternate,
        "--output",
        composite,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(composite).unwrap()).unwrap();
    assert_eq!(doc["conjugator_kind"], "matrix");
    assert!(doc.get("splice").is_some());

    let parts = json_of(&knotsum(&["factor", "--input", composite, "--mode", "exact"]));
    assert_eq!(parts["left"]["arc_colors"], builtin_doc("3_1")["arc_colors"]);

    let vol = |args: &[&str]| json_of(&knotsum(args))["vol"].as_f64().unwrap();
    let total = vol(&["volume", "--input", composite]);
    let left = write(dir.path(), "left.json", &parts["left"]);
    let right = write(dir.path(), "right.json", &parts["right"]);
    let sum = vol(&["volume", "--input", &left]) + vol(&["volume", "--input", &right]);
    assert!((total - sum).abs() < 1e-9);
    assert!((total - 2.0299).abs() < 1e-3);

    // a conjugator that does not carry arc2 onto arc1 is an input error
    let wrong = r#"[[1,0],[0,1]]"#;
    let out = knotsum(&[
        "consum",
        "--builtin",
        "3_1",
        "--builtin",
        "4_1",
        "--arc1",
        "0",
        "--arc2",
        "0",
        "--conjugator",
        wrong,
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_round_trips_through_wirtinger() {
    let dir = tempfile::tempdir().unwrap();
    let pd = dir.path().join("trefoil.pd");
    std::fs::write(&pd, "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
    let parsed = knotsum(&["parse", "--input", pd.to_str().unwrap()]);
    assert_eq!(parsed.status.code(), Some(0));
    let diagram = write(dir.path(), "trefoil.json", &json_of(&parsed));
    let w = json_of(&knotsum(&["wirtinger", "--input", &diagram]));
    assert_eq!(w["generators"], json!([0, 1, 2]));
    assert_eq!(w["relators"].as_array().unwrap().len(), 3);
}

#[test]
fn check_example_passes() {
    let out = knotsum(&["check-example"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}
