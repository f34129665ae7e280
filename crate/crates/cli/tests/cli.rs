use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn qgs(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qgs")).args(args).output().expect("run qgs");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn haar_check_on_c4() {
    let (code, v, _) = qgs(&["haar-check", "--graph", &data("c4.graph")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "qgs/1");
    assert_eq!(v["result"]["passed"], true);
    for b in v["result"]["bases"].as_array().unwrap() {
        assert!(b["left_invariance"]["value"].as_f64().unwrap() < 1e-9);
        assert_eq!(b["left_invariance"]["regime"], "float");
    }
}

#[test]
fn mu_ratio_on_grandparent() {
    let (code, v, _) = qgs(&["mu", "--provider", &data("grandparent3.json"), "--radius", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["parent_child_ratio"]["value"], "2");
    // one trusted vertex cannot decide
    assert!(v["result"]["unimodular"].is_null());
    let (_, v, _) = qgs(&["mu", "--provider", &data("grandparent3.json"), "--radius", "6"]);
    assert_eq!(v["result"]["unimodular"], false);
}

#[test]
fn malformed_graph_reports_line() {
    let (code, _, err) = qgs(&["orbits", "--graph", &data("bad.graph")]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qgs(&["orbits", "--bogus"]).0, 1);
    assert_eq!(qgs(&["nosuch"]).0, 1);
    assert_eq!(qgs(&["orbits"]).0, 1);
    assert_eq!(qgs(&["orbits", "--graph", &data("c4.graph"), "--category", "weird"]).0, 1);
}

#[test]
fn orbit_examples() {
    let (_, v, _) = qgs(&["orbits", "--graph", &data("p3.graph")]);
    assert_eq!(v["result"]["orbit_count"]["value"], 2);
    assert_eq!(v["result"]["compact"], true);
    let (_, v, _) = qgs(&["orbits", "--graph", &data("c4.graph")]);
    assert_eq!(v["result"]["orbit_count"]["value"], 1);
    let (code, v, _) = qgs(&["orbits", "--provider", &data("tree3.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["orbits_seen"]["value"], 1);
    assert_eq!(v["result"]["compact"], "noncompact");
    assert_eq!(v["result"]["exactness"]["kind"], "depth_bounded");
}

#[test]
fn budget_exhaustion_exits_two() {
    let (code, _, _) = qgs(&["mu", "--provider", &data("tree3.json"), "--budget-vertices", "10"]);
    assert_eq!(code, 2);
}

#[test]
fn haar_refuses_infinite_provider() {
    assert_eq!(qgs(&["haar-check", "--provider", &data("tree3.json")]).0, 3);
}

#[test]
fn reports_are_deterministic_and_echo_config() {
    let path = std::env::temp_dir().join("qgs_det.json");
    let run = || {
        let (code, _, _) = qgs(&["dims", "--graph", &data("c4.graph"), "--seed", "7", "--out", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        std::fs::read_to_string(&path).unwrap()
    };
    let ta = run();
    assert_eq!(ta, run());
    let v: Value = serde_json::from_str(&ta).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["command"], "dims");
}

#[test]
fn planar_iso_verdicts() {
    let (_, v, _) = qgs(&["planar-iso", "--g1", &data("c4.graph"), "--g2", &data("p4.graph"), "--depth", "4"]);
    assert_eq!(v["result"]["status"], "distinguished");
    assert!(v["result"]["witness"].is_object());
    let (_, v, _) = qgs(&["planar-iso", "--g1", &data("c4.graph"), "--g2", &data("c4.graph")]);
    assert_eq!(v["result"]["status"], "indistinguishable_up_to_depth");
}

#[test]
fn quantize_free_product_of_involutions() {
    let (code, v, _) = qgs(&["quantize", "--group", &data("z2x4.json"), "--nmax", "6"]);
    assert_eq!(code, 0);
    let ranks: Vec<i64> = v["result"]["ranks"].as_array().unwrap().iter().map(|r| r["rank"]["value"].as_i64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 3, 12]);
}
