use std::process::Command;

use hnkit_cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> hnkit_cli::Outcome {
    let mut argv = vec!["hnkit".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn json(args: &[&str]) -> Value {
    let out = call(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str::<Value>(&out.stdout).unwrap()["result"].clone()
}

#[test]
fn hn_reports_blocks_and_type() {
    let r = json(&["hn", "gl4: 3:1,1:2,-2:1"]);
    assert_eq!(r["filtration"]["blocks"], serde_json::json!([["3:1"], ["1:2"], ["-2:1"]]));
    assert_eq!(r["hn_type"], serde_json::json!(["3", "1/2", "1/2", "-2"]));
    assert_eq!(r["semistable"], Value::Bool(false));
}

#[test]
fn hn_of_decorated_bundles() {
    let r = json(&["hn", "sp4: 2:1 | z=2"]);
    assert_eq!(r["hn_type"], serde_json::json!(["2", "0"]));
    assert_eq!(r["filtration"]["middle"], serde_json::json!(["0:2"]));
    assert_eq!(r["parabolic"], serde_json::json!(["a1,2"]));
    let r = json(&["hn", "so6: 1:2 | z=2"]);
    assert_eq!(r["filtration"]["rank_flag"], Value::Bool(true));
    assert_eq!(r["parabolic"], serde_json::json!(["a2,3", "a2+a3"]));
    let r = json(&["hn", "so4: deg=1,0"]);
    assert_eq!(r["hn_type"], serde_json::json!(["1", "0"]));
}

#[test]
fn semistable_command() {
    assert_eq!(json(&["semistable", "gl2: 1:1, 1:1"])["semistable"], Value::Bool(true));
    assert_eq!(json(&["semistable", "sl3: 1:1, -1:2"])["semistable"], Value::Bool(false));
}

#[test]
fn fundamental_groups() {
    let r = json(&["pi1", "--family", "so", "--rank", "7"]);
    assert_eq!((r["der"].as_str(), r["pi1"].as_str(), r["ab"].as_str()), (Some("Z/2"), Some("Z/2"), Some("1")));
    let r = json(&["pi1", "--family", "gl", "--rank", "4", "--levi", "2"]);
    assert_eq!(r["pi1"], "Z^2");
    assert_eq!(r["psi_denominators"], serde_json::json!([2, 2]));
    assert_eq!(call(&["pi1", "--family", "gl", "--rank", "4", "--levi", "0"]).code, 1);
    assert_eq!(call(&["pi1", "--family", "gl", "--rank", "4", "--levi", "9"]).code, 2);
}

#[test]
fn canon_with_oracle() {
    let r = json(&["canon", "--family", "sp", "--deg", "1,1", "--oracle"]);
    assert_eq!(r["parabolic"], serde_json::json!(["2a2"]));
    assert_eq!(r["oracle"]["max_degree"], 6);
    assert_eq!(r["oracle"]["canonical_is_unique_maximal"], Value::Bool(true));
    let r = json(&["canon", "--family", "so", "--rank", "5", "--deg", "-1,2"]);
    assert_eq!(r["mu"], serde_json::json!(["2", "1"]));
    assert_eq!(r["obstruction_class"], "(1)");
    assert_eq!(call(&["canon", "--family", "sl", "--deg", "1,0"]).code, 2);
    assert_eq!(call(&["canon", "--family", "gl", "--deg", "1,x"]).code, 1);
}

#[test]
fn vertical_degree_command() {
    let r = json(&["vdeg", "--family", "sp", "--E", "0,6", "--F", "2,1"]);
    assert_eq!(r["vertical_degree"], -12);
    assert_eq!(r["composite"], -12);
    assert_eq!(call(&["vdeg", "--family", "sp", "--E", "1,6", "--F", "2,1"]).code, 2);
    assert_eq!(call(&["vdeg", "--family", "gl", "--E", "1", "--F", "2,1"]).code, 1);
}

#[test]
fn strata_command_and_dot_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.dot");
    let r = json(&["strata", "--family", "gl", "--rank", "2", "--bound", "1", "--fix-type"]);
    assert_eq!(r["labels"].as_array().unwrap().len(), 2);
    assert_eq!(r["edges"].as_array().unwrap().len(), 1);
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
    let p = path.to_str().unwrap();
    json(&["strata", "--family", "gl", "--rank", "2", "--bound", "1", "--fix-type", "--dot", p]);
    let dot = std::fs::read_to_string(&path).unwrap();
    let g = hnkit::strata::parse_dot(&dot).unwrap();
    assert_eq!(g.nodes.len(), 2);
    assert_eq!(g.edges.len(), 1);
    let r = json(&["strata", "--family", "sp", "--rank", "2", "--bound", "1"]);
    assert_eq!(r["labels"].as_array().unwrap().len(), 2);
    let r = json(&["strata", "--family", "gl", "--rank", "2", "--bound", "2", "--fix-type", "-1"]);
    assert!(r["labels"].as_array().unwrap().iter().all(|l| {
        let mu: Vec<i64> = l["mu"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect();
        mu.iter().sum::<i64>() == -1
    }));
    assert_eq!(call(&["strata", "--family", "gl", "--rank", "5", "--bound", "1"]).code, 2);
}

#[test]
fn check_suites_pass() {
    for suite in ["hn", "canon", "hull", "lattice"] {
        let r = json(&["check", "--suite", suite, "--seed", "1", "--cases", "40"]);
        assert_eq!(r["failed"], 0, "{suite}");
        assert_eq!(r["passed"], 40);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["hn", "gl4: 3:1,1:2,-2:1"][..],
        &["canon", "--family", "gl", "--deg", "2,0,-1", "--oracle"],
        &["strata", "--family", "gl", "--rank", "3", "--bound", "1"],
        &["check", "--suite", "canon", "--seed", "7", "--cases", "20"],
        &["pi1", "--family", "sp", "--rank", "6", "--pretty"],
    ] {
        assert_eq!(call(args), call(args), "{args:?}");
    }
}

#[test]
fn rationals_are_never_decimal() {
    let out = call(&["hn", "gl3: 1:2, 0:1"]);
    assert!(out.stdout.contains("\"1/2\""));
    assert!(!out.stdout.contains("0.5"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hnkit");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["hn", "gl2: 1:1, 0:1"]), 0);
    assert_eq!(code(&["hn", "gl2: 1:1 0:1"]), 1);
    assert_eq!(code(&["hn", "sl2: 1:1, 0:1"]), 2);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    let out = Command::new(bin).args(["hn", "gl2: x"]).output().unwrap();
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("position"));
}
