use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::TempDir;
use toric_mle::rational::{format_rational, rat};
use toric_mle_cli::selftest::{self, Context};
use toric_mle_cli::{run, selftest_outcome, CommandResult};

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn call(args: &[&str]) -> CommandResult {
    run(std::iter::once("toricmle").chain(args.iter().copied()))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn four_leaf(dir: &TempDir) -> (PathBuf, PathBuf) {
    let tree = write(dir, "t4.json", r#"{"edges": [["L1","u"],["L2","u"],["u","v"],["v","L3"],["v","L4"]]}"#);
    let data = write(
        dir,
        "u.json",
        r#"{"labels": ["00000","11000","00011","11011","10110","10101","01110","01101"],
            "counts": [17,5,27,5,16,5,19,6]}"#,
    );
    (tree, data)
}

#[test]
fn phylo_worked_example_by_every_method() {
    let dir = TempDir::new().unwrap();
    let (tree, data) = four_leaf(&dir);
    let expected = [
        ("00000", rat(121, 675)),
        ("11000", rat(11, 270)),
        ("00011", rat(176, 675)),
        ("11011", rat(8, 135)),
        ("10110", rat(147, 920)),
        ("10101", rat(231, 4600)),
        ("01110", rat(35, 184)),
        ("01101", rat(11, 184)),
    ];
    for method in ["direct", "horn", "tfp"] {
        let r = call(&["mle", "phylo", "--tree", path(&tree), "--data", path(&data), "--method", method]);
        assert_eq!(r.exit_code, 0, "{}", r.stdout);
        let est = r.envelope["payload"]["estimate"].as_array().unwrap();
        for (label, q) in &expected {
            let row = est.iter().find(|e| e["label"] == *label).unwrap();
            assert_eq!(row["value"], format_rational(q));
        }
        assert_eq!(r.envelope["diagnostics"]["birch_residual_exactly_zero"], true);
    }
}

#[test]
fn catalog_lists_sixteen_surfaces() {
    let r = call(&["catalog"]);
    assert_eq!(r.exit_code, 0);
    let entries = r.envelope["payload"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 16);
    let mld: Vec<u64> = entries.iter().map(|e| e["ml_degree"].as_u64().unwrap()).collect();
    let deg: Vec<u64> = entries.iter().map(|e| e["degree"].as_u64().unwrap()).collect();
    let drops: Vec<&str> = entries
        .iter()
        .filter(|e| e["ml_degree"] != e["degree"])
        .map(|e| e["label"].as_str().unwrap())
        .collect();
    assert_eq!(drops, ["5a"]);
    assert_eq!(deg.iter().sum::<u64>() - mld.iter().sum::<u64>(), 2);
}

#[test]
fn selftest_passes_and_filters() {
    let r = call(&["selftest"]);
    assert_eq!(r.exit_code, 0, "{}", r.stdout);
    assert_eq!(r.envelope["payload"]["failed"], 0);

    let r = call(&["selftest", "--filter", "table3"]);
    assert_eq!(r.exit_code, 0);
    let checks = r.envelope["payload"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 7);
    assert!(checks.iter().all(|c| c["name"].as_str().unwrap().starts_with("table3/")));
}

#[test]
fn corrupted_catalog_gives_a_named_failure() {
    let mut ctx = Context::default();
    let e = ctx.catalog.iter_mut().find(|e| e.label == "6b").unwrap();
    e.ml_degree = 5;
    let results = selftest::run(&ctx, None);
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    assert_eq!(failed, ["table1/6b"]);
    let (err, payload) = selftest_outcome(&results).unwrap_err();
    assert_eq!(err.exit_code(), 12);
    assert_eq!(payload.unwrap()["failed"], 1);

    let mut ctx = Context::default();
    ctx.veronese[1].pattern = [true; 4];
    let failed: Vec<String> =
        selftest::run(&ctx, Some("table3")).into_iter().filter(|r| !r.passed).map(|r| r.name).collect();
    assert_eq!(failed, ["table3/row-2"]);

    let mut ctx = Context::default();
    ctx.catalog.pop();
    let failed: Vec<String> =
        selftest::run(&ctx, Some("table1")).into_iter().filter(|r| !r.passed).map(|r| r.name).collect();
    assert_eq!(failed, ["table1/count", "table1/9"]);
}

#[test]
fn errors_have_distinct_exit_codes() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", r#"{"points": [[2,1],[1,2],[0,0],[1,1]]}"#);
    let malformed = write(&dir, "bad.json", r#"{"counts": [1, 2"#);
    let short = write(&dir, "short.json", r#"{"counts": [1, 2, 3]}"#);
    let (tree, _) = four_leaf(&dir);
    let bad_label = write(&dir, "lab.json", r#"{"labels": ["00001"], "counts": [3]}"#);

    let cases: Vec<(CommandResult, &str, i32)> = vec![
        (call(&["mle", "loglinear", "--model", path(&model), "--data", path(&malformed)]), "malformed_json", 4),
        (call(&["mle", "loglinear", "--model", path(&model), "--data", path(&short)]), "dimension_mismatch", 5),
        (call(&["frobnicate"]), "usage", 2),
        (call(&["mle", "phylo", "--tree", path(&tree), "--data", path(&bad_label)]), "unknown_label", 7),
        (call(&["mle", "loglinear", "--model", "/nonexistent.json", "--data", path(&short)]), "io", 3),
        (call(&["catalog", "--label", "10"]), "unknown_label", 7),
    ];
    for (r, code, exit) in cases {
        assert_eq!(r.envelope["status"], "error");
        assert_eq!(r.envelope["code"], code, "{}", r.stdout);
        assert_eq!(r.exit_code, exit);
        assert!(!r.envelope["message"].as_str().unwrap().is_empty());
    }
}

#[test]
fn invalid_tree_is_rejected() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.json", r#"{"edges": [["a","x"],["x","y"],["y","b"]]}"#);
    let r = call(&["horn", "--tree", path(&tree)]);
    assert_eq!((r.envelope["code"].as_str(), r.exit_code), (Some("invalid_tree"), 8));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", r#"{"points": [[2,1],[1,2],[0,0],[1,1]]}"#);
    let data = write(&dir, "d.json", r#"{"counts": [3,5,7,11]}"#);
    let (tree, u) = four_leaf(&dir);
    let runs: Vec<Vec<&str>> = vec![
        vec!["mle", "loglinear", "--model", path(&model), "--data", path(&data)],
        vec!["mle", "delpezzo", "--label", "3", "--data", path(&data)],
        vec!["mle", "phylo", "--tree", path(&tree), "--data", path(&u)],
        vec!["horn", "--tree", path(&tree)],
        vec!["catalog", "--format", "table"],
        vec!["selftest"],
    ];
    for args in runs {
        assert_eq!(call(&args).stdout, call(&args).stdout, "{args:?}");
    }
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", r#"{"points": [[2,1],[1,2],[0,0],[1,1]]}"#);
    let data = write(&dir, "d.json", r#"{"counts": [3,5,7,11]}"#);
    let r = call(&["mle", "loglinear", "--model", path(&model), "--data", path(&data)]);
    let text = r.envelope["payload"]["estimate"][0].to_string();
    let mantissa = text.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{text}");
}

#[test]
fn delpezzo_uniform_cubic() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.json", r#"{"counts": [1,1,1,1]}"#);
    let r = call(&["mle", "delpezzo", "--label", "3", "--data", path(&data)]);
    assert_eq!(r.exit_code, 0, "{}", r.stdout);
    let p = &r.envelope["payload"];
    assert!((p["x"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    for v in p["estimate"].as_array().unwrap() {
        assert!((v.as_f64().unwrap() - 0.25).abs() < 1e-12);
    }
}

#[test]
fn delpezzo_without_closed_form_falls_back_to_iterative_scaling() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.json", r#"{"counts": [4,1,3,2,5,2,7,1,3,6]}"#);
    let r = call(&["mle", "delpezzo", "--label", "9", "--data", path(&data)]);
    assert_eq!(r.exit_code, 0, "{}", r.stdout);
    let est: Vec<f64> = r.envelope["payload"]["estimate"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((est.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn veronese_rows() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", r#"{"C": [[-2,2,2],[2,-2,2],[2,2,-2]]}"#);
    let r = call(&["discriminant", "veronese", "-C", path(&c)]);
    assert_eq!(r.exit_code, 0, "{}", r.stdout);
    let p = &r.envelope["payload"];
    assert_eq!(p["nonzero"], serde_json::json!([true, false, false, false]));
    assert_eq!(p["ml_degree_drops"], true);
    assert_eq!(r.envelope["diagnostics"]["table_ml_degree"], 1);

    let c = write(&dir, "c1.json", r#"[[2,1,1],[1,2,1],[1,1,2]]"#);
    let r = call(&["discriminant", "veronese", "--C", path(&c)]);
    assert_eq!(r.envelope["payload"]["ml_degree_drops"], false);
}

#[test]
fn quintic_singular_check() {
    let dir = TempDir::new().unwrap();
    let model = write(&dir, "m.json", r#"{"points": [[0,1],[0,2],[1,0],[1,1],[1,2],[2,2]]}"#);
    let theta = write(&dir, "t.json", r#"{"theta": [1, 1]}"#);
    let r = call(&["discriminant", "check-singular", "--model", path(&model), "--theta", path(&theta)]);
    assert_eq!(r.exit_code, 0, "{}", r.stdout);
    assert_eq!(r.envelope["payload"]["value"], "6/1");
    assert_eq!(r.envelope["payload"]["singular"], false);
    let long: Vec<&Value> =
        r.envelope["payload"]["faces"].as_array().unwrap().iter().filter(|f| f["indices"].as_array().unwrap().len() == 3).collect();
    assert_eq!(long.len(), 1);
    assert_eq!(long[0]["discriminant"], "-3/1");
}

#[test]
fn tfp_generators_and_estimate() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"grading": [[1,0],[0,1]],
            "b": [[[1,0,0],[1,0,1]], [[0,1,0],[0,1,1]]],
            "c": [[[1,0,0],[1,0,1]], [[0,1,0],[0,1,1],[0,1,2]]],
            "pi1": [[1,0,0],[0,1,0]], "pi2": [[1,0,0],[0,1,0]]}"#,
    );
    let r = call(&["generators", "tfp", "--config", path(&cfg)]);
    assert_eq!(r.exit_code, 0, "{}", r.stdout);
    // 2x2 minors of a 2x2 and a 2x3 slice
    assert_eq!(r.envelope["payload"]["generators"].as_array().unwrap().len(), 1 + 3);

    let data = write(&dir, "u.json", r#"{"counts": [1,2,3,4,5,6,7,8,9,10]}"#);
    let r = call(&["mle", "tfp", "--config", path(&cfg), "--data", path(&data)]);
    assert_eq!(r.exit_code, 0, "{}", r.stdout);
    assert_eq!(r.envelope["payload"]["margins"]["a"], serde_json::json!(["2/11", "9/11"]));
    let short = write(&dir, "s.json", r#"{"counts": [1,2,3]}"#);
    assert_eq!(call(&["mle", "tfp", "--config", path(&cfg), "--data", path(&short)]).exit_code, 5);
}

#[test]
fn table_format_is_flat_text() {
    let r = call(&["catalog", "--label", "3", "--format", "table"]);
    assert_eq!(r.exit_code, 0);
    assert!(r.stdout.contains("status\tok"));
    assert!(!r.stdout.contains('{'));
}

#[test]
fn help_exits_cleanly() {
    let r = call(&["--help"]);
    assert_eq!(r.exit_code, 0);
    assert!(r.stdout.contains("selftest"));
}
