use std::process::{Command, Output};

use serde_json::Value;

fn liftlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liftlab"))
        .args(args)
        .env_remove("LIFTLAB_MAX_MODULUS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn count_gamma0_range_agrees() {
    let o = liftlab(&["count", "--group", "gamma0", "--n", "1..16", "--mode", "both", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows = stdout_json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r["agree"] == true));
    assert_eq!(rows[7]["N"], 8);
    assert_eq!(rows[7]["formula"]["count"], "9");
    assert_eq!(rows[7]["engine"]["count"], "9");
}

#[test]
fn count_table_shows_case_label() {
    let o = liftlab(&["count", "--group", "gamma0", "--n", "8"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("s>=2"), "{text}");
}

#[test]
fn count_gamma_two() {
    let o = liftlab(&["count", "--group", "gamma", "--n", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(5).unwrap(), "5");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&liftlab(&["count", "--group", "gamma1", "--n", "0"])), 1);
    assert_eq!(code(&liftlab(&["count", "--group", "gamma7", "--n", "3"])), 1);
    assert_eq!(code(&liftlab(&["frobnicate"])), 1);
    assert_eq!(code(&liftlab(&["witness", "--group", "gamma1", "--n", "5..6"])), 1);
    assert_eq!(code(&liftlab(&["--help"])), 0);
}

#[test]
fn engine_beyond_cap_is_a_structured_error() {
    let o = liftlab(&["count", "--group", "gamma0", "--n", "60", "--mode", "engine", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("formula mode"));
    assert_eq!(err["exit_code"], 1);

    let o = liftlab(&["count", "--group", "gamma0", "--n", "60", "--mode", "both"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn modulus_cap_from_flag_env_and_file() {
    assert_eq!(code(&liftlab(&["classify", "--group", "gamma0", "--n", "6", "--max-modulus", "10"])), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_liftlab"))
        .args(["classify", "--group", "gamma0", "--n", "6"])
        .env("LIFTLAB_MAX_MODULUS", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("liftlab.toml");
    std::fs::write(&cfg, "max_modulus = 10\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(code(&liftlab(&["classify", "--group", "gamma0", "--n", "6", "--config", cfg])), 1);
    assert_eq!(
        code(&liftlab(&["classify", "--group", "gamma0", "--n", "6", "--config", cfg, "--max-modulus", "12"])),
        0
    );
}

fn classify(group: &str, n: &str) -> Value {
    let o = liftlab(&["classify", "--group", group, "--n", n, "--format", "json"]);
    assert_eq!(code(&o), 0);
    stdout_json(&o)
}

#[test]
fn classify_examples() {
    for (group, n, total, cong, non) in
        [("gamma0", "6", "9", "5", "4"), ("gamma1", "4", "5", "5", "0"), ("gamma0", "3", "3", "3", "0")]
    {
        let r = classify(group, n);
        assert_eq!((r["total_lifts"].as_str(), r["congruence"].as_str()), (Some(total), Some(cong)));
        assert_eq!(r["noncongruence"], non);
    }
}

#[test]
fn classify_csv_columns() {
    let o = liftlab(&["classify", "--group", "gamma0", "--n", "4..6", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "kind,N,s,t,index,e2,e3,r,total_lifts,congruence,noncongruence");
    assert_eq!(lines[1], "gamma0,4,2,0,6,0,0,2,5,5,0");
    assert_eq!(lines[3], "gamma0,6,1,1,12,0,0,3,9,5,4");
}

#[test]
fn classify_lifts_per_row() {
    let o = liftlab(&["classify", "--group", "gamma1", "--n", "5", "--lifts", "--format", "json"]);
    let r = stdout_json(&o);
    let lifts = r["lifts"].as_array().unwrap();
    assert_eq!(lifts.len(), 9);
    let non = lifts.iter().filter(|l| l["classification"] == "noncongruence").count();
    assert_eq!(non, 6);
}

#[test]
fn witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let path = path.to_str().unwrap();
    let o = liftlab(&["witness", "--group", "gamma1", "--n", "5", "--format", "json", "--out", path]);
    assert_eq!(code(&o), 0);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(w["generators"].as_array().unwrap().len(), 3);
    assert_eq!(w["certificate"]["modulus"], 10);
    assert_eq!(w["certificate"]["image_order"], w["certificate"]["full_image_order"]);
    assert_eq!(code(&liftlab(&["verify-witness", path])), 0);

    let mut bad = w.clone();
    bad["certificate"]["image_order"] = Value::from(w["certificate"]["image_order"].as_u64().unwrap() / 2);
    std::fs::write(path, bad.to_string()).unwrap();
    let o = liftlab(&["verify-witness", path]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("witness rejected"));
}

#[test]
fn witness_nonexistence_exits_three() {
    let o = liftlab(&["witness", "--group", "gamma0", "--n", "4"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("{3, 4, 8}"));
    assert_eq!(code(&liftlab(&["witness", "--group", "gamma1", "--n", "3"])), 3);
}

#[test]
fn witness_gamma1_twelve() {
    let o = liftlab(&["witness", "--group", "gamma1", "--n", "12", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let w = stdout_json(&o);
    assert_eq!(w["certificate"]["modulus"], 24);
}

#[test]
fn presentation_json_schema() {
    let o = liftlab(&["presentation", "--group", "gamma0", "--n", "6", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let g = stdout_json(&o);
    assert_eq!((g["index"].as_u64(), g["e2"].as_u64(), g["e3"].as_u64(), g["r"].as_u64()), (Some(12), Some(0), Some(0), Some(3)));
    for gen in g["generators"].as_array().unwrap() {
        assert_eq!(gen["matrix"].as_array().unwrap().len(), 4);
        assert_eq!(gen["type"], "free");
    }
}

#[test]
fn verify_small_passes() {
    let o = liftlab(&["verify", "--max-n", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_detects_tampering() {
    let o = liftlab(&["verify", "--max-n", "24", "--seed-tamper", "--format", "json"]);
    assert_eq!(code(&o), 2);
    let board = stdout_json(&o);
    let route = board["checks"].as_array().unwrap().iter().find(|c| c["name"] == "closure = character route").unwrap();
    assert_eq!(route["passed"], false);
}

#[test]
fn verify_to_24_reports_only_the_gamma0_7_disagreement() {
    let o = liftlab(&["verify", "--max-n", "24", "--format", "json"]);
    let board = stdout_json(&o);
    let failed: Vec<&Value> = board["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["failures"].as_array().unwrap().len(), 1);
    assert!(failed[0]["failures"][0].as_str().unwrap().starts_with("gamma0(7)"));
    assert_eq!(code(&o), 2);
}
