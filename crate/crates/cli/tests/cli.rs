use std::process::{Command, Output};

use serde_json::Value;

fn cfdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfdyn")).args(args).env_remove("CFDYN_PRECISION_BITS").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = cfdyn(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn expand_reports_digits_and_residuals() {
    let v = json(&["expand", "--alpha", "3/10", "--x", "7/10", "--n", "5"]);
    assert_eq!(v["digits"][0], "+1/1");
    assert_eq!(v["digits"][1], "+1/2");
    assert!(v["truncation_residuals"].as_array().unwrap().iter().all(|r| r == "0"));

    let v = json(&["expand", "--alpha", "3/10", "--x", "3/10", "--n", "4"]);
    assert_eq!(v["hit_one"], 2);
    let v = json(&["expand", "--alpha", "3/10", "--x", "1", "--n", "3"]);
    assert_eq!(v["hit_one"], 0);
    assert_eq!(v["digits"][2], "-1/2");
}

#[test]
fn match_examples() {
    for (a, m, n) in [("3/10", 1, 2), ("11/20", 2, 1), ("16/25", 2, 2)] {
        let v = json(&["match", "--alpha", a]);
        assert_eq!((v["M"].as_u64(), v["N"].as_u64()), (Some(m), Some(n)), "{a}");
        assert_eq!(v["verified"], true);
    }
    let v = json(&["match", "--alpha", "0.64"]);
    assert_eq!(v["mode"]["kind"], "numerical");
    assert_eq!((v["M"].as_u64(), v["N"].as_u64()), (Some(2), Some(2)));
}

#[test]
fn windows_counts() {
    let v = json(&["windows", "--max-denominator", "1"]);
    assert_eq!(v["count"], 1);
    let v = json(&["windows", "--max-denominator", "2"]);
    assert_eq!(v["count"], 3);
    assert_eq!(v["disjoint"], true);
    let out = cfdyn(&["windows", "--max-denominator", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("center,side,left,right,M,N"));
}

#[test]
fn density_and_entropy() {
    let v = json(&["density", "--alpha", "1/4", "--at", "4/5", "--samples", "5"]);
    assert_eq!(v["values"][0]["density"], "50/9");
    assert!(v["values"].as_array().unwrap().iter().all(|p| p["fixed_point"] == true));
    assert_eq!(v["asymptotics"]["wandering"], "log n");

    let v = json(&["entropy", "--alpha", "3/10"]);
    assert!(v["closed_form"].as_str().unwrap().starts_with("1.6449340668"));
}

#[test]
fn natext_formats() {
    let out = cfdyn(&["natext", "--alpha", "0.3", "--points", "10", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# alpha=0.3"));
    assert_eq!(text.lines().count(), 12);

    let out = cfdyn(&["natext", "--alpha", "0.85", "--points", "1000", "--format", "ppm", "--size", "16"]);
    assert!(out.status.success());
    assert!(out.stdout.starts_with(b"P6\n16 16\n255\n"));
    assert_eq!(out.stdout.len(), "P6\n16 16\n255\n".len() + 16 * 16 * 3);

    let v = json(&["natext", "--alpha", "0.3", "--points", "20000"]);
    assert!(v["domain_membership"].as_f64().unwrap() >= 0.999);
    let v = json(&["natext", "--alpha", "0.85", "--points", "100"]);
    assert!(v["domain_membership"].is_null());
}

#[test]
fn verify_passes_on_good_parameters() {
    for a in ["3/10", "11/20", "16/25", "69/100", "(-1+25*sqrt(2))/50"] {
        let v = json(&["verify", "--alpha", a]);
        assert_eq!(v["passed"], true, "{a}: {v}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cfdyn(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cfdyn(&["match"]).status.code(), Some(1));
    assert_eq!(cfdyn(&["match", "--alpha", "one half"]).status.code(), Some(1));
    assert_eq!(cfdyn(&["windows", "--format", "ppm"]).status.code(), Some(1));
    assert_eq!(cfdyn(&["match", "--alpha", "3/2"]).status.code(), Some(2));
    assert_eq!(cfdyn(&["density", "--alpha", "3/4"]).status.code(), Some(2));
    // 1/0.9 has an exact integer part that intervals cannot certify
    assert_eq!(cfdyn(&["match", "--alpha", "0.9"]).status.code(), Some(3));
    assert_eq!(cfdyn(&["--help"]).status.code(), Some(0));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cfdyn"))
        .args(["entropy", "--alpha", "1/4"])
        .env("CFDYN_PRECISION_BITS", "256")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_bits"], 256);
    assert!(v["closed_form"].as_str().unwrap().len() > 60);
    let out = Command::new(env!("CARGO_BIN_EXE_cfdyn"))
        .args(["windows"])
        .env("CFDYN_PRECISION_BITS", "100000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["scan", "--samples", "300", "--seed", "4"][..],
        &["natext", "--alpha", "0.55", "--points", "70000", "--seed", "9", "--format", "csv"][..],
        &["windows", "--max-denominator", "8"][..],
    ] {
        let a = cfdyn(args);
        let b = cfdyn(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
