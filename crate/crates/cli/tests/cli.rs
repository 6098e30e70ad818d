use std::process::{Command, Output};

use serde_json::Value;

fn isotopes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isotopes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = isotopes(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn admissible_prime_for_three_cycle() {
    let v = json(&["admissible-prime", "--perm", "2 3 1"]);
    assert_eq!(v["prime"], 43);
    assert_eq!(v["lcm"], 21);
    assert_eq!(v["admissibility_set"], serde_json::json!([3, 7]));
}

#[test]
fn cycle_notation_matches_image_list() {
    let a = isotopes(&["report", "--perm", "2 3 1"]);
    let b = isotopes(&["report", "--perm-cycles", "(1 2 3)"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_is_byte_identical_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let out = isotopes(&["report", "--perm", "2 3 1", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&p1).unwrap();
    assert_eq!(a, std::fs::read(&p2).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["idempotents"].as_array().unwrap().len(), 8);
    assert_eq!(v["automorphisms"]["algebra_order"], 21);
    assert_eq!(v["automorphisms"]["quasigroup_order"], 42);
    assert_eq!(v["regularity"]["status"], true);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn identity_report_reproduces_and_table() {
    let v = json(&["report", "--perm", "1 2 3"]);
    let labels: Vec<u64> = v["idempotents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["label"].as_str().unwrap().parse().unwrap())
        .collect();
    let table = v["product_table"].as_array().unwrap();
    for (r, &i) in labels.iter().enumerate() {
        for (c, &j) in labels.iter().enumerate() {
            assert_eq!(table[r][c].as_str().unwrap(), (i & j).to_string());
        }
    }
}

#[test]
fn transposition_report() {
    let v = json(&["report", "--perm", "2 1 3"]);
    assert_eq!(v["prime"], 7);
    assert_eq!(v["idempotents"].as_array().unwrap().len(), 8);
    assert_eq!(v["automorphisms"]["algebra_order"], 6);
}

#[test]
fn markdown_report_renders_tables() {
    let out = isotopes(&["report", "--perm", "2 3 1", "--format", "md"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("## Quasigroup"));
    assert!(text.contains("## Fusion tables"));
}

#[test]
fn idempotent_oracles_agree() {
    for oracle in ["formula", "chain", "brute"] {
        let v = json(&["idempotents", "--perm", "2 3 1", "--oracle", oracle]);
        assert_eq!(v["count"], 8);
        assert_eq!(v["agrees_with_formula"], true);
    }
}

#[test]
fn brute_force_cap_exits_three() {
    let out = isotopes(&[
        "idempotents",
        "--perm",
        "2 3 1",
        "--oracle",
        "brute",
        "--cap",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(
        isotopes(&["report", "--perm", "1 1 2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        isotopes(&["report", "--perm", "a b"]).status.code(),
        Some(2)
    );
    assert_eq!(
        isotopes(&["report", "--perm", "2 3 1", "--prime", "7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(isotopes(&["report"]).status.code(), Some(2));
}

#[test]
fn spectra_and_fusion() {
    let v = json(&["spectra", "--perm", "2 3 1"]);
    for e in v["entries"].as_array().unwrap() {
        let want = if e["idempotent_label"] == "0" {
            "λ^3"
        } else {
            "λ^3 + 42"
        };
        assert_eq!(e["char_poly"], want);
    }
    let f = json(&["fusion", "--perm", "2 3 1"]);
    let entries = f["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 7);
    assert!(entries.iter().all(|e| e["law_verified"] == true));
}

#[test]
fn automorphisms_with_bruteforce() {
    let v = json(&[
        "automorphisms",
        "--perm",
        "2 3 1",
        "--quasigroup-bruteforce",
    ]);
    assert_eq!(v["order"], 21);
    assert_eq!(v["abelian"], false);
    assert_eq!(v["quasigroup_bruteforce"]["order"], 42);
    assert_eq!(v["accepted"].as_array().unwrap().len(), 21);
    let t = json(&["automorphisms", "--perm", "2 1 3"]);
    assert_eq!(t["order"], 6);
}

#[test]
fn regularity_certificate() {
    let v = json(&["regular", "--n", "4", "--resultants"]);
    assert_eq!(v["status"], true);
    for t in v["tested_m"].as_array().unwrap() {
        assert_eq!(t["resultant"], "50625");
    }
    assert_eq!(isotopes(&["regular", "--n", "1"]).status.code(), Some(2));
    assert_eq!(isotopes(&["regular", "--n", "40"]).status.code(), Some(3));
}

#[test]
fn algebra_structure_constants() {
    let v = json(&["algebra", "--perm", "2 3 1", "--show", "sc"]);
    let sc = &v["structure_constants"];
    // e_1 ∗ e_1 = e_3 under ψ_σ(x)_i = x_{σ(i)}
    assert_eq!(sc[0][0], serde_json::json!([0, 0, 1]));
    let ids = json(&["algebra", "--perm", "2 3 1", "--show", "identities"]);
    assert_eq!(ids["identities"]["medial"], true);
    assert_eq!(ids["identities"]["associative"], false);
}

#[test]
fn category_check_passes() {
    let v = json(&["category-check", "--perm-cycles", "(1 2)(3 4)"]);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(isotopes(&["verify", "--n-max", "3"]).status.code(), Some(0));
    assert_eq!(isotopes(&["verify", "--n-max", "4"]).status.code(), Some(0));
    assert_eq!(isotopes(&["verify", "--n-max", "9"]).status.code(), Some(3));
}

#[test]
fn named_checks_are_rerunnable() {
    let list = isotopes(&["verify", "--list"]);
    let names = String::from_utf8(list.stdout).unwrap();
    for name in names.lines() {
        let out = isotopes(&["verify", "--check", name, "--perm", "2 3 1"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
    assert_eq!(
        isotopes(&["verify", "--check", "no.such", "--perm", "2 3 1"])
            .status
            .code(),
        Some(2)
    );
}
