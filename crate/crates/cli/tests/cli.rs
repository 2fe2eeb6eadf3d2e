use std::process::{Command, Output};

use serde_json::Value;

fn holm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let o = holm(args);
    (o.status.code().unwrap(), stdout(&o))
}

#[test]
fn validate_reports_first_failing_constraint() {
    assert_eq!(run(&["validate", "1", "2"]), (0, "valid\n".into()));
    let (code, out) = run(&["validate", "4", "3"]);
    assert_eq!(code, 1);
    assert_eq!(out, "invalid: 4 not squarefree\n");
    let (code, out) = run(&["validate", "3", "3"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("invalid: k = l"), "{out}");
}

#[test]
fn validate_json() {
    let (code, out) = run(&["validate", "4", "3", "--json"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0], "4 not squarefree");
}

#[test]
fn map_examples() {
    assert_eq!(run(&["map", "1", "2", "--to-e", "1", "0"]), (0, "(1, -3)\n".into()));
    assert_eq!(run(&["map", "1", "2", "--to-h", "4", "6"]), (0, "(0, 1)\n".into()));
    assert_eq!(run(&["map", "1", "2", "--to-e", "0", "0"]), (0, "INFINITY\n".into()));
    assert_eq!(run(&["map", "1", "2", "--to-h", "INFINITY"]), (0, "(0, 0)\n".into()));
}

#[test]
fn map_accepts_fractions_and_rejects_off_curve() {
    // 2(1,-3) = (1/4, 33/8) maps back onto H
    let (code, out) = run(&["map", "1", "2", "--to-h", "1/4", "33/8"]);
    assert_eq!(code, 0);
    let inner = out.trim().trim_start_matches('(').trim_end_matches(')');
    let (x, y) = inner.split_once(", ").unwrap();
    assert_eq!(run(&["map", "1", "2", "--to-e", x, y]).1, "(1/4, 33/8)\n");

    let o = holm(&["map", "1", "2", "--to-e", "5", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not on"));
}

#[test]
fn mul_examples() {
    let (code, out) = run(&["mul", "1", "2", "2", "1", "-3", "--method", "both"]);
    assert_eq!(code, 0);
    assert!(out.contains("grouplaw: (1/4, 33/8)\n"), "{out}");
    assert!(out.contains("divpoly:  (1/4, 33/8)\n"), "{out}");
    assert!(out.contains("MATCH\n") && !out.contains("MISMATCH"), "{out}");

    assert_eq!(run(&["mul", "1", "2", "0", "1", "-3"]).1, "INFINITY\n");

    let (code, out) = run(&["mul", "5", "1", "15", "25", "120"]);
    assert_eq!(code, 0);
    let v: i64 = out
        .lines()
        .find_map(|l| l.strip_prefix("v_5(x) = "))
        .expect("valuation line")
        .parse()
        .unwrap();
    assert!(v <= -2, "{out}");
}

#[test]
fn mul_both_agree_for_small_and_negative_n() {
    for n in ["-4", "-1", "0", "1", "2", "7"] {
        let (code, out) = run(&["mul", "2", "3", n, "4", "-10", "--method", "both"]);
        assert_eq!(code, 0, "n = {n}: {out}");
        assert!(out.contains("\nMATCH\n"), "n = {n}: {out}");
    }
}

#[test]
fn mul_off_curve_is_validation_error() {
    assert_eq!(holm(&["mul", "1", "2", "2", "1", "1"]).status.code(), Some(1));
}

#[test]
fn divpoly_examples() {
    let (code, out) = run(&["divpoly", "1", "2", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("psi_2: f = [], g = [2]\n"), "{out}");
    let out = run(&["divpoly", "1", "2", "3"]).1;
    assert!(out.contains("psi_3: f = [-144, 240, -72, 0, 3], g = []\n"), "{out}");
    let out = run(&["divpoly", "1", "2", "1"]).1;
    assert!(out.contains("psi_1: f = [1], g = []\n"), "{out}");
    assert!(out.contains("omega_1: undefined"), "{out}");
}

#[test]
fn divpoly_json_has_string_coefficients() {
    let (_, out) = run(&["divpoly", "1", "2", "3", "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let f: Vec<&str> = v["psi"]["f"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(f, ["-144", "240", "-72", "0", "3"]);
}

#[test]
fn lemmas_examples() {
    let (code, out) = run(&["lemmas", "1", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("all CONFIRMED\n"), "{out}");

    let (code, out) = run(&["lemmas", "3", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("v_3(x) = -2"), "{out}");
    assert!(out.ends_with("all CONFIRMED\n"));

    assert_eq!(holm(&["lemmas", "2", "4"]).status.code(), Some(1));
}

#[test]
fn certify_examples() {
    let (code, out) = run(&["certify", "1", "2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("conclusion: TORSION_FREE_CONFIRMED\n"), "{out}");
    let (code, out) = run(&["certify", "5", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("TORSION_FREE_CONFIRMED"));
    assert_eq!(holm(&["certify", "1", "1"]).status.code(), Some(1));
}

#[test]
fn certify_json_file_round_trips() {
    let path = std::env::temp_dir().join(format!("holm-cert-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, _) = run(&["certify", "1", "7", "--json", p]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let doc: holm_core::torsion::CertificateDoc = serde_json::from_str(&text).unwrap();
    doc.validate().unwrap();
    assert_eq!(doc.conclusion, holm_core::Conclusion::TorsionFreeConfirmed);
    assert_eq!(doc.params.k, "1");
    assert!(doc.candidates.iter().all(|c| c.certified && c.lemma == 3));
}

#[test]
fn certify_range() {
    let (code, out) = run(&["certify", "--range", "5"]);
    assert_eq!(code, 0);
    // valid pairs with 1 <= k < l <= 5
    assert_eq!(out.lines().filter(|l| l.ends_with("TORSION_FREE_CONFIRMED")).count(), 6, "{out}");
}

#[test]
fn search_integral_lists_points_without_findings() {
    let (code, out) = run(&["search-integral", "1", "2", "--bound", "100"]);
    assert_eq!(code, 0);
    assert!(out.contains("(1, -3)\n(1, 3)\n"), "{out}");
    assert!(out.contains("16 integral points"), "{out}");
    assert!(!out.contains("FINDING"));
}

#[test]
fn output_is_deterministic() {
    for args in [&["certify", "2", "7", "--json"][..], &["lemmas", "5", "6"], &["search-integral", "3", "5"]] {
        assert_eq!(holm(args).stdout, holm(args).stdout);
    }
    let mut seq = vec!["--sequential"];
    seq.extend(["lemmas", "5", "6"]);
    assert_eq!(holm(&seq).stdout, holm(&["lemmas", "5", "6"]).stdout);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(holm(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(holm(&["validate", "1/2", "3"]).status.code(), Some(1));
    assert_eq!(holm(&["--help"]).status.code(), Some(0));
}
