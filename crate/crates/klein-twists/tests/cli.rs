//! End-to-end tests of the command-line interface.

use std::process::{Command, Output};

use klein_twists::report::{build_classification_report, ClassificationReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klein-twists"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn json_report_round_trips_and_is_deterministic_across_processes() {
    let parallel = run(&["enumerate"]);
    let sequential = run(&["enumerate", "--sequential"]);
    assert!(parallel.status.success());
    assert!(sequential.status.success());
    assert_eq!(parallel.stdout, sequential.stdout, "thread count changed the bytes");

    let parsed: ClassificationReport =
        serde_json::from_slice(&parallel.stdout).expect("valid report JSON");
    assert_eq!(parsed.schema, 1);
    assert_eq!(parsed.curves.len(), 168);
    assert_eq!(parsed, build_classification_report(true));
}

#[test]
fn csv_report_has_fixed_header_and_one_row_per_curve() {
    let out = run(&["enumerate", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 169);
    assert_eq!(
        lines[0],
        "p,name,class,order,trace,n1,n2,n3,class_number,automorphisms,bitangent_degrees,l,equation"
    );
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("klein-twists-report-{}.json", std::process::id()));
    let to_file = run(&["enumerate", "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&path).expect("report file written");
    std::fs::remove_file(&path).ok();
    assert_eq!(written, run(&["enumerate"]).stdout);
}

#[test]
fn curve_by_name_and_by_matrix_agree() {
    let by_name = run(&["curve", "--name", "K"]);
    let by_matrix = run(&["curve", "--p", "010001100"]);
    assert!(by_name.status.success());
    assert_eq!(by_name.stdout, by_matrix.stdout);
    let text = stdout(&by_name);
    assert!(text.contains("\"equation\": \"X^3*Y + X*Z^3 + Y^3*Z\""));
    assert!(text.contains("\"class\": \"3A\""));
}

#[test]
fn zeta_reports_counts_and_factorization() {
    let out = run(&["zeta", "--name", "alpha"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(value["n"], serde_json::json!([0, 14, 24]));
    assert_eq!(value["l_factored"], "(z+)^3");
    assert_eq!(value["class_number"], 8);
    assert_eq!(value["functional_equation"], true);
}

#[test]
fn bitangents_prints_lines_and_the_squaring_matrix() {
    let out = run(&["bitangents", "--name", "K"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("7 bitangents, common field F_2^3"));
    assert!(text.contains("line 0:"));
    assert!(text.contains("degree 3"));
    assert!(text.contains("R equals P^t: true"));
}

#[test]
fn identities_passes_and_reports_the_variant_finding() {
    let out = run(&["identities"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("FINDING variant identity"));
    assert!(!text.contains("FAILED"));
}

#[test]
fn verify_paper_exits_zero_with_findings() {
    let out = run(&["verify-paper"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 11);
    assert_eq!(text.lines().filter(|l| l.starts_with("FINDING")).count(), 3);
    assert!(text.contains("all 14 checks passed"));
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        &["curve", "--p", "000000000"][..],
        &["curve", "--p", "12345"][..],
        &["curve", "--name", "unknown"][..],
        &["curve"][..],
        &["curve", "--p", "100010001", "--name", "K"][..],
        &["zeta", "--p", "notbits99"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty(), "args {args:?} should explain the error");
    }
}
