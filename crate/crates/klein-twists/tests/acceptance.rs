//! Acceptance gate: every verification check must pass, with the three
//! documented findings present. Run with `--nocapture` to see one line per
//! criterion.

use klein_twists::verify::{run_all, Status};

#[test]
fn acceptance() {
    let checks = run_all();
    let mut failures = Vec::new();
    for c in &checks {
        println!("{c}");
        if !c.passed() {
            failures.push(c.id);
        }
    }
    assert!(failures.is_empty(), "failed checks: {failures:?}");

    let ids: Vec<&str> = checks.iter().map(|c| c.id).collect();
    assert_eq!(
        ids,
        ["C1", "C2", "C3", "C4", "F1", "C5", "C6", "C7", "C8", "C9", "C10", "F2", "F3", "C11"],
    );
    let findings = checks.iter().filter(|c| matches!(c.status, Status::Finding(_))).count();
    assert_eq!(findings, 3);
}
