//! Runs `kfp verify-all` on the bundled benchmark and prints one line per
//! criterion. Criterion 8 has one sub-check that is expected to fail (the
//! source-term exponent); every other sub-check must pass.

use std::process::{Command, ExitCode};

use serde_json::Value;

const EXPECTED_FAILURES: &[(u64, &str)] = &[(8, "G ≡ 1")];

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = Command::new(env!("CARGO_BIN_EXE_kfp"))
        .args(["verify-all", "--out"])
        .arg(dir.path())
        .output()
        .expect("run kfp");
    let report: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("verify.json")).expect("verify.json")).expect("json");
    let checks = report["checks"].as_array().expect("checks");

    let mut unexpected = Vec::new();
    let mut any_failed = false;
    for c in checks {
        let id = c["id"].as_u64().unwrap_or(0);
        let passed = c["passed"].as_bool().unwrap_or(false);
        any_failed |= !passed;
        println!(
            "{} criterion {id:>2}: {} ({:.1} s)",
            if passed { "PASS" } else { "FAIL" },
            c["name"].as_str().unwrap_or(""),
            c["seconds"].as_f64().unwrap_or(0.0)
        );
        for s in c["subchecks"].as_array().into_iter().flatten() {
            if s["passed"].as_bool() == Some(true) {
                continue;
            }
            let label = s["label"].as_str().unwrap_or("");
            let known = EXPECTED_FAILURES.iter().any(|(i, l)| *i == id && label.contains(l));
            println!("       {} {label}: {}", if known { "known failure" } else { "UNEXPECTED" }, s["measured"].as_str().unwrap_or(""));
            if !known {
                unexpected.push(format!("{id}: {label}"));
            }
        }
    }
    let want_code = if any_failed { 2 } else { 0 };
    let code = out.status.code();
    if checks.len() != 10 {
        unexpected.push(format!("{} criteria reported", checks.len()));
    }
    if code != Some(want_code) {
        unexpected.push(format!("exit status {code:?}, expected {want_code}"));
    }
    if unexpected.is_empty() {
        println!("acceptance: ok");
        ExitCode::SUCCESS
    } else {
        eprintln!("{}", String::from_utf8_lossy(&out.stderr));
        eprintln!("acceptance: unexpected results: {unexpected:?}");
        ExitCode::FAILURE
    }
}
