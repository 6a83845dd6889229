//! Golden-file tests for the command-line front end.
//!
//! Each case runs a subcommand on the shipped corpus and compares exit code
//! and output byte-for-byte against `tests/golden/<name>.txt` (first line:
//! exit code).  Every subcommand appears with at least one success and one
//! failure case.  Regenerate with WSTAR_GOLDEN_REFRESH=1.

use std::fs;
use std::path::Path;

use wstarcat::cli;

#[path = "support/cases.rs"]
mod cases;
use cases::CASES;

fn run_case(args: &[&str]) -> (i32, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    cli::run(&argv, None)
}

#[test]
fn golden_corpus() {
    let refresh = std::env::var_os("WSTAR_GOLDEN_REFRESH").is_some();
    let mut failures = Vec::new();
    for &(name, args, want_code) in CASES {
        let (code, out) = run_case(args);
        let got = format!("exit={code}\n{out}");
        let path = format!("tests/golden/{name}.txt");
        if refresh {
            fs::write(&path, &got).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing golden file {path}: {e}"));
        if code != want_code {
            failures.push(format!("{name}: exit code {code}, expected {want_code}"));
        }
        if got != want {
            failures.push(format!("{name}: output differs from {path}\n--- got ---\n{got}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn golden_rerun_is_byte_identical() {
    // Determinism across invocations in the same process, seeds fixed.
    for &(_, args, _) in CASES {
        let first = run_case(args);
        let second = run_case(args);
        assert_eq!(first, second);
    }
    let _ = Path::new("tests/corpus");
}
