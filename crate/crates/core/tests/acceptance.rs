//! Runs every acceptance criterion and prints one line each. Exits non-zero
//! when any criterion fails.

use std::process::ExitCode;

use profend::acceptance::{run, CRITERIA};

fn main() -> ExitCode {
    // `cargo test -- --list` and filters are not meaningful here
    if std::env::args().any(|a| a == "--list") {
        for (id, name) in CRITERIA {
            println!("criterion {id} {name}: test");
        }
        return ExitCode::SUCCESS;
    }
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let outcome = run(id);
        println!("{outcome}");
        if !outcome.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
