//! Runs every acceptance criterion and prints one line per criterion.
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use seplab::acceptance;

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance_criteria: test");
        return ExitCode::SUCCESS;
    }
    let mut failed = Vec::new();
    for &id in &acceptance::CRITERIA {
        let outcome = acceptance::run(id);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", acceptance::CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
