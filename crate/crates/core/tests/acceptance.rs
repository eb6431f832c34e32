//! Runs every acceptance criterion and prints one line per criterion.

use enriques_core::accept::{run_criterion, CRITERIA};

const SEED: u64 = 20240611;

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for id in CRITERIA {
        let outcome = run_criterion(id, SEED);
        println!("{outcome}");
        if !outcome.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
