//! The twelve acceptance criteria, one line each. Runs without the libtest
//! harness so the table is printed by a plain `cargo test`.

use bidisc::suite::{run_criterion, CRITERIA};

const SEED: u64 = 20240601;

fn main() {
    println!("acceptance suite, seed {SEED}");
    let mut failed = Vec::new();
    for id in 1..=CRITERIA.len() {
        let start = std::time::Instant::now();
        let outcome = run_criterion(id, SEED);
        println!("{}  ({:.1}s)", outcome.line(), start.elapsed().as_secs_f64());
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} / {} passed", CRITERIA.len(), CRITERIA.len());
    } else {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
