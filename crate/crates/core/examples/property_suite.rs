//! Runs the seeded property suite: `cargo run --example property_suite -- [seed]`.

use bidisc::suite::run_suite;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20240601);
    println!("seed {seed}");
    let outcomes = run_suite(seed);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{failed} failed");
}
