//! Runs every worked example and prints the checks.
//!
//! `cargo run --example reproduce`

use sugeno_bounds::cli::fixtures::{fmt12, run_fixture, FIXTURE_IDS};

fn main() -> sugeno_bounds::Result<()> {
    let mut failed = 0;
    for id in FIXTURE_IDS {
        let r = run_fixture(id, None)?;
        println!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.id);
        for c in r.checks.iter().filter(|c| !c.pass) {
            println!("    {}: {} (expected {})", c.name, fmt12(c.value), c.expected);
        }
        for n in &r.notes {
            println!("    note: {n}");
        }
        failed += usize::from(!r.pass);
    }
    std::process::exit(i32::from(failed > 0));
}
