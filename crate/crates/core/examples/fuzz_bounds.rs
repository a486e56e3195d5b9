//! Randomized checking of the bounds. Sound bounds show no violations; the
//! two refuted claims produce shrunk counterexamples.
//!
//! `cargo run --release --example fuzz_bounds [trials]`

use sugeno_bounds::bounds::BoundId;
use sugeno_bounds::verify::fuzz::{fuzz, FuzzConfig};

fn main() -> sugeno_bounds::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500);
    let cfg = FuzzConfig { seed: 42, trials, ..FuzzConfig::default() };
    let report = fuzz(&cfg)?;
    for (b, s) in &report.stats {
        println!("{:<12} evaluated {:>6}  skipped {:>4}  violations {}", b.name(), s.evaluated, s.skipped, s.violations);
    }

    let refuted = FuzzConfig { bounds: vec![BoundId::ConvexJensen, BoundId::Nn1], trials: 100, ..cfg };
    let report = fuzz(&refuted)?;
    println!("\n{} counterexamples to the refuted claims; smallest:", report.violation_count());
    if let Some(c) = report.violations.iter().min_by_key(|c| c.instance.to_json().len()) {
        println!("{} (lhs {:.6}, rhs {:.6}, {} shrink steps)", c.bound, c.lhs.to_f64(), c.rhs.to_f64(), c.shrink_steps);
        println!("{}", c.instance.to_json());
    }
    Ok(())
}
