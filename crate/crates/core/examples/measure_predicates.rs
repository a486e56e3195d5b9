//! Sub- and superadditivity checks, with the witness pair when one fails.
//!
//! `cargo run --example measure_predicates`

use sugeno_bounds::verify::predicates::{check_discrete, Predicate};
use sugeno_bounds::{DiscreteMeasure, ExtReal, FiniteSpace, Subset};

fn report(label: &str, m: &DiscreteMeasure, a: Subset) -> sugeno_bounds::Result<()> {
    println!("{label}");
    for p in Predicate::ALL {
        let r = check_discrete(m, p.is_weak().then_some(a), p)?;
        println!("  {:<22} {}", p.name(), r.detail(m));
    }
    Ok(())
}

fn main() -> sugeno_bounds::Result<()> {
    let space = FiniteSpace::new(3)?;
    // singletons 0.5, pairs 1, everything 2
    let three_point = DiscreteMeasure::from_fn(space, |s| ExtReal::new([0.0, 0.5, 1.0, 2.0][s.len()]));
    report("three-point measure, A = {0,1}", &three_point, Subset::from_indices([0, 1]))?;
    report("additive measure", &DiscreteMeasure::additive(&[0.2, 0.5, 0.3])?, space.full())?;
    report("√ of an additive measure", &DiscreteMeasure::distorted_additive(&[0.2, 0.5, 0.3], 0.5)?, space.full())?;
    Ok(())
}
