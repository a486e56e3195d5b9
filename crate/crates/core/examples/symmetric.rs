//! Signed functions: the ⋆-symmetric integral for ⋆ = + and ⋆ = ⊻ and the
//! upper bound for nondecreasing H with H(0) = 0.
//!
//! `cargo run --example symmetric`

use sugeno_bounds::binops::MixedOpSpec;
use sugeno_bounds::bounds::{check_bound, BoundId};
use sugeno_bounds::cli::fixtures::{sec4_1_instance, sec4_2_instance};
use sugeno_bounds::symmetric::symmetric_integral;

fn main() -> sugeno_bounds::Result<()> {
    for star in [MixedOpSpec::plus(), MixedOpSpec::ovee()] {
        for (label, bi) in [("three points", sec4_1_instance(star.clone())?), ("√λ on [−3,1]", sec4_2_instance(star.clone())?)] {
            let v = symmetric_integral(&star, &bi.instance, Some(&bi.h), 1e-10)?;
            let r = check_bound(&bi, BoundId::Signed001, 1e-9)?;
            println!(
                "{label:<13} ⋆ = {:<5} parts {:.6} / {:.6}  integral {:>9.6}  bound {:>9.6}  holds: {}",
                star.name(),
                v.positive.value.to_f64(),
                v.negative.value.to_f64(),
                v.value.to_f64(),
                r.rhs.to_f64(),
                r.holds
            );
        }
    }
    Ok(())
}
