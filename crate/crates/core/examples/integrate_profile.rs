//! Integrals over Lebesgue and power measures on intervals, computed from
//! level-set profiles with a certified error bound.
//!
//! `cargo run --example integrate_profile`

use sugeno_bounds::binops::BinaryOpSpec;
use sugeno_bounds::integrals::integrate;
use sugeno_bounds::transforms::Domain;
use sugeno_bounds::{Instance, IntervalMeasure, PiecewiseMap};

fn main() -> sugeno_bounds::Result<()> {
    let f = PiecewiseMap::affine_on(0.0, 1.0, 0.0, 5.0, Domain::Nonneg)?;
    let inst = Instance::interval(IntervalMeasure::Lebesgue, 0.0, 5.0, f)?;
    let sqrt = PiecewiseMap::power(1.0, 0.5)?;
    let tol = 1e-10;

    let r = integrate(&BinaryOpSpec::min(), &inst, &[&sqrt], tol)?;
    println!("sugeno(√x) on [0,5]       = {:.12} (error ≤ {:.1e})", r.value.to_f64(), r.error_bound.unwrap_or(0.0));
    println!("closed form (√21 − 1)/2   = {:.12}", (21f64.sqrt() - 1.0) / 2.0);

    for q in [0.5, 1.0, 2.0] {
        let f = PiecewiseMap::power(1.0, q)?.restrict(0.0, 1.0, Domain::Nonneg)?;
        let inst = Instance::interval(IntervalMeasure::Power { q }, 0.0, 1.0, f)?;
        let h = PiecewiseMap::power(1.0, 1.0 / q)?;
        let su = integrate(&BinaryOpSpec::min(), &inst, &[], tol)?.value.to_f64();
        let sh = integrate(&BinaryOpSpec::product(), &inst, &[&h], tol)?.value.to_f64();
        println!("q = {q}: sugeno(x^q) = {su:.9}, shilkret(x) under λ^q = {sh:.9}");
    }
    Ok(())
}
