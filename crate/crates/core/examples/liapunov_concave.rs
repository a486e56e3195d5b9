//! Bounds for concave transforms: the support-line bound minimized over a
//! grid of `c`, and what happens to the refuted convex claims.
//!
//! `cargo run --example liapunov_concave`

use sugeno_bounds::bounds::{check_bound, BoundId, BoundInstance};
use sugeno_bounds::transforms::Domain;
use sugeno_bounds::{Instance, IntervalMeasure, PiecewiseMap};

fn main() -> sugeno_bounds::Result<()> {
    let f = PiecewiseMap::affine_on(0.0, 1.0, 0.0, 5.0, Domain::Nonneg)?;
    let inst = Instance::interval(IntervalMeasure::Lebesgue, 0.0, 5.0, f)?;

    let mut bi = BoundInstance::new(inst.clone(), PiecewiseMap::power(1.0, 0.5)?);
    bi.profile_tol = 1e-10;
    let r = check_bound(&bi, BoundId::Tw4, 1e-9)?;
    println!("sugeno(√f)           {:.10}", r.lhs.to_f64());
    println!("support-line bound   {:.10} at c = {}", r.rhs.to_f64(), r.quantities["c"].to_f64());
    for id in [BoundId::In99, BoundId::L1] {
        let r = check_bound(&bi, id, 1e-9)?;
        println!("{:<20} {:.10} (holds: {})", id.name(), r.rhs.to_f64(), r.holds);
    }

    // φ(x) = (x − 0.5)²: the naive convex claim fails, the corrected one holds
    let phi = PiecewiseMap::quadratic_on(0.25, -1.0, 1.0, 0.0, f64::INFINITY, Domain::Nonneg)?;
    let mut bi = BoundInstance::new(inst, phi);
    bi.profile_tol = 1e-10;
    for id in [BoundId::ConvexJensen, BoundId::Convex] {
        let r = check_bound(&bi, id, 1e-9)?;
        println!("{:<14} lhs {:.6} rhs {:.6} holds: {}", id.name(), r.lhs.to_f64(), r.rhs.to_f64(), r.holds);
    }
    Ok(())
}
