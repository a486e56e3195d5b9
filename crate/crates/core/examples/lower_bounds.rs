//! Lower bounds on `sugeno(H(f))` for monotone and unimodal transforms.
//!
//! `cargo run --example lower_bounds`

use sugeno_bounds::bounds::{check_bound, BoundId, BoundInstance};
use sugeno_bounds::transforms::{Domain, Expr, Mono, Segment};
use sugeno_bounds::{DiscreteMeasure, ExtReal, Instance, PiecewiseMap};

fn main() -> sugeno_bounds::Result<()> {
    let m = DiscreteMeasure::distorted_additive(&[0.3, 0.5, 0.4, 0.8], 0.7)?;
    let a = m.space().full();
    let f: Vec<ExtReal> = [0.2, 1.5, 0.9, 0.6].map(ExtReal::new).to_vec();
    let inst = Instance::discrete(m, a, f)?;

    // nondecreasing with a jump at 1
    let step = PiecewiseMap::new(
        vec![
            Segment::new(0.0, 1.0, Expr::Affine { a: 0.0, b: 0.5 }, Mono::Inc),
            Segment::new(1.0, f64::INFINITY, Expr::Affine { a: 0.75, b: 0.25 }, Mono::Inc),
        ],
        Domain::Nonneg,
    )?;
    // decreasing then increasing, minimum 0.1 at 0.8
    let valley = PiecewiseMap::quadratic_on(0.74, -1.6, 1.0, 0.0, f64::INFINITY, Domain::Nonneg)?;

    for (label, h, ids) in [
        ("H nondecreasing", step, &[BoundId::Tw1i, BoundId::Flo, BoundId::Ss1][..]),
        ("H quasiconvex", valley, &[BoundId::Tw1ii, BoundId::Ss3][..]),
    ] {
        println!("{label}");
        let bi = BoundInstance::new(inst.clone(), h);
        for &id in ids {
            let r = check_bound(&bi, id, 1e-9)?;
            let status = match (r.holds, r.hypotheses_hold) {
                (true, true) => "holds",
                (true, false) => "holds, but hypotheses unmet",
                (false, true) => "VIOLATED",
                (false, false) => "fails, hypotheses unmet",
            };
            println!("  {:<6} {:.6} ≥ {:.6}  {status}", id.name(), r.lhs.to_f64(), r.rhs.to_f64());
            for h in r.hypotheses.iter().filter(|h| !h.holds) {
                println!("         unmet: {}", h.detail);
            }
        }
    }
    Ok(())
}
