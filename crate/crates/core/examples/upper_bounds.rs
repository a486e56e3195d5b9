//! Upper bounds on `sugeno(H(f))`, including the q-integral and seminormed
//! variants with their own conjunctions.
//!
//! `cargo run --example upper_bounds`

use sugeno_bounds::binops::{semicopula, tnorm};
use sugeno_bounds::bounds::{check_bound, BoundId, BoundInstance};
use sugeno_bounds::transforms::Domain;
use sugeno_bounds::{DiscreteMeasure, ExtReal, Instance, PiecewiseMap};

fn main() -> sugeno_bounds::Result<()> {
    // superadditive on the whole space, so weakly superadditive on A
    let m = DiscreteMeasure::distorted_additive(&[0.2, 0.3, 0.25, 0.25], 1.5)?;
    let a = m.space().full();
    let f: Vec<ExtReal> = [0.1, 0.7, 0.4, 0.95].map(ExtReal::new).to_vec();
    let inst = Instance::discrete(m, a, f)?;
    let falling = PiecewiseMap::affine_on(1.0, -0.8, 0.0, 1.25, Domain::Nonneg)?;

    let bi = BoundInstance::new(inst.clone(), falling.clone());
    for id in [BoundId::Tw2i, BoundId::Tw2ii, BoundId::Ss2, BoundId::Ss4] {
        let r = check_bound(&bi, id, 1e-9)?;
        println!("{:<6} {:.6} ≤ {:.6}  holds: {}", id.name(), r.lhs.to_f64(), r.rhs.to_f64(), r.holds);
    }

    let rising = PiecewiseMap::power(1.0, 2.0)?.restrict(0.0, 1.0, Domain::Nonneg)?;
    for conj in ["min", "product", "lukasiewicz"] {
        let mut bi = BoundInstance::new(inst.clone(), rising.clone());
        bi.conj = Some(tnorm(conj)?);
        let r = check_bound(&bi, BoundId::Qint, 1e-9)?;
        println!("qint with {conj:<12} lhs {:.6} rhs {:.6} holds: {}", r.lhs.to_f64(), r.rhs.to_f64(), r.holds);
    }
    let mut bi = BoundInstance::new(inst, rising);
    bi.conj = Some(semicopula("prodmax")?);
    let r = check_bound(&bi, BoundId::Seminormed, 1e-9)?;
    println!("seminormed (prodmax) lhs {:.6} rhs {:.6} holds: {}", r.lhs.to_f64(), r.rhs.to_f64(), r.holds);
    Ok(())
}
