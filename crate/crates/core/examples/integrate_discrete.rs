//! Sugeno, Shilkret and t-norm integrals on a five-point space.
//!
//! `cargo run --example integrate_discrete`

use sugeno_bounds::binops::{semicopula, BinaryOpSpec};
use sugeno_bounds::integrals::{generalized_integral, q_integral, seminormed};
use sugeno_bounds::{DiscreteMeasure, ExtReal, FiniteSpace, Subset};

fn main() -> sugeno_bounds::Result<()> {
    let space = FiniteSpace::new(5)?;
    let counting = DiscreteMeasure::counting(space);
    let f: Vec<ExtReal> = (1..=5).map(|i| ExtReal::new(i as f64)).collect();
    let all = space.full();

    for op in ["min", "product", "lukasiewicz"] {
        let op = BinaryOpSpec::builtin(op)?;
        let r = generalized_integral(&op, &counting, all, &f)?;
        println!("{:<18} value {:<6} attained at t = {}", op.name(), r.value.to_f64(), r.argmax_t.to_f64());
    }

    // a submodular capacity: (Σ w_i)^0.5, normalized to the unit interval
    let m = DiscreteMeasure::distorted_additive(&[0.1, 0.2, 0.3, 0.25, 0.15], 0.5)?;
    let g: Vec<ExtReal> = [0.9, 0.2, 0.6, 0.4, 1.0].map(ExtReal::new).to_vec();
    let a = Subset::from_indices([0, 2, 4]);
    println!("sugeno on A = {{0,2,4}}: {:.6}", generalized_integral(&BinaryOpSpec::min(), &m, a, &g)?.value.to_f64());
    println!("q-integral (product):   {:.6}", q_integral(&BinaryOpSpec::product(), &m, a, &g)?.value.to_f64());
    println!("seminormed (prodmax):   {:.6}", seminormed(&semicopula("prodmax")?, &m, a, &g)?.value.to_f64());
    Ok(())
}
