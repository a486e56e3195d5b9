//! A brute-force evaluation of `sup_t t ∘ μ(A ∩ {f ≥ t})` on a dense set of
//! thresholds. It deliberately avoids the candidate argument used by
//! [`crate::integrals`] so that the two can be compared.

use crate::binops::BinaryOpSpec;
use crate::extreal::ExtReal;
use crate::measure::{DiscreteMeasure, Subset};

/// Thresholds: 0, every value of `f` on `A`, the midpoints between
/// consecutive values, and the neighbouring floats of every value.
pub fn oracle_integral(op: &BinaryOpSpec, measure: &DiscreteMeasure, a: Subset, f: &[ExtReal]) -> ExtReal {
    let mut finite: Vec<f64> = Vec::new();
    let mut has_inf = false;
    for (i, v) in f.iter().enumerate() {
        if a.contains(i) {
            match v.finite() {
                Some(x) => finite.push(x),
                None => has_inf = true,
            }
        }
    }
    finite.sort_by(f64::total_cmp);
    finite.dedup();

    let mut thresholds = vec![0.0];
    for (k, &x) in finite.iter().enumerate() {
        thresholds.push(x);
        thresholds.push(x.next_up());
        if x > 0.0 {
            thresholds.push(x.next_down());
        }
        if let Some(&y) = finite.get(k + 1) {
            thresholds.push(x + (y - x) / 2.0);
        }
    }
    if let Some(&top) = finite.last() {
        thresholds.push(top * 2.0 + 1.0);
    }

    let level = |t: ExtReal| {
        let mut bits = 0u32;
        for (i, v) in f.iter().enumerate() {
            if a.contains(i) && *v >= t {
                bits |= 1 << i;
            }
        }
        measure.value(Subset::from_bits(bits))
    };

    let mut best = ExtReal::ZERO;
    for t in thresholds.into_iter().filter(|t| *t >= 0.0) {
        let t = ExtReal::new(t);
        let v = op.apply(t, level(t));
        if v > best {
            best = v;
        }
    }
    if has_inf {
        let v = op.apply(ExtReal::INFINITY, level(ExtReal::INFINITY));
        if v > best {
            best = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::FiniteSpace;

    #[test]
    fn counting_example_and_zero() {
        let space = FiniteSpace::new(5).unwrap();
        let m = DiscreteMeasure::counting(space);
        let f: Vec<_> = (1..=5).map(|i| ExtReal::new(i as f64)).collect();
        assert_eq!(oracle_integral(&BinaryOpSpec::min(), &m, space.full(), &f), ExtReal::new(3.0));
        let zero = vec![ExtReal::ZERO; 5];
        assert_eq!(oracle_integral(&BinaryOpSpec::min(), &m, space.full(), &zero), ExtReal::ZERO);
        assert_eq!(oracle_integral(&BinaryOpSpec::product(), &m, space.full(), &f), ExtReal::new(9.0));
    }
}
