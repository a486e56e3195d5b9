//! Functions for which a bound holds with equality.
//!
//! - `f = μ(A)·𝟙_A` for tw1i, ss1 (`H(p) = inf H([p,∞))`) and tw2ii, ss4
//!   (`H(p) = sup H([p,∞))`), with `p = μ(A)`; tw1i additionally needs
//!   `H(p_-) ≥ H(p)` and tw2ii needs `H(p^-) ≤ H(p)`.
//! - `f = y₀·𝟙_A` with `H(y₀) = inf H` for tw1ii, ss3 and `H(y₀) = sup H`
//!   for tw2i, ss2. tw1ii and ss3 also need `inf H([0,p]) = inf H`, with
//!   `p = y₀ ∧ μ(A)`.
//! - `f = μ(B)·𝟙_B − μ(A∖B)·𝟙_{A∖B}` with `H(μ(B)) = μ(B)` for the signed
//!   bound; `B = ∅` qualifies whenever `H(0) = 0`.

use crate::bounds::{BoundId, BoundInstance};
use crate::extreal::{ExtReal, SignedExtReal};
use crate::measure::{DiscreteMeasure, Subset};
use crate::profile::Instance;
use crate::transforms::PiecewiseMap;
use crate::{Error, Result};

pub const WITNESS_BOUNDS: [BoundId; 9] = [
    BoundId::Tw1i,
    BoundId::Tw1ii,
    BoundId::Tw2i,
    BoundId::Tw2ii,
    BoundId::Ss1,
    BoundId::Ss2,
    BoundId::Ss3,
    BoundId::Ss4,
    BoundId::Signed001,
];

fn unmet(why: impl Into<String>) -> Error {
    Error::Hypothesis(format!("conditions unmet: {}", why.into()))
}

fn indicator(measure: &DiscreteMeasure, a: Subset, y: f64) -> Vec<ExtReal> {
    (0..measure.space().n()).map(|i| if a.contains(i) { ExtReal::new(y) } else { ExtReal::ZERO }).collect()
}

/// Points where `H` can attain an extremum: the domain ends and breakpoints.
fn extremum_candidates(h: &PiecewiseMap) -> Vec<f64> {
    let mut xs = vec![h.lo().max(0.0)];
    xs.extend(h.breakpoints().into_iter().filter(|&x| x >= 0.0));
    if h.hi().is_finite() {
        xs.push(h.hi());
    }
    xs
}

/// A point `y₀ ≥ 0` with `H(y₀) = target`, if `H` attains it.
fn attaining_point(h: &PiecewiseMap, target: f64) -> Option<f64> {
    extremum_candidates(h).into_iter().find(|&x| h.in_domain(x) && h.eval(x).ok() == Some(target))
}

/// Builds the equality witness of `bound` for `H` on `(μ, A)`.
pub fn attainability_witness(bound: BoundId, measure: &DiscreteMeasure, a: Subset, h: &PiecewiseMap) -> Result<BoundInstance> {
    measure.space().check(a)?;
    let mu_a = measure.value(a);
    let mu = mu_a.finite().ok_or_else(|| unmet("μ(A) is infinite"))?;
    let unsigned = |y: f64| -> Result<BoundInstance> {
        let inst = Instance::discrete(measure.clone(), a, indicator(measure, a, y))?;
        Ok(BoundInstance::new(inst, h.clone()))
    };
    match bound {
        BoundId::Tw1i | BoundId::Ss1 | BoundId::Tw2ii | BoundId::Ss4 => {
            if !h.in_domain(mu) {
                return Err(unmet(format!("μ(A) = {mu} is outside the domain of H")));
            }
            let hp = h.eval(mu)?;
            let tail = h.interval_extrema(mu, f64::INFINITY, true, true)?;
            let limits = h.one_sided_limits(mu);
            let (ok, what) = match bound {
                BoundId::Tw1i => (hp == tail.inf && limits.lower_left >= hp, "H(p) = inf H([p,∞)) and H(p_-) ≥ H(p)"),
                BoundId::Ss1 => (hp == tail.inf, "H(p) = inf H([p,∞))"),
                BoundId::Tw2ii => (hp == tail.sup && limits.upper_left <= hp, "H(p) = sup H([p,∞)) and H(p^-) ≤ H(p)"),
                _ => (hp == tail.sup, "H(p) = sup H([p,∞))"),
            };
            if !ok {
                return Err(unmet(format!("{what} fails at p = μ(A) = {mu}")));
            }
            unsigned(mu)
        }
        BoundId::Tw1ii | BoundId::Ss3 => {
            let inf = h.global_extrema().inf;
            let y0 = attaining_point(h, inf).ok_or_else(|| unmet("H does not attain its infimum"))?;
            let p = y0.min(mu);
            if !h.in_domain(0.0) || h.interval_extrema(0.0, p, true, true)?.inf != inf {
                return Err(unmet(format!("inf H([0,{p}]) differs from inf H")));
            }
            unsigned(y0)
        }
        BoundId::Tw2i | BoundId::Ss2 => {
            let sup = h.global_extrema().sup;
            if !sup.is_finite() {
                return Err(unmet("H is unbounded"));
            }
            let y0 = attaining_point(h, sup).ok_or_else(|| unmet("H does not attain its supremum"))?;
            unsigned(y0)
        }
        BoundId::Signed001 => {
            if !h.in_domain(0.0) || h.eval(0.0)? != 0.0 {
                return Err(unmet("H(0) ≠ 0"));
            }
            let fixed = |b: Subset| {
                let m = measure.value(b).to_f64();
                h.in_domain(m) && h.eval(m).ok() == Some(m)
            };
            let b = a.submasks().filter(|&b| fixed(b)).max_by_key(|b| b.len()).unwrap_or(Subset::EMPTY);
            let (mb, rest) = (measure.value(b).to_f64(), measure.value(a.difference(b)).to_f64());
            if !h.in_domain(-rest) {
                return Err(unmet(format!("−μ(A∖B) = {} is outside the domain of H", -rest)));
            }
            let f = (0..measure.space().n())
                .map(|i| {
                    if b.contains(i) {
                        SignedExtReal::new(mb)
                    } else if a.contains(i) {
                        SignedExtReal::new(-rest)
                    } else {
                        SignedExtReal::new(0.0)
                    }
                })
                .collect();
            Ok(BoundInstance::new(Instance::signed(measure.clone(), a, f)?, h.clone()))
        }
        other => Err(unmet(format!("no equality witness is known for {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::check_bound;
    use crate::measure::FiniteSpace;
    use crate::transforms::Domain;

    fn lower_tent() -> PiecewiseMap {
        // 2 − x on [0, 2], then x − 2
        PiecewiseMap::new(
            vec![
                crate::transforms::Segment::new(0.0, 2.0, crate::transforms::Expr::Affine { a: 2.0, b: -1.0 }, crate::transforms::Mono::Dec),
                crate::transforms::Segment::new(2.0, f64::INFINITY, crate::transforms::Expr::Affine { a: -2.0, b: 1.0 }, crate::transforms::Mono::Inc),
            ],
            Domain::Nonneg,
        )
        .unwrap()
    }

    #[test]
    fn indicator_witnesses_are_tight() {
        let m = DiscreteMeasure::additive(&[0.5, 1.0, 0.5]).unwrap();
        let a = m.space().full();
        let inc = PiecewiseMap::power(1.0, 0.5).unwrap();
        for id in [BoundId::Tw1i, BoundId::Ss1] {
            let bi = attainability_witness(id, &m, a, &inc).unwrap();
            let r = check_bound(&bi, id, 0.0).unwrap();
            assert!(r.slack.to_f64().abs() <= 1e-12, "{id}: {r:?}");
        }
        let dec = PiecewiseMap::affine_on(3.0, -1.0, 0.0, 3.0, Domain::Nonneg).unwrap();
        for id in [BoundId::Tw2ii, BoundId::Ss4] {
            let bi = attainability_witness(id, &m, a, &dec).unwrap();
            let r = check_bound(&bi, id, 0.0).unwrap();
            assert!(r.slack.to_f64().abs() <= 1e-12, "{id}: {r:?}");
        }
        for id in [BoundId::Tw1ii, BoundId::Ss3] {
            let bi = attainability_witness(id, &m, a, &lower_tent()).unwrap();
            let r = check_bound(&bi, id, 0.0).unwrap();
            assert!(r.slack.to_f64().abs() <= 1e-12, "{id}: {r:?}");
        }
        for id in [BoundId::Tw2i, BoundId::Ss2] {
            let bi = attainability_witness(id, &m, a, &dec).unwrap();
            let r = check_bound(&bi, id, 0.0).unwrap();
            assert!(r.slack.to_f64().abs() <= 1e-12, "{id}: {r:?}");
        }
    }

    #[test]
    fn unmet_conditions_are_reported() {
        let m = DiscreteMeasure::counting(FiniteSpace::new(2).unwrap());
        let a = m.space().full();
        let dec = PiecewiseMap::affine_on(3.0, -1.0, 0.0, 3.0, Domain::Nonneg).unwrap();
        let err = attainability_witness(BoundId::Tw1i, &m, a, &dec).unwrap_err();
        assert!(err.to_string().contains("conditions unmet"));
        let unbounded = PiecewiseMap::power(1.0, 1.0).unwrap();
        assert!(attainability_witness(BoundId::Tw2i, &m, a, &unbounded).is_err());
        assert!(attainability_witness(BoundId::Flo, &m, a, &unbounded).is_err());
    }

    #[test]
    fn signed_witness_uses_a_fixed_point() {
        let m = DiscreteMeasure::additive(&[0.25, 0.5]).unwrap();
        let a = m.space().full();
        let id = PiecewiseMap::identity(Domain::Real);
        let bi = attainability_witness(BoundId::Signed001, &m, a, &id).unwrap();
        let r = check_bound(&bi, BoundId::Signed001, 0.0).unwrap();
        assert!(r.slack.to_f64().abs() <= 1e-12);
        let cube = PiecewiseMap::odd_power(1.0, 3).unwrap();
        let bi = attainability_witness(BoundId::Signed001, &m, a, &cube).unwrap();
        assert!(check_bound(&bi, BoundId::Signed001, 0.0).unwrap().slack.to_f64().abs() <= 1e-12);
    }
}
