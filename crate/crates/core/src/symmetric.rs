//! Signed functions: positive and negative parts, the `⋆`-symmetric Sugeno
//! integral `Su(f⁺) ⋆ (−Su(f⁻))`, the `(⋆, ∘)`-asymmetric integral, and the
//! upper bound for nondecreasing `H` with `H(0) = 0`.

use serde::Serialize;

use crate::binops::{BinaryOpSpec, MixedOpSpec};
use crate::bounds::formulas::nonneg;
use crate::extreal::{ExtReal, SignedExtReal};
use crate::integrals::{generalized_integral, integrate, IntegralResult};
use crate::measure::{DiscreteMeasure, Subset};
use crate::profile::Instance;
use crate::transforms::{Domain, PiecewiseMap};
use crate::{Error, Result};

/// `(f ∨ 0, (−f) ∨ 0)` pointwise.
pub fn split_parts(f: &[SignedExtReal]) -> (Vec<ExtReal>, Vec<ExtReal>) {
    f.iter().map(|v| (v.positive_part(), v.negative_part())).unzip()
}

/// `H₁(x) = H(x)` and `H₂(x) = −H(−x)` for `x ≥ 0`, so that
/// `H(f) ∨ 0 = H₁(f⁺)` and `(−H(f)) ∨ 0 = H₂(f⁻)`.
pub fn split_transform(h: &PiecewiseMap) -> Result<(PiecewiseMap, PiecewiseMap)> {
    if !h.in_domain(0.0) || h.eval(0.0)? != 0.0 {
        return Err(Error::Hypothesis("H(0) must be 0".into()));
    }
    if !h.is_nondecreasing() {
        return Err(Error::Hypothesis("H must be nondecreasing".into()));
    }
    let h1 = h.restrict(0.0, f64::INFINITY, Domain::Nonneg)?;
    let h2 = h.reflect()?.negate()?.restrict(0.0, f64::INFINITY, Domain::Nonneg)?;
    Ok((h1, h2))
}

/// The two part-integrals and their `⋆`-combination.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SymmetricValue {
    pub positive: IntegralResult,
    pub negative: IntegralResult,
    pub value: SignedExtReal,
}

fn finite_part(r: IntegralResult, which: &str) -> Result<IntegralResult> {
    if r.value.is_finite() {
        Ok(r)
    } else {
        Err(Error::NotFinite(format!("the integral of the {which} part")))
    }
}

/// `Su(g⁺) ⋆ (−Su(g⁻))` for `g = H(f)`, or `g = f` when `h` is `None`.
pub fn symmetric_integral(
    star: &MixedOpSpec,
    inst: &Instance,
    h: Option<&PiecewiseMap>,
    tol: f64,
) -> Result<SymmetricValue> {
    let pos = PiecewiseMap::positive_part();
    let neg = PiecewiseMap::negative_part();
    let min = BinaryOpSpec::min();
    let (cp, cn): (Vec<&PiecewiseMap>, Vec<&PiecewiseMap>) = match h {
        Some(h) => (vec![h, &pos], vec![h, &neg]),
        None => (vec![&pos], vec![&neg]),
    };
    let positive = finite_part(integrate(&min, inst, &cp, tol)?, "positive")?;
    let negative = finite_part(integrate(&min, inst, &cn, tol)?, "negative")?;
    let value = star.apply(positive.value, -negative.value.to_signed());
    Ok(SymmetricValue { positive, negative, value })
}

/// `[(H(p₁) ∨ p₁) ∧ μ(A)] ⋆ [H(−p₂) ∨ (−p₂)]` with `p₁ = Su(f⁺)`, `p₂ = Su(f⁻)`.
pub fn upper_bound_001(
    h: &PiecewiseMap,
    p1: ExtReal,
    p2: ExtReal,
    mu_a: ExtReal,
    star: &MixedOpSpec,
) -> Result<SignedExtReal> {
    let (Some(x1), Some(x2)) = (p1.finite(), p2.finite()) else {
        return Err(Error::NotFinite("p₁ and p₂ must be finite".into()));
    };
    if x1 > h.global_extrema().sup {
        return Err(Error::Hypothesis(format!("p₁ = {x1} exceeds sup H")));
    }
    let first = nonneg(h.eval(x1)?.max(x1), "H(p₁) ∨ p₁")?.min(mu_a);
    let second = SignedExtReal::new(h.eval(-x2)?.max(-x2));
    Ok(star.apply(first, second))
}

/// `∫∘ g⁺ dμ ⋆ (−∫∘ g⁻ dν)` on a finite space.
pub fn asymmetric_integral(
    op: &BinaryOpSpec,
    star: &MixedOpSpec,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    a: Subset,
    g: &[SignedExtReal],
) -> Result<SignedExtReal> {
    if mu.space() != nu.space() {
        return Err(Error::InvalidValue("μ and ν live on different spaces".into()));
    }
    let (plus, minus) = split_parts(g);
    let p = finite_part(generalized_integral(op, mu, a, &plus)?, "positive")?;
    let m = finite_part(generalized_integral(op, nu, a, &minus)?, "negative")?;
    Ok(star.apply(p.value, -m.value.to_signed()))
}

/// Bounds on `Su(H(f))` for `H ≥ 0` nonincreasing on `x ≤ 0`, nondecreasing
/// on `x ≥ 0`, `H(0) = 0`: the lower bound is `Su(H(f⁺)) ∨ Su(H(−f⁻))` and,
/// for subadditive `μ`, the upper bound is their sum.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MixedBounds {
    pub positive: IntegralResult,
    pub negative: IntegralResult,
    pub lower: ExtReal,
    pub upper: ExtReal,
}

pub fn mixed_monotone_bounds(h: &PiecewiseMap, inst: &Instance, tol: f64) -> Result<MixedBounds> {
    let pos = PiecewiseMap::positive_part();
    let neg = PiecewiseMap::negative_part();
    let flip = PiecewiseMap::affine_on(0.0, -1.0, f64::NEG_INFINITY, f64::INFINITY, Domain::Real)?;
    let min = BinaryOpSpec::min();
    let positive = integrate(&min, inst, &[&pos, h], tol)?;
    let negative = integrate(&min, inst, &[&neg, &flip, h], tol)?;
    Ok(MixedBounds { positive, negative, lower: positive.value.max(negative.value), upper: positive.value + negative.value })
}
