//! Closed-form right-hand sides of the lower and upper bounds in terms of the
//! inner integral `p`, `μ(A)` and the transform `H`.

use crate::binops::BinaryOpSpec;
use crate::extreal::ExtReal;
use crate::transforms::PiecewiseMap;
use crate::{Error, Result};

/// Converts a value of `H` into `[0, ∞]`.
/// Rounding residue below zero that is read as 0.
const ROUNDOFF: f64 = 1e-12;

pub(crate) fn nonneg(x: f64, what: &str) -> Result<ExtReal> {
    let x = if (-ROUNDOFF..0.0).contains(&x) { 0.0 } else { x };
    ExtReal::try_new(x).ok_or_else(|| Error::Domain(format!("{what} = {x} is negative")))
}

fn finite_p(p: ExtReal) -> Result<f64> {
    p.finite().ok_or_else(|| Error::NotFinite("p".into()))
}

/// The common inputs of the `∘`-parametrized bounds.
#[derive(Clone, Copy)]
pub struct BoundInputs<'a> {
    pub op: &'a BinaryOpSpec,
    pub h: &'a PiecewiseMap,
    pub p: ExtReal,
    pub mu_a: ExtReal,
}

/// Which of the four continuity-free bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ss {
    Ss1,
    Ss2,
    Ss3,
    Ss4,
}

impl<'a> BoundInputs<'a> {
    fn inf_from(&self, p: f64) -> Result<f64> {
        Ok(self.h.interval_extrema(p, f64::INFINITY, true, true)?.inf)
    }

    fn inf_upto(&self, p: f64) -> Result<f64> {
        Ok(self.h.interval_extrema(0.0, p, true, true)?.inf)
    }

    fn sup_from(&self, p: f64) -> Result<f64> {
        Ok(self.h.interval_extrema(p, f64::INFINITY, true, true)?.sup)
    }

    fn sup_upto(&self, p: f64) -> Result<f64> {
        Ok(self.h.interval_extrema(0.0, p, true, true)?.sup)
    }

    fn circ(&self, a: f64, b: ExtReal, what: &str) -> Result<ExtReal> {
        Ok(self.op.apply(nonneg(a, what)?, b))
    }

    /// `inf H ∘ μ(A)`
    fn floor_term(&self) -> Result<ExtReal> {
        self.circ(self.h.global_extrema().inf, self.mu_a, "inf H")
    }

    fn sup_h(&self) -> Result<ExtReal> {
        nonneg(self.h.global_extrema().sup, "sup H")
    }

    /// `[(H(p_-) ∧ inf H([p,∞])) ∘ p] ∨ [inf H ∘ μ(A)]`
    pub fn tw1_i(&self) -> Result<ExtReal> {
        let p = finite_p(self.p)?;
        let inner = self.h.one_sided_limits(p).lower_left.min(self.inf_from(p)?);
        Ok(self.circ(inner, self.p, "H(p_-) ∧ inf H([p,∞])")?.max(self.floor_term()?))
    }

    /// `[(H(p_+) ∧ inf H([0,p])) ∘ (μ(A) − p)] ∨ [inf H ∘ μ(A)]`
    pub fn tw1_ii(&self) -> Result<ExtReal> {
        let p = finite_p(self.p)?;
        let inner = self.h.one_sided_limits(p).lower_right.min(self.inf_upto(p)?);
        Ok(self.circ(inner, self.mu_a.monus(self.p), "H(p_+) ∧ inf H([0,p])")?.max(self.floor_term()?))
    }

    /// `[(H(p^+) ∨ sup H([0,p])) ∘ μ(A)] ∨ [sup H ∘ p]`
    pub fn tw2_i(&self) -> Result<ExtReal> {
        let p = finite_p(self.p)?;
        let inner = self.h.one_sided_limits(p).upper_right.max(self.sup_upto(p)?);
        Ok(self.circ(inner, self.mu_a, "H(p^+) ∨ sup H([0,p])")?.max(self.op.apply(self.sup_h()?, self.p)))
    }

    /// `[(H(p^-) ∨ sup H([p,∞])) ∘ μ(A)] ∨ [sup H ∘ (μ(A) − p)]`
    pub fn tw2_ii(&self) -> Result<ExtReal> {
        let p = finite_p(self.p)?;
        let inner = self.h.one_sided_limits(p).upper_left.max(self.sup_from(p)?);
        Ok(self
            .circ(inner, self.mu_a, "H(p^-) ∨ sup H([p,∞])")?
            .max(self.op.apply(self.sup_h()?, self.mu_a.monus(self.p))))
    }

    /// The four bounds that need no continuity of `∘`.
    pub fn ss(&self, which: Ss) -> Result<ExtReal> {
        let p = finite_p(self.p)?;
        let rest = self.mu_a.monus(self.p);
        Ok(match which {
            Ss::Ss1 => self.circ(self.inf_from(p)?, self.p, "inf H([p,∞])")?.max(self.floor_term()?),
            Ss::Ss2 => self.circ(self.sup_upto(p)?, self.mu_a, "sup H([0,p])")?.max(self.op.apply(self.sup_h()?, self.p)),
            Ss::Ss3 => self.circ(self.inf_upto(p)?, rest, "inf H([0,p])")?.max(self.floor_term()?),
            Ss::Ss4 => self.circ(self.sup_from(p)?, self.mu_a, "sup H([p,∞])")?.max(self.op.apply(self.sup_h()?, rest)),
        })
    }

    /// `[inf H([p,∞]) ∘ p] ∨ [inf H([0,p]) ∘ (μ(A) − p)] ∨ [inf H ∘ μ(A)]`
    pub fn noo1(&self) -> Result<ExtReal> {
        Ok(self.ss(Ss::Ss1)?.max(self.ss(Ss::Ss3)?))
    }

    /// `[sup H([0,p]) ∘ μ(A)] ∨ [sup H([p,∞]) ∘ μ(A)] ∨ [sup H ∘ p] ∨ [sup H ∘ (μ(A) − p)]`
    pub fn in3a(&self) -> Result<ExtReal> {
        Ok(self.ss(Ss::Ss2)?.max(self.ss(Ss::Ss4)?))
    }
}

/// `H(p) ∧ p` for nondecreasing `H`.
pub fn flo(h: &PiecewiseMap, p: ExtReal) -> Result<ExtReal> {
    let pf = finite_p(p)?;
    Ok(nonneg(h.eval(pf)?, "H(p)")?.min(p))
}

/// `H(p) ∧ p` for convex `H` with its minimum at `a ≤ p`.
pub fn convex(h: &PiecewiseMap, p: ExtReal, a: f64) -> Result<ExtReal> {
    let pf = finite_p(p)?;
    if pf < a {
        return Err(Error::Hypothesis(format!("p = {pf} lies below the minimizer {a}")));
    }
    flo(h, p)
}

/// `H(p)·p`, with `p` the Sugeno integral and the left side a Shilkret integral.
pub fn pp1(h: &PiecewiseMap, p: ExtReal) -> Result<ExtReal> {
    let pf = finite_p(p)?;
    Ok(nonneg(h.eval(pf)?, "H(p)")? * p)
}

/// `p ⊗ H(p_-)` with `p` the q-integral of `f`.
pub fn qint(conj: &BinaryOpSpec, h: &PiecewiseMap, p: ExtReal, a0: f64) -> Result<ExtReal> {
    let pf = finite_p(p)?;
    if pf < a0 {
        return Err(Error::Hypothesis(format!("p = {pf} lies below the minimizer {a0}")));
    }
    let left = h.one_sided_limits(pf).lower_left;
    Ok(conj.apply(p, nonneg(left, "H(p_-)")?))
}

/// `S(H(p_S), p_S)` with `p_S` the seminormed integral of `f`.
pub fn seminormed(s: &BinaryOpSpec, h: &PiecewiseMap, p_s: ExtReal, a0: f64) -> Result<ExtReal> {
    let pf = finite_p(p_s)?;
    if pf < a0 {
        return Err(Error::Hypothesis(format!("p_S = {pf} lies below {a0}")));
    }
    Ok(s.apply(nonneg(h.eval(pf)?, "H(p_S)")?, p_s))
}

/// Upper bound for `H` increasing on `[0, c]` and decreasing after `c`:
/// `(H(p) ∨ p) ∧ H(c) ∧ μ(A)` when `p ≤ c`, and
/// `(H(p) ∨ (μ(A) − p)) ∧ H(c) ∧ μ(A)` when `c < p` and `μ` is weakly
/// superadditive on `A`.
pub fn co2(h: &PiecewiseMap, p: ExtReal, c: f64, mu_a: ExtReal, weak_superadditive: bool) -> Result<ExtReal> {
    let pf = finite_p(p)?;
    let hp = nonneg(h.eval(pf)?, "H(p)")?;
    let hc = nonneg(h.eval(c)?, "H(c)")?;
    if pf <= c {
        Ok(hp.max(p).min(hc).min(mu_a))
    } else if weak_superadditive {
        Ok(hp.max(mu_a.monus(p)).min(hc).min(mu_a))
    } else {
        Err(Error::Hypothesis(format!("p = {pf} exceeds the peak {c} and μ is not weakly superadditive on A")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{Domain, Expr, Mono, Segment};

    fn e(x: f64) -> ExtReal {
        ExtReal::new(x)
    }

    fn square_over_three() -> PiecewiseMap {
        PiecewiseMap::power(1.0 / 3.0, 2.0).unwrap()
    }

    fn shifted_square() -> PiecewiseMap {
        PiecewiseMap::quadratic_on(0.25, -1.0, 1.0, 0.0, f64::INFINITY, Domain::Nonneg).unwrap()
    }

    fn jump_map() -> PiecewiseMap {
        PiecewiseMap::new(
            vec![
                Segment::new(0.0, 1.0, Expr::Const(0.0), Mono::Const),
                Segment::point(1.0, 0.5),
                Segment::new(1.0, 2.0, Expr::Quad { c0: 0.0, c1: 0.0, c2: 1.0 }, Mono::Inc),
            ],
            Domain::Nonneg,
        )
        .unwrap()
    }

    #[test]
    fn lower_bounds_with_min() {
        let min = BinaryOpSpec::min();
        let h = square_over_three();
        let b = BoundInputs { op: &min, h: &h, p: e(3.0), mu_a: e(5.0) };
        assert!((b.tw1_i().unwrap().to_f64() - 3.0).abs() < 1e-15);
        let sq = shifted_square();
        let b = BoundInputs { op: &min, h: &sq, p: e(2.5), mu_a: e(5.0) };
        assert_eq!(b.tw1_i().unwrap(), e(2.5));
        assert_eq!(b.noo1().unwrap(), e(2.5));
        let zero = PiecewiseMap::constant(0.0, Domain::Nonneg);
        let b = BoundInputs { op: &min, h: &zero, p: e(2.5), mu_a: e(5.0) };
        assert_eq!(b.tw1_i().unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn tw1_ii_examples() {
        let min = BinaryOpSpec::min();
        let dec = PiecewiseMap::affine_on(2.0, -1.0, 0.0, 2.0, Domain::Nonneg).unwrap();
        let b = BoundInputs { op: &min, h: &dec, p: e(1.0), mu_a: e(2.0) };
        assert_eq!(b.tw1_ii().unwrap(), e(1.0));
        let k = PiecewiseMap::constant(0.7, Domain::Nonneg);
        let b = BoundInputs { op: &min, h: &k, p: e(1.0), mu_a: e(2.0) };
        assert_eq!(b.tw1_ii().unwrap(), e(0.7));
        let inc = PiecewiseMap::power(1.0, 2.0).unwrap();
        let b = BoundInputs { op: &min, h: &inc, p: e(1.0), mu_a: e(2.0) };
        assert_eq!(b.tw1_ii().unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn upper_bounds_with_min() {
        let min = BinaryOpSpec::min();
        let h = square_over_three();
        let b = BoundInputs { op: &min, h: &h, p: e(3.0), mu_a: e(5.0) };
        assert!((b.tw2_i().unwrap().to_f64() - 3.0).abs() < 1e-15);
        let dec = PiecewiseMap::affine_on(2.0, -1.0, 0.0, 2.0, Domain::Nonneg).unwrap();
        let b = BoundInputs { op: &min, h: &dec, p: e(1.0), mu_a: e(2.0) };
        assert_eq!(b.tw2_ii().unwrap(), e(1.0));
        let k = PiecewiseMap::constant(0.7, Domain::Nonneg);
        let b = BoundInputs { op: &min, h: &k, p: e(1.0), mu_a: e(2.0) };
        assert_eq!(b.tw2_i().unwrap(), e(0.7));
        assert_eq!(b.tw2_ii().unwrap(), e(0.7));
        assert_eq!(b.in3a().unwrap(), e(0.7));
        assert_eq!(b.ss(Ss::Ss2).unwrap(), e(0.7));
    }

    #[test]
    fn continuity_free_bound_beats_left_limit_bound() {
        let min = BinaryOpSpec::min();
        let h = jump_map();
        let b = BoundInputs { op: &min, h: &h, p: e(1.0), mu_a: e(2.0) };
        assert_eq!(b.ss(Ss::Ss1).unwrap(), e(0.5));
        assert_eq!(b.tw1_i().unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn corollary_forms() {
        let sq = shifted_square();
        assert_eq!(convex(&sq, e(2.5), 0.5).unwrap(), e(2.5));
        assert!(convex(&sq, e(0.2), 0.5).is_err());
        let x2 = PiecewiseMap::power(1.0, 2.0).unwrap();
        assert_eq!(convex(&x2, e(0.5), 0.0).unwrap(), e(0.25));
        assert_eq!(flo(&PiecewiseMap::identity(Domain::Nonneg), e(1.7)).unwrap(), e(1.7));
        for q in [0.5, 1.0, 2.0] {
            let h = PiecewiseMap::power(1.0, 1.0 / q).unwrap();
            let p = e(0.5f64.powf(q));
            assert!((pp1(&h, p).unwrap().to_f64() - 0.5f64.powf(q + 1.0)).abs() < 1e-15);
            assert!((flo(&h, p).unwrap().to_f64() - 0.5f64.min(0.5f64.powf(q))).abs() < 1e-15);
        }
        let prod = crate::binops::tnorm("product").unwrap();
        assert_eq!(qint(&prod, &x2, e(0.5), 0.0).unwrap(), e(0.125));
        let root = PiecewiseMap::power(1.0, 0.5).unwrap();
        assert_eq!(seminormed(&prod, &root, e(0.25), 0.0).unwrap(), e(0.125));
    }

    #[test]
    fn unimodal_upper_bound() {
        let peak = PiecewiseMap::quadratic_on(0.0, 2.0, -1.0, 0.0, 2.0, Domain::Nonneg).unwrap();
        assert_eq!(co2(&peak, e(0.5), 1.0, e(2.0), false).unwrap(), e(0.75));
        assert_eq!(co2(&peak, e(1.0), 1.0, e(2.0), false).unwrap(), e(1.0));
        assert!(co2(&peak, e(1.5), 1.0, e(2.0), false).is_err());
        assert_eq!(co2(&peak, e(1.5), 1.0, e(2.0), true).unwrap(), e(0.75));
    }
}
