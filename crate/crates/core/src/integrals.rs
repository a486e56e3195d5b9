//! The generalized Sugeno integral `sup_{t ≥ 0} t ∘ μ(A ∩ {f ≥ t})`.
//!
//! On a finite space the survival function is a left-continuous step function:
//! with the distinct values `v_1 < … < v_k` of `f` on `A` it is constant on
//! every `(v_{j−1}, v_j]`. Since `t ↦ t ∘ m` is nondecreasing, the supremum over
//! such a piece is attained at its right end, so evaluating the candidates
//! `{0, v_1, …, v_k}` is exact for every nondecreasing `∘` with `a ∘ 0 = 0`.
//!
//! Profiles are searched by branch and bound. For `t` in a cell `[a, b]`,
//! monotonicity gives `t ∘ G(t) ≤ b ∘ G(a)`, which certifies the gap between
//! the best evaluated point and the true supremum without any smoothness.

use serde::Serialize;

use crate::binops::{fuzzy_conjunction_to_circ, semicopula_circ, BinaryOpSpec, Lipschitz};
use crate::extreal::ExtReal;
use crate::measure::{DiscreteMeasure, Subset};
use crate::profile::{Instance, SurvivalProfile};
use crate::transforms::PiecewiseMap;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
const INITIAL_GRID: usize = 1024;
const MAX_ROUNDS: usize = 60;
const MAX_LIVE_CELLS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approximate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: ExtReal,
    pub mode: Mode,
    /// For approximate results: the true supremum lies in `[value, value + error_bound]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
    /// The smallest threshold at which `value` was reached.
    pub argmax_t: ExtReal,
}

impl IntegralResult {
    fn exact(value: ExtReal, argmax_t: ExtReal) -> Self {
        IntegralResult { value, mode: Mode::Exact, error_bound: None, argmax_t }
    }
}

fn require_zero_absorbing(op: &BinaryOpSpec) -> Result<()> {
    if op.flags.zero_absorbing {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{} is not declared zero-absorbing (a ∘ 0 = 0)", op.name())))
    }
}

/// `sup_t t ∘ μ(A ∩ {f ≥ t})` on a finite space, exactly.
pub fn generalized_integral(
    op: &BinaryOpSpec,
    measure: &DiscreteMeasure,
    a: Subset,
    f: &[ExtReal],
) -> Result<IntegralResult> {
    require_zero_absorbing(op)?;
    measure.space().check(a)?;
    if f.len() != measure.space().n() {
        return Err(Error::InvalidValue(format!("function has {} values on {} elements", f.len(), measure.space().n())));
    }
    let mut order: Vec<usize> = a.iter().collect();
    order.sort_by(|&i, &j| f[j].cmp(&f[i]));

    // sweep thresholds from the top: the level set grows as t decreases
    let mut level = Subset::EMPTY;
    let mut k = 0;
    let mut candidates: Vec<(ExtReal, ExtReal)> = Vec::with_capacity(order.len() + 1);
    while k < order.len() {
        let t = f[order[k]];
        while k < order.len() && f[order[k]] == t {
            level = level.with(order[k]);
            k += 1;
        }
        candidates.push((t, op.apply(t, measure.value(level))));
    }
    candidates.push((ExtReal::ZERO, op.apply(ExtReal::ZERO, measure.value(a))));
    // ascending thresholds, so ties resolve to the smallest maximizer
    let (mut best_t, mut best) = candidates[candidates.len() - 1];
    for &(t, v) in candidates.iter().rev() {
        if v > best {
            best = v;
            best_t = t;
        }
    }
    Ok(IntegralResult::exact(best, best_t))
}

pub fn sugeno(measure: &DiscreteMeasure, a: Subset, f: &[ExtReal]) -> Result<IntegralResult> {
    generalized_integral(&BinaryOpSpec::min(), measure, a, f)
}

/// Shilkret integral (`∘` = product with `∞·0 = 0`).
pub fn shilkret(measure: &DiscreteMeasure, a: Subset, f: &[ExtReal]) -> Result<IntegralResult> {
    generalized_integral(&BinaryOpSpec::product(), measure, a, f)
}

fn check_unit_instance(measure: &DiscreteMeasure, a: Subset, f: &[ExtReal]) -> Result<()> {
    if measure.value(a) > ExtReal::ONE {
        return Err(Error::Domain(format!("μ(A) = {} exceeds 1", measure.value(a))));
    }
    for i in a.iter() {
        if f.get(i).is_some_and(|&v| v > ExtReal::ONE) {
            return Err(Error::Domain(format!("f({i}) = {} exceeds 1", f[i])));
        }
    }
    Ok(())
}

/// `sup_{t∈[0,1]} μ(A ∩ {f ≥ t}) ⊗ t` for a fuzzy conjunction `⊗`. The
/// measure is the left operand.
pub fn q_integral(conj: &BinaryOpSpec, measure: &DiscreteMeasure, a: Subset, f: &[ExtReal]) -> Result<IntegralResult> {
    check_unit_instance(measure, a, f)?;
    generalized_integral(&fuzzy_conjunction_to_circ(conj)?, measure, a, f)
}

/// `sup_{t∈[0,1]} S(t, μ(A ∩ {f ≥ t}))` for a semicopula `S`.
pub fn seminormed(s: &BinaryOpSpec, measure: &DiscreteMeasure, a: Subset, f: &[ExtReal]) -> Result<IntegralResult> {
    check_unit_instance(measure, a, f)?;
    generalized_integral(&semicopula_circ(s)?, measure, a, f)
}

#[derive(Clone, Copy)]
struct Cell {
    a: f64,
    b: f64,
    g_a: ExtReal,
    v_a: f64,
    v_b: f64,
    ub: f64,
}

/// `sup_{t∈[0,T]} t ∘ G(t)` by branch and bound on `[0, T]`.
///
/// The returned value is attained at `argmax_t`, so it never overshoots; the
/// search stops once every unexplored cell is certified within `tol`, or
/// after 60 refinement rounds.
pub fn integrate_profile(op: &BinaryOpSpec, g: &SurvivalProfile, tol: f64) -> Result<IntegralResult> {
    require_zero_absorbing(op)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidValue(format!("tolerance must be positive, got {tol}")));
    }
    let top = g.domain_hint;
    if top.is_nan() || top.is_infinite() {
        return Err(Error::NotFinite("the profile has no finite threshold past which it vanishes".into()));
    }
    let v_at = |t: f64, gt: ExtReal| op.apply(ExtReal::new(t), gt);
    let g0 = g.eval(0.0);
    let mut best = v_at(0.0, g0);
    let mut best_t = 0.0;
    if top <= 0.0 {
        return Ok(IntegralResult::exact(best, ExtReal::ZERO));
    }

    let mut ts: Vec<f64> = (0..=INITIAL_GRID).map(|k| top * k as f64 / INITIAL_GRID as f64).collect();
    ts.extend(g.breakpoints.iter().copied().filter(|&t| t > 0.0 && t < top));
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let gs: Vec<ExtReal> = ts.iter().map(|&t| g.eval(t)).collect();
    let vs: Vec<ExtReal> = ts.iter().zip(&gs).map(|(&t, &gt)| v_at(t, gt)).collect();
    for (i, &v) in vs.iter().enumerate() {
        if v > best {
            best = v;
            best_t = ts[i];
        }
    }
    if best.is_infinite() {
        return Ok(IntegralResult::exact(best, ExtReal::new(best_t)));
    }

    let slope = match (op.lipschitz, g.lipschitz_hint) {
        (Lipschitz::Unit, Some(l)) => Some(l.max(1.0)),
        _ => None,
    };
    let upper = |a: f64, b: f64, g_a: ExtReal, v_a: f64, v_b: f64| {
        let mono = v_at(b, g_a).to_f64();
        match slope {
            Some(k) => mono.min(0.5 * (v_a + v_b + k * (b - a))),
            None => mono,
        }
    };
    let mut live: Vec<Cell> = (0..ts.len() - 1)
        .map(|i| {
            let (v_a, v_b) = (vs[i].to_f64(), vs[i + 1].to_f64());
            Cell { a: ts[i], b: ts[i + 1], g_a: gs[i], v_a, v_b, ub: upper(ts[i], ts[i + 1], gs[i], v_a, v_b) }
        })
        .collect();
    let mut settled = f64::NEG_INFINITY;

    for _ in 0..MAX_ROUNDS {
        let incumbent = best.to_f64();
        live.retain(|c| {
            if c.ub <= incumbent + tol {
                settled = settled.max(c.ub);
                false
            } else {
                true
            }
        });
        if live.is_empty() {
            break;
        }
        if live.len() > MAX_LIVE_CELLS {
            live.sort_by(|x, y| y.ub.total_cmp(&x.ub));
            live.truncate(MAX_LIVE_CELLS);
        }
        let mut next = Vec::with_capacity(live.len() * 2);
        for c in &live {
            let m = 0.5 * (c.a + c.b);
            if !(m > c.a && m < c.b) {
                // cannot split further; keep its bound
                next.push(*c);
                continue;
            }
            let g_m = g.eval(m);
            let v = v_at(m, g_m);
            if v > best || (v == best && m < best_t) {
                best = v;
                best_t = m;
            }
            let v_m = v.to_f64();
            next.push(Cell { a: c.a, b: m, g_a: c.g_a, v_a: c.v_a, v_b: v_m, ub: upper(c.a, m, c.g_a, c.v_a, v_m) });
            next.push(Cell { a: m, b: c.b, g_a: g_m, v_a: v_m, v_b: c.v_b, ub: upper(m, c.b, g_m, v_m, c.v_b) });
        }
        live = next;
        if best.is_infinite() {
            return Ok(IntegralResult::exact(best, ExtReal::new(best_t)));
        }
    }
    let incumbent = best.to_f64();
    let worst = live.iter().map(|c| c.ub).fold(settled, f64::max);
    let error_bound = (worst - incumbent).max(0.0);
    Ok(IntegralResult {
        value: best,
        mode: Mode::Approximate,
        error_bound: Some(error_bound),
        argmax_t: ExtReal::new(best_t),
    })
}

/// The integral of `chain(f)` on either kind of instance. `tol` applies to
/// interval instances only.
pub fn integrate(op: &BinaryOpSpec, inst: &Instance, chain: &[&PiecewiseMap], tol: f64) -> Result<IntegralResult> {
    match inst {
        Instance::Discrete { measure, a, .. } => {
            let values = if chain.is_empty() { inst.nonneg_values()? } else { inst.transformed_values(chain)? };
            generalized_integral(op, measure, *a, &values)
        }
        Instance::Interval { .. } => integrate_profile(op, &inst.profile(chain)?, tol),
    }
}
