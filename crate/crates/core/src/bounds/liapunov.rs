//! Upper bounds for concave transforms from a support line
//! `H(y) ≤ H(p) + m(y − p)`:
//!
//! `∫∘ H(f) ≤ (H(p) + m(c − p))⁺ ∘ μ(A) + ∫∘ (m(f − c))⁺` for every real `c`,
//! whenever `∘` is subdistributive over addition. The minimization over `c`
//! is done on a grid followed by golden-section refinement.

use serde::Serialize;

use crate::binops::BinaryOpSpec;
use crate::bounds::formulas::nonneg;
use crate::extreal::ExtReal;
use crate::integrals::integrate;
use crate::profile::Instance;
use crate::transforms::{Domain, PiecewiseMap, SupportLine};
use crate::{Error, Result};

pub const GRID_POINTS: usize = 257;
pub const GOLDEN_STEPS: usize = 20;

/// `x ↦ m(x − c)` on the whole line.
pub(crate) fn shifted_line(m: f64, c: f64) -> Result<PiecewiseMap> {
    PiecewiseMap::affine_on(-m * c, m, f64::NEG_INFINITY, f64::INFINITY, Domain::Real)
}

/// One evaluation of the bound at a fixed `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tw4Point {
    pub c: f64,
    pub value: ExtReal,
    /// Upper bound on the error of the inner profile integral, if any.
    pub error_bound: f64,
}

/// `(H(p) + m(c − p))⁺ ∘ μ(A) + ∫∘ (m(f − c))⁺`.
pub fn tw4_at(op: &BinaryOpSpec, inst: &Instance, line: &SupportLine, c: f64, tol: f64) -> Result<Tw4Point> {
    let level = line.at(c).max(0.0);
    let head = op.apply(nonneg(level, "(H(p) + m(c − p))⁺")?, inst.mu_a());
    let g = shifted_line(line.slope, c)?;
    let tail = integrate(op, inst, &[&g], tol)?;
    Ok(Tw4Point { c, value: head + tail.value, error_bound: tail.error_bound.unwrap_or(0.0) })
}

/// 257 points on `[−2μ(A)·max(1, m), max f]`.
pub fn default_c_grid(mu_a: ExtReal, slope: f64, f_max: f64) -> Result<Vec<f64>> {
    let mu = mu_a.finite().ok_or_else(|| Error::NotFinite("μ(A) is infinite; give an explicit c grid".into()))?;
    let lo = -2.0 * mu * slope.max(1.0);
    let hi = if f_max > lo { f_max } else { lo + 1.0 };
    Ok((0..GRID_POINTS).map(|k| lo + (hi - lo) * k as f64 / (GRID_POINTS - 1) as f64).collect())
}

/// The smallest bound over `grid`, refined by golden-section search between
/// the neighbours of the best grid point.
pub fn minimize_tw4(
    op: &BinaryOpSpec,
    inst: &Instance,
    line: &SupportLine,
    grid: &[f64],
    tol: f64,
) -> Result<Tw4Point> {
    if grid.is_empty() {
        return Err(Error::InvalidValue("empty c grid".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let points = sorted.iter().map(|&c| tw4_at(op, inst, line, c, tol)).collect::<Result<Vec<_>>>()?;
    let k = (0..points.len()).min_by(|&i, &j| points[i].value.cmp(&points[j].value)).expect("grid is nonempty");
    let mut best = points[k];
    if points.len() < 3 || !best.value.is_finite() {
        return Ok(best);
    }
    let (mut a, mut b) = (sorted[k.saturating_sub(1)], sorted[(k + 1).min(sorted.len() - 1)]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = tw4_at(op, inst, line, x1, tol)?;
    let mut f2 = tw4_at(op, inst, line, x2, tol)?;
    for _ in 0..GOLDEN_STEPS {
        for pt in [f1, f2] {
            if pt.value < best.value {
                best = pt;
            }
        }
        if f1.value <= f2.value {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = tw4_at(op, inst, line, x1, tol)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = tw4_at(op, inst, line, x2, tol)?;
        }
    }
    for pt in [f1, f2] {
        if pt.value < best.value {
            best = pt;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::IntervalMeasure;

    fn root_example() -> (Instance, SupportLine) {
        let f = PiecewiseMap::affine_on(0.0, 1.0, 0.0, 5.0, Domain::Nonneg).unwrap();
        let inst = Instance::interval(IntervalMeasure::Lebesgue, 0.0, 5.0, f).unwrap();
        let h = PiecewiseMap::power(1.0, 0.5).unwrap();
        let line = h.support_slope(2.5, (0.0, 20.0), None).unwrap();
        (inst, line)
    }

    #[test]
    fn grid_contains_the_minimizer() {
        let grid = default_c_grid(ExtReal::new(5.0), 1.0 / 10f64.sqrt(), 5.0).unwrap();
        assert_eq!(grid.len(), GRID_POINTS);
        assert_eq!(grid[0], -10.0);
        assert_eq!(grid[128], -2.5);
    }

    #[test]
    fn minimum_near_minus_two_and_a_half() {
        let (inst, line) = root_example();
        let min = BinaryOpSpec::min();
        let at = tw4_at(&min, &inst, &line, -2.5, 1e-10).unwrap();
        assert!((at.value.to_f64() - 1.8019).abs() < 1e-4);
        let grid = default_c_grid(inst.mu_a(), line.slope, 5.0).unwrap();
        let best = minimize_tw4(&min, &inst, &line, &grid, 1e-10).unwrap();
        assert!(best.value.to_f64() <= 1.8020);
        assert!((best.c + 2.5).abs() < 0.05);
        let at_p = tw4_at(&min, &inst, &line, 2.5, 1e-10).unwrap();
        assert!(at_p.value > best.value);
    }

    #[test]
    fn linear_transform_through_origin() {
        let (inst, _) = root_example();
        let line = SupportLine { p: 2.5, slope: 0.5, value: 1.25 };
        let min = BinaryOpSpec::min();
        let at = tw4_at(&min, &inst, &line, 0.0, 1e-10).unwrap();
        let half = PiecewiseMap::affine_on(0.0, 0.5, 0.0, f64::INFINITY, Domain::Nonneg).unwrap();
        let direct = integrate(&min, &inst, &[&half], 1e-10).unwrap();
        assert!((at.value.to_f64() - direct.value.to_f64()).abs() < 1e-9);
        assert!(minimize_tw4(&min, &inst, &line, &[], 1e-10).is_err());
    }
}
