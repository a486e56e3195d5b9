//! Random measures, functions and transforms for the fuzzer and the
//! property tests. Every generator takes an explicit RNG so runs are
//! reproducible from a seed.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::extreal::{ExtReal, SignedExtReal};
use crate::measure::{DiscreteMeasure, FiniteSpace, Subset};
use crate::transforms::{Domain, Expr, Mono, PiecewiseMap, Segment};
use crate::verify::predicates::{is_subadditive, is_superadditive, is_weakly_subadditive, is_weakly_superadditive};
use crate::{Error, Result};

/// How random measures are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// Monotone closure of uniform raw values.
    General,
    /// `(Σ w_i)^α` with `α < 1`.
    Subadditive,
    /// `(Σ w_i)^α` with `α > 1`.
    Superadditive,
    /// Any construction, kept only if weakly subadditive on `A`.
    WeaklySub,
    /// Any construction, kept only if weakly superadditive on `A`.
    WeaklySuper,
    /// A per-draw choice among the constructions above.
    #[default]
    Mixed,
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "general" => Ok(MeasureKind::General),
            "subadditive" => Ok(MeasureKind::Subadditive),
            "superadditive" => Ok(MeasureKind::Superadditive),
            "weakly_sub" | "weakly_subadditive" => Ok(MeasureKind::WeaklySub),
            "weakly_super" | "weakly_superadditive" => Ok(MeasureKind::WeaklySuper),
            "mixed" => Ok(MeasureKind::Mixed),
            other => Err(Error::Parse(format!("unknown measure kind {other:?}"))),
        }
    }
}

const RESAMPLES: usize = 100;

/// Keeps shifted transforms strictly positive despite rounding.
const MARGIN: f64 = 1e-9;

/// `μ(B) = max_{C ⊆ B} raw(C)` with `raw(∅) = 0`.
pub fn closure_measure<R: Rng>(rng: &mut R, n: usize) -> Result<DiscreteMeasure> {
    let space = FiniteSpace::new(n)?;
    let mut best: Vec<f64> = (0..space.subset_count()).map(|b| if b == 0 { 0.0 } else { rng.gen::<f64>() }).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for b in 0..best.len() {
            if b & bit != 0 && best[b ^ bit] > best[b] {
                best[b] = best[b ^ bit];
            }
        }
    }
    Ok(DiscreteMeasure::from_fn(space, |s| ExtReal::new(best[s.bits() as usize])))
}

/// `(Σ_{i∈B} w_i)^α` with weights in `[0.05, 1)`.
pub fn distorted_measure<R: Rng>(rng: &mut R, n: usize, alpha: f64) -> Result<DiscreteMeasure> {
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    DiscreteMeasure::distorted_additive(&weights, alpha)
}

/// A measure of the requested kind. Kind-tagged measures are re-verified by
/// their predicate and redrawn on failure.
pub fn random_measure<R: Rng>(rng: &mut R, n: usize, kind: MeasureKind, a: Subset) -> Result<DiscreteMeasure> {
    for _ in 0..RESAMPLES {
        let kind = match kind {
            MeasureKind::Mixed => *[MeasureKind::General, MeasureKind::Subadditive, MeasureKind::Superadditive]
                .choose(rng)
                .expect("nonempty"),
            k => k,
        };
        let m = match kind {
            MeasureKind::General => closure_measure(rng, n)?,
            MeasureKind::Subadditive => {
                let alpha = rng.gen_range(0.3..1.0);
                distorted_measure(rng, n, alpha)?
            }
            MeasureKind::Superadditive => {
                let alpha = rng.gen_range(1.0..3.0);
                distorted_measure(rng, n, alpha)?
            }
            MeasureKind::WeaklySub | MeasureKind::WeaklySuper => {
                if rng.gen_bool(0.5) {
                    closure_measure(rng, n)?
                } else {
                    let alpha = if kind == MeasureKind::WeaklySub { rng.gen_range(0.3..1.2) } else { rng.gen_range(0.8..3.0) };
                    distorted_measure(rng, n, alpha)?
                }
            }
            MeasureKind::Mixed => unreachable!(),
        };
        let ok = match kind {
            MeasureKind::General => true,
            MeasureKind::Subadditive => is_subadditive(&m).holds,
            MeasureKind::Superadditive => is_superadditive(&m).holds,
            MeasureKind::WeaklySub => is_weakly_subadditive(&m, a).holds,
            MeasureKind::WeaklySuper => is_weakly_superadditive(&m, a).holds,
            MeasureKind::Mixed => unreachable!(),
        };
        if ok {
            return Ok(m);
        }
    }
    Err(Error::InvalidValue(format!("no {kind:?} measure found in {RESAMPLES} draws")))
}

/// Divides by `μ(X)` so that `μ(X) = 1`.
pub fn normalize(m: &DiscreteMeasure) -> DiscreteMeasure {
    let top = m.value(m.space().full()).to_f64();
    if top > 0.0 && top.is_finite() {
        m.map_values(|v| ExtReal::new(v.to_f64() / top))
    } else {
        m.clone()
    }
}

/// A nonempty random subset.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Subset {
    loop {
        let s = Subset::from_bits(rng.gen_range(1..(1u32 << n)));
        if !s.is_empty() {
            return s;
        }
    }
}

/// I.i.d. values in `[lo, hi]`, half the time snapped to a grid of eighths of
/// the range so that ties and exact zeros occur.
pub fn random_values<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let snap = rng.gen_bool(0.5);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let u = if snap { (u * 8.0).round() / 8.0 } else { u };
            lo + (hi - lo) * u
        })
        .collect()
}

pub fn random_function<R: Rng>(rng: &mut R, n: usize, hi: f64) -> Vec<ExtReal> {
    random_values(rng, n, 0.0, hi).into_iter().map(ExtReal::new).collect()
}

pub fn random_signed_function<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Vec<SignedExtReal> {
    random_values(rng, n, -scale, scale).into_iter().map(SignedExtReal::new).collect()
}

/// Shape families for random transforms `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HFamily {
    Nondecreasing,
    Nonincreasing,
    Quasiconvex,
    Quasiconcave,
    /// Arbitrary monotone pieces with jumps.
    Jumpy,
    Convex,
    /// Continuous concave and nonnegative on `[0, hi]`.
    Concave,
    /// Concave, differentiable inside the domain.
    SmoothConcave,
    /// Nondecreasing on the real line with `H(0) = 0`.
    SignedNondecreasing,
    /// Nonincreasing on `x ≤ 0`, nondecreasing on `x ≥ 0`, `H(0) = 0`.
    VShaped,
}

impl HFamily {
    pub const NONNEG: [HFamily; 8] = [
        HFamily::Nondecreasing,
        HFamily::Nonincreasing,
        HFamily::Quasiconvex,
        HFamily::Quasiconcave,
        HFamily::Jumpy,
        HFamily::Convex,
        HFamily::Concave,
        HFamily::SmoothConcave,
    ];
}

/// Options for [`random_h`].
#[derive(Clone, Copy, Debug)]
pub struct HShape {
    pub family: HFamily,
    /// Right end of the region the function values of `f` occupy.
    pub hi: f64,
    /// Allow jumps and isolated point values.
    pub jumps: bool,
    /// Keep the values of `H` on `[0, hi]` inside `[0, 1]`.
    pub unit: bool,
}

fn pick_breaks<R: Rng>(rng: &mut R, lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..k).map(|_| lo + (hi - lo) * ((rng.gen::<f64>() * 16.0).round() / 16.0)).collect();
    xs.retain(|&x| x > lo && x < hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// One piece from `(lo, v0)` to `(hi, v1)`; `hi` finite and `lo ≥ 0` for
/// the power shape.
fn piece<R: Rng>(rng: &mut R, lo: f64, hi: f64, v0: f64, v1: f64) -> Segment {
    if v0 == v1 {
        return Segment::new(lo, hi, Expr::Const(v0), Mono::Const);
    }
    let mono = if v1 > v0 { Mono::Inc } else { Mono::Dec };
    if lo >= 0.0 && rng.gen_bool(0.4) {
        let alpha = *[0.5, 2.0].choose(rng).expect("nonempty");
        let c = (v1 - v0) / (hi.powf(alpha) - lo.powf(alpha));
        let d = v0 - c * lo.powf(alpha);
        Segment::new(lo, hi, Expr::Power { c, alpha, d, s: 1.0 }, mono)
    } else {
        let b = (v1 - v0) / (hi - lo);
        Segment::new(lo, hi, Expr::Affine { a: v0 - b * lo, b }, mono)
    }
}

/// A monotone run of pieces over `breaks`, starting at `v`. `up` selects
/// the direction; values stay within `[floor, ceil]`.
#[allow(clippy::too_many_arguments)]
fn run<R: Rng>(
    rng: &mut R,
    segs: &mut Vec<Segment>,
    breaks: &[f64],
    mut v: f64,
    up: bool,
    jumps: bool,
    floor: f64,
    ceil: f64,
) -> f64 {
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let room = if up { ceil - v } else { v - floor };
        let step = room * rng.gen_range(0.0..0.6);
        let end = if rng.gen_bool(0.15) { v } else if up { v + step } else { v - step };
        segs.push(piece(rng, lo, hi, v, end));
        v = end;
        if jumps && rng.gen_bool(0.35) {
            let room = if up { ceil - v } else { v - floor };
            let jump = room * rng.gen_range(0.0..0.5);
            let next = if up { v + jump } else { v - jump };
            if rng.gen_bool(0.4) {
                let mid = v + (next - v) * rng.gen::<f64>();
                segs.push(Segment::point(hi, mid));
            }
            v = next;
        }
    }
    v
}

/// A random transform of the given family, nonnegative on its domain.
pub fn random_h<R: Rng>(rng: &mut R, shape: HShape) -> Result<PiecewiseMap> {
    let hi = shape.hi.max(1e-3);
    let ceil = if shape.unit { 1.0 } else { 2.0 * hi.max(1.0) };
    let k = rng.gen_range(1..=3);
    let mut segs = Vec::new();
    let jumps = shape.jumps;
    let start = |rng: &mut R, lo: f64, hi: f64| lo + (hi - lo) * ((rng.gen::<f64>() * 8.0).round() / 8.0);
    match shape.family {
        HFamily::Nondecreasing | HFamily::Nonincreasing => {
            let up = shape.family == HFamily::Nondecreasing;
            let mut xs = vec![0.0];
            xs.extend(pick_breaks(rng, 0.0, hi, k));
            xs.push(hi);
            let v0 = if up { start(rng, 0.0, ceil * 0.3) } else { start(rng, ceil * 0.5, ceil) };
            let end = run(rng, &mut segs, &xs, v0, up, jumps, 0.0, ceil);
            tail(rng, &mut segs, hi, end, up && !shape.unit);
        }
        HFamily::Quasiconvex | HFamily::Quasiconcave => {
            let convex = shape.family == HFamily::Quasiconvex;
            let pivot = hi * ((rng.gen::<f64>() * 8.0).round() / 8.0);
            let mut left = vec![0.0];
            left.extend(pick_breaks(rng, 0.0, pivot, k));
            left.push(pivot);
            let mut right = vec![pivot];
            right.extend(pick_breaks(rng, pivot, hi, k));
            right.push(hi);
            let v0 = if convex { start(rng, ceil * 0.4, ceil) } else { start(rng, 0.0, ceil * 0.4) };
            let mut v = if pivot > 0.0 { run(rng, &mut segs, &left, v0, !convex, jumps, 0.0, ceil) } else { v0 };
            // the extremum must be attained at the pivot, so no point value there
            if segs.last().is_some_and(|s: &Segment| s.is_point()) {
                segs.pop();
            }
            if jumps && pivot > 0.0 && rng.gen_bool(0.3) {
                v = if convex { v * rng.gen::<f64>() } else { v + (ceil - v) * rng.gen::<f64>() };
            }
            let end = if pivot < hi { run(rng, &mut segs, &right, v, convex, jumps, 0.0, ceil) } else { v };
            tail(rng, &mut segs, hi, end, convex && !shape.unit);
        }
        HFamily::Jumpy => {
            let mut xs = vec![0.0];
            xs.extend(pick_breaks(rng, 0.0, hi, k + 2));
            xs.push(hi);
            let mut v = start(rng, 0.0, ceil);
            for w in xs.windows(2) {
                let up = rng.gen_bool(0.5);
                v = run(rng, &mut segs, w, v, up, true, 0.0, ceil);
                if rng.gen_bool(0.5) {
                    v = start(rng, 0.0, ceil);
                }
            }
            tail(rng, &mut segs, hi, v, false);
        }
        HFamily::Convex => {
            // a nonnegative parabola or a piecewise-linear function with increasing slopes
            if rng.gen_bool(0.5) {
                let vertex = hi * rng.gen::<f64>();
                let floor = if shape.unit { 0.2 * rng.gen::<f64>() } else { rng.gen::<f64>() };
                let c2 = if shape.unit { (1.0 - floor) / hi.max(1.0).powi(2) * rng.gen::<f64>() } else { rng.gen_range(0.1..1.5) };
                return PiecewiseMap::quadratic_on(floor + c2 * vertex * vertex, -2.0 * c2 * vertex, c2, 0.0, f64::INFINITY, Domain::Nonneg);
            }
            let mut xs = vec![0.0];
            xs.extend(pick_breaks(rng, 0.0, hi, k));
            xs.push(f64::INFINITY);
            let mut slopes: Vec<f64> = (0..xs.len() - 1).map(|_| rng.gen_range(-1.0..1.5)).collect();
            slopes.sort_by(f64::total_cmp);
            if let Some(last) = slopes.last_mut() {
                *last = last.max(0.0);
            }
            let mut v = 0.0;
            let mut values = vec![v];
            for (w, s) in xs.windows(2).zip(&slopes) {
                if w[1].is_finite() {
                    v += s * (w[1] - w[0]);
                    values.push(v);
                }
            }
            let shift = MARGIN - values.iter().cloned().fold(f64::INFINITY, f64::min) + rng.gen::<f64>();
            for (j, (w, s)) in xs.windows(2).zip(&slopes).enumerate() {
                let v0 = values[j] + shift;
                segs.push(Segment::new(w[0], w[1], Expr::Affine { a: v0 - s * w[0], b: *s }, mono(*s)));
            }
        }
        HFamily::Concave => {
            if rng.gen_bool(0.3) {
                let c = rng.gen_range(0.2..2.0);
                let alpha = rng.gen_range(0.2..1.0);
                return PiecewiseMap::power(c, alpha);
            }
            let mut xs = vec![0.0];
            xs.extend(pick_breaks(rng, 0.0, hi, k));
            xs.push(hi);
            let mut slopes: Vec<f64> = (0..xs.len() - 1).map(|_| rng.gen_range(-1.0..2.0)).collect();
            slopes.sort_by(|a, b| b.total_cmp(a));
            let mut v = rng.gen::<f64>();
            let mut values = vec![v];
            for (w, s) in xs.windows(2).zip(&slopes) {
                v += s * (w[1] - w[0]);
                values.push(v);
            }
            let low = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let shift = (MARGIN - low).max(0.0);
            for (j, (w, s)) in xs.windows(2).zip(&slopes).enumerate() {
                let v0 = values[j] + shift;
                segs.push(Segment::new(w[0], w[1], Expr::Affine { a: v0 - s * w[0], b: *s }, mono(*s)));
            }
        }
        HFamily::SmoothConcave => {
            let c = rng.gen_range(0.2..2.0);
            let alpha = rng.gen_range(0.2..1.0);
            let d = rng.gen::<f64>();
            let b = rng.gen_range(-0.3..0.5);
            if rng.gen_bool(0.5) && b >= 0.0 {
                segs.push(Segment::new(0.0, f64::INFINITY, Expr::Power { c, alpha, d, s: 1.0 }, Mono::Inc));
            } else {
                // d + b·x − c2·x² on [0, hi], kept nonnegative
                let c2 = rng.gen_range(0.0..0.5) / hi.max(1.0);
                let low = d.min(d + b * hi - c2 * hi * hi);
                let d = d + (MARGIN - low).max(0.0);
                return PiecewiseMap::quadratic_on(d, b, -c2, 0.0, hi, Domain::Nonneg);
            }
        }
        HFamily::SignedNondecreasing => {
            let mut pos = Vec::new();
            let mut xs = vec![0.0];
            xs.extend(pick_breaks(rng, 0.0, hi, k));
            xs.push(hi);
            let first = if jumps && rng.gen_bool(0.2) { start(rng, 0.0, 0.5) } else { 0.0 };
            let end = run(rng, &mut pos, &xs, first, true, jumps, 0.0, ceil);
            tail(rng, &mut pos, hi, end, true);
            if first > 0.0 {
                pos[0].lo_closed = false;
                pos.insert(0, Segment::point(0.0, 0.0));
            }
            let mut neg_side = Vec::new();
            let end = run(rng, &mut neg_side, &xs, 0.0, true, jumps, 0.0, ceil);
            tail(rng, &mut neg_side, hi, end, true);
            // x ↦ −G(−x) for x ≤ 0 from a nondecreasing G ≥ 0 with G(0) = 0
            let g = PiecewiseMap::new(neg_side, Domain::Nonneg)?;
            let mirrored = g.reflect()?.negate()?;
            let mut all: Vec<Segment> = mirrored.segments().iter().copied().filter(|s| s.lo < 0.0).collect();
            for s in all.iter_mut() {
                if s.hi == 0.0 {
                    s.hi_closed = false;
                }
            }
            all.extend(pos);
            return PiecewiseMap::new(all, Domain::Real);
        }
        HFamily::VShaped => {
            let right = random_h(rng, HShape { family: HFamily::Nondecreasing, ..shape })?;
            let left = random_h(rng, HShape { family: HFamily::Nondecreasing, ..shape })?;
            let zero_at_origin = |m: &PiecewiseMap| -> Result<Vec<Segment>> {
                let v0 = m.eval(0.0)?;
                let shifted = PiecewiseMap::new(
                    m.segments().iter().map(|s| Segment { expr: shift_expr(s.expr, -v0), ..*s }).collect(),
                    Domain::Nonneg,
                )?;
                Ok(shifted.segments().to_vec())
            };
            let right = zero_at_origin(&right)?;
            let left = PiecewiseMap::new(zero_at_origin(&left)?, Domain::Nonneg)?.reflect()?;
            let mut all: Vec<Segment> = left.segments().iter().copied().filter(|s| s.lo < 0.0).collect();
            for s in all.iter_mut() {
                if s.hi == 0.0 {
                    s.hi_closed = false;
                }
            }
            all.extend(right);
            return PiecewiseMap::new(all, Domain::Real);
        }
    }
    PiecewiseMap::new(segs, Domain::Nonneg)
}

fn mono(slope: f64) -> Mono {
    if slope > 0.0 {
        Mono::Inc
    } else if slope < 0.0 {
        Mono::Dec
    } else {
        Mono::Const
    }
}

fn shift_expr(e: Expr, k: f64) -> Expr {
    match e {
        Expr::Affine { a, b } => Expr::Affine { a: a + k, b },
        Expr::Power { c, alpha, d, s } => Expr::Power { c, alpha, d: d + k, s },
        Expr::Quad { c0, c1, c2 } => Expr::Quad { c0: c0 + k, c1, c2 },
        Expr::Const(v) => Expr::Const(v + k),
    }
}

/// Extends past `hi` either by a constant or by an increasing piece.
fn tail<R: Rng>(rng: &mut R, segs: &mut Vec<Segment>, hi: f64, v: f64, growing: bool) {
    if growing && rng.gen_bool(0.5) {
        let b = rng.gen_range(0.0..1.0);
        segs.push(Segment::new(hi, f64::INFINITY, Expr::Affine { a: v - b * hi, b }, mono(b)));
    } else {
        segs.push(Segment::new(hi, f64::INFINITY, Expr::Const(v), Mono::Const));
    }
}
