//! Piecewise-monotone transforms `H`.
//!
//! Every segment carries a closed-form expression that is continuous on the
//! segment's closure and monotone there. One-sided limits, interval extrema
//! and level-set preimages then reduce to endpoint evaluation and closed-form
//! inversion. Declared monotonicity is checked on 256 samples per segment,
//! which can falsify a declaration but not prove it.

use serde::{Deserialize, Serialize};

use crate::extreal::{ExtReal, SignedExtReal};
use crate::interval_set::IntervalSet;
use crate::{Error, Result};

const SAMPLES_PER_SEGMENT: usize = 256;
const SUPPORT_GRID: usize = 1000;

fn close(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

fn le_tol(a: f64, b: f64) -> bool {
    a <= b || close(a, b)
}

/// A closed-form elementary function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expr {
    /// `a + b·x`
    Affine { a: f64, b: f64 },
    /// `d + c·(s·x)^α` with `s = ±1` and `α > 0`; integer `α` allows `s·x < 0`.
    Power { c: f64, alpha: f64, d: f64, s: f64 },
    /// `c0 + c1·x + c2·x²`
    Quad { c0: f64, c1: f64, c2: f64 },
    Const(f64),
}

fn is_integer(alpha: f64) -> bool {
    alpha.fract() == 0.0 && alpha.abs() < 1e9
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return self.limit(x > 0.0);
        }
        match *self {
            Expr::Affine { a, b } => a + b * x,
            Expr::Power { c, alpha, d, s } => {
                let base = s * x;
                let pow = if base >= 0.0 {
                    base.powf(alpha)
                } else if is_integer(alpha) {
                    base.powi(alpha as i32)
                } else {
                    f64::NAN
                };
                if c == 0.0 {
                    d
                } else {
                    d + c * pow
                }
            }
            Expr::Quad { c0, c1, c2 } => c0 + x * (c1 + c2 * x),
            Expr::Const(k) => k,
        }
    }

    /// Limit as `x → +∞` (`up`) or `x → −∞`.
    pub fn limit(&self, up: bool) -> f64 {
        let sgn = if up { 1.0 } else { -1.0 };
        let inf_times = |k: f64, fallback: f64| {
            if k > 0.0 {
                f64::INFINITY
            } else if k < 0.0 {
                f64::NEG_INFINITY
            } else {
                fallback
            }
        };
        match *self {
            Expr::Affine { a, b } => inf_times(b * sgn, a),
            Expr::Power { c, alpha, d, s } => {
                let base_sign = s * sgn;
                let pow_sign = if base_sign > 0.0 || (is_integer(alpha) && (alpha as i64) % 2 == 0) {
                    1.0
                } else if is_integer(alpha) {
                    -1.0
                } else {
                    return f64::NAN;
                };
                inf_times(c * pow_sign, d)
            }
            Expr::Quad { c0, c1, c2 } => {
                if c2 != 0.0 {
                    inf_times(c2, c0)
                } else {
                    inf_times(c1 * sgn, c0)
                }
            }
            Expr::Const(k) => k,
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match *self {
            Expr::Affine { b, .. } => b,
            Expr::Power { c, alpha, s, .. } => {
                if c == 0.0 {
                    return 0.0;
                }
                let base = s * x;
                let pow = if base >= 0.0 { base.powf(alpha - 1.0) } else { base.powi(alpha as i32 - 1) };
                c * alpha * s * pow
            }
            Expr::Quad { c1, c2, .. } => c1 + 2.0 * c2 * x,
            Expr::Const(_) => 0.0,
        }
    }

    /// Whether the second derivative has the sign of a concave (or convex)
    /// function on `(lo, hi)`.
    fn curvature_ok(&self, lo: f64, hi: f64, concave: bool) -> bool {
        let sign_ok = |second: f64| if concave { second <= 0.0 } else { second >= 0.0 };
        match *self {
            Expr::Affine { .. } | Expr::Const(_) => true,
            Expr::Quad { c2, .. } => sign_ok(c2),
            Expr::Power { c, alpha, s, .. } => {
                let k = c * alpha * (alpha - 1.0);
                // (s·x)^(α−2) is positive where s·x > 0 and has sign (−1)^α where s·x < 0
                let touches_pos = s * lo > 0.0 || s * hi > 0.0;
                let touches_neg = s * lo < 0.0 || s * hi < 0.0;
                let neg_sign = if (alpha as i64) % 2 == 0 { 1.0 } else { -1.0 };
                (!touches_pos || sign_ok(k)) && (!touches_neg || sign_ok(k * neg_sign))
            }
        }
    }

    fn negate(self) -> Expr {
        match self {
            Expr::Affine { a, b } => Expr::Affine { a: -a, b: -b },
            Expr::Power { c, alpha, d, s } => Expr::Power { c: -c, alpha, d: -d, s },
            Expr::Quad { c0, c1, c2 } => Expr::Quad { c0: -c0, c1: -c1, c2: -c2 },
            Expr::Const(k) => Expr::Const(-k),
        }
    }

    /// `x ↦ self(−x)`
    fn reflect(self) -> Expr {
        match self {
            Expr::Affine { a, b } => Expr::Affine { a, b: -b },
            Expr::Power { c, alpha, d, s } => Expr::Power { c, alpha, d, s: -s },
            Expr::Quad { c0, c1, c2 } => Expr::Quad { c0, c1: -c1, c2 },
            Expr::Const(k) => Expr::Const(k),
        }
    }

    /// Some `x` in `[lo, hi]` with `self(x) = y`, for a monotone piece whose
    /// endpoint values bracket `y`.
    fn solve(&self, y: f64, lo: f64, hi: f64, increasing: bool) -> f64 {
        let inside = |x: f64| x.is_finite() && x >= lo && x <= hi;
        let closed = match *self {
            Expr::Affine { a, b } if b != 0.0 => Some((y - a) / b),
            Expr::Power { c, alpha, d, s } if c != 0.0 => {
                let r = (y - d) / c;
                let base = if r >= 0.0 {
                    Some(r.powf(1.0 / alpha))
                } else if is_integer(alpha) && (alpha as i64) % 2 != 0 {
                    Some(-(-r).powf(1.0 / alpha))
                } else {
                    None
                };
                base.map(|b| {
                    let x = s * b;
                    // even powers have a mirror root
                    if !inside(x) && is_integer(alpha) && (alpha as i64) % 2 == 0 {
                        -x
                    } else {
                        x
                    }
                })
            }
            Expr::Quad { c0, c1, c2 } if c2 != 0.0 => {
                let disc = c1 * c1 - 4.0 * c2 * (c0 - y);
                if disc < 0.0 {
                    None
                } else {
                    let sq = disc.sqrt();
                    let r1 = (-c1 + sq) / (2.0 * c2);
                    let r2 = (-c1 - sq) / (2.0 * c2);
                    Some(if inside(r1) { r1 } else { r2 })
                }
            }
            Expr::Quad { c0, c1, .. } if c1 != 0.0 => Some((y - c0) / c1),
            _ => None,
        };
        match closed {
            Some(x) if inside(x) => x,
            _ => self.bisect(y, lo, hi, increasing),
        }
    }

    fn bisect(&self, y: f64, lo: f64, hi: f64, increasing: bool) -> f64 {
        let (mut a, mut b) = (lo, hi);
        if b.is_infinite() {
            b = a.max(0.0) + 1.0;
            let mut k = 0;
            while (self.eval(b) < y) == increasing && k < 2000 {
                b = a.max(0.0) + 2.0 * (b - a.max(0.0)) + 1.0;
                k += 1;
            }
        }
        if a.is_infinite() {
            a = b.min(0.0) - 1.0;
            let mut k = 0;
            while (self.eval(a) < y) != increasing && k < 2000 {
                a = b.min(0.0) - 2.0 * (b.min(0.0) - a) - 1.0;
                k += 1;
            }
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if (self.eval(m) < y) == increasing {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mono {
    Inc,
    Dec,
    Const,
}

/// One piece of a [`PiecewiseMap`]: `expr` on the interval from `lo` to `hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub expr: Expr,
    pub mono: Mono,
}

impl Segment {
    /// The half-open piece `[lo, hi)`, or the point `[lo, lo]` when `lo == hi`.
    pub fn new(lo: f64, hi: f64, expr: Expr, mono: Mono) -> Self {
        Segment { lo, hi, lo_closed: true, hi_closed: lo == hi, expr, mono }
    }

    pub fn point(x: f64, value: f64) -> Self {
        Segment::new(x, x, Expr::Const(value), Mono::Const)
    }

    pub fn closed(mut self, lo_closed: bool, hi_closed: bool) -> Self {
        self.lo_closed = lo_closed;
        self.hi_closed = hi_closed;
        self
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Value at `x`, or the limit from inside when `x` is an open or infinite end.
    pub fn value_at(&self, x: f64) -> f64 {
        self.expr.eval(x)
    }

    fn contains(&self, x: f64) -> bool {
        (x > self.lo || (x == self.lo && self.lo_closed)) && (x < self.hi || (x == self.hi && self.hi_closed))
    }

    /// Extreme values over the closure, as `(inf, sup)`.
    fn range(&self) -> (f64, f64) {
        let a = self.value_at(self.lo);
        let b = self.value_at(self.hi);
        (a.min(b), a.max(b))
    }

    /// Intersection with `[lo, hi]` carrying closure flags; `None` when empty.
    fn clip(&self, lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Option<(f64, f64)> {
        let (a, ac) = if lo > self.lo {
            (lo, lo_closed)
        } else if lo < self.lo {
            (self.lo, self.lo_closed)
        } else {
            (lo, lo_closed && self.lo_closed)
        };
        let (b, bc) = if hi < self.hi {
            (hi, hi_closed)
        } else if hi > self.hi {
            (self.hi, self.hi_closed)
        } else {
            (hi, hi_closed && self.hi_closed)
        };
        if a < b || (a == b && ac && bc && a.is_finite()) {
            Some((a, b))
        } else {
            None
        }
    }

    fn samples(&self) -> Vec<f64> {
        if self.is_point() {
            return vec![self.lo];
        }
        let n = SAMPLES_PER_SEGMENT;
        let mut xs: Vec<f64> = (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                match (self.lo.is_finite(), self.hi.is_finite()) {
                    (true, true) => self.lo + s * (self.hi - self.lo),
                    (true, false) => self.lo + s / (1.0 - s * 0.999) * self.lo.abs().max(1.0) * 4.0,
                    (false, true) => self.hi - s / (1.0 - s * 0.999) * self.hi.abs().max(1.0) * 4.0,
                    (false, false) => (s - 0.5) * 1e3,
                }
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Starts at 0; `H(0_-) = H(0^-) = 0` by convention.
    Nonneg,
    Real,
}

/// The four one-sided limits of `H` at a point.
///
/// `lower_left = H(p_-)`, `lower_right = H(p_+)`, `upper_left = H(p^-)`,
/// `upper_right = H(p^+)`. With no points on one side the limits follow
/// `inf ∅ = ∞` and `sup ∅ = 0` (or `−∞` on a real domain); on a nonnegative
/// domain the left limits at 0 are 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OneSidedLimits {
    pub lower_left: f64,
    pub lower_right: f64,
    pub upper_left: f64,
    pub upper_right: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extrema {
    pub inf: f64,
    pub sup: f64,
}

/// `H(p) + m(y − p) ≥ H(y)` on the checked range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupportLine {
    pub p: f64,
    pub slope: f64,
    pub value: f64,
}

impl SupportLine {
    pub fn at(&self, y: f64) -> f64 {
        self.value + self.slope * (y - self.p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMap {
    segments: Vec<Segment>,
    domain: Domain,
}

impl PiecewiseMap {
    /// Validates the partition and the declared monotonicity.
    ///
    /// Neighbours of a point segment are opened at that point, and a finite
    /// right end of the domain is closed.
    pub fn new(mut segments: Vec<Segment>, domain: Domain) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidTransform("no segments".into()));
        }
        for i in 0..segments.len() {
            if segments[i].is_point() {
                if i > 0 {
                    segments[i - 1].hi_closed = false;
                }
                if i + 1 < segments.len() {
                    segments[i + 1].lo_closed = false;
                }
            }
        }
        let last = segments.len() - 1;
        if segments[last].hi.is_finite() {
            segments[last].hi_closed = true;
        }
        segments[0].lo_closed = segments[0].lo.is_finite();
        if domain == Domain::Nonneg && segments[0].lo != 0.0 {
            return Err(Error::InvalidTransform("a nonnegative domain must start at 0".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            if s.lo.is_nan() || s.hi.is_nan() || s.lo > s.hi || s.lo == f64::INFINITY || s.hi == f64::NEG_INFINITY {
                return Err(Error::InvalidTransform(format!("segment {i} has bounds [{}, {}]", s.lo, s.hi)));
            }
            if s.is_point() && !(s.lo_closed && s.hi_closed) {
                return Err(Error::InvalidTransform(format!("point segment {i} must be closed")));
            }
            if let Expr::Power { alpha, s: sgn, .. } = s.expr {
                if !(alpha > 0.0 && alpha.is_finite()) || (sgn != 1.0 && sgn != -1.0) {
                    return Err(Error::InvalidTransform(format!("segment {i}: power needs α > 0 and s = ±1")));
                }
            }
            if i > 0 {
                let p = &segments[i - 1];
                if p.hi != s.lo {
                    return Err(Error::InvalidTransform(format!("gap or overlap between segments {} and {i}", i - 1)));
                }
                if p.hi_closed == s.lo_closed {
                    return Err(Error::InvalidTransform(format!(
                        "segments {} and {i} must share {} exactly once",
                        i - 1,
                        s.lo
                    )));
                }
            }
            check_segment(i, s)?;
        }
        Ok(PiecewiseMap { segments, domain })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn lo(&self) -> f64 {
        self.segments[0].lo
    }

    pub fn hi(&self) -> f64 {
        self.segments[self.segments.len() - 1].hi
    }

    /// Segment boundaries, without the domain ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().skip(1).map(|s| s.lo).collect();
        out.dedup();
        out
    }

    fn owner(&self, x: f64) -> Option<&Segment> {
        self.segments.iter().find(|s| s.contains(x))
    }

    pub fn in_domain(&self, x: f64) -> bool {
        if x == f64::INFINITY {
            return self.hi() == f64::INFINITY;
        }
        if x == f64::NEG_INFINITY {
            return self.lo() == f64::NEG_INFINITY;
        }
        self.owner(x).is_some()
    }

    /// `H(x)`; at an infinite end, the tail limit.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain("NaN".into()));
        }
        if x == f64::INFINITY && self.hi() == f64::INFINITY {
            return Ok(self.segments.last().unwrap().expr.limit(true));
        }
        if x == f64::NEG_INFINITY && self.lo() == f64::NEG_INFINITY {
            return Ok(self.segments[0].expr.limit(false));
        }
        self.owner(x)
            .map(|s| s.value_at(x))
            .ok_or_else(|| Error::Domain(format!("{x} (transform domain [{}, {}])", self.lo(), self.hi())))
    }

    /// `H(y)` for a nonnegative argument; the value must be nonnegative too.
    pub fn h_eval(&self, y: ExtReal) -> Result<ExtReal> {
        let v = self.eval(y.to_f64())?;
        ExtReal::try_new(v).ok_or_else(|| Error::Domain(format!("H({y}) = {v} is negative")))
    }

    pub fn eval_signed(&self, y: SignedExtReal) -> Result<SignedExtReal> {
        let v = self.eval(y.to_f64())?;
        SignedExtReal::try_new(v).ok_or_else(|| Error::Domain(format!("H({y}) is NaN")))
    }

    pub fn one_sided_limits(&self, p: f64) -> OneSidedLimits {
        let empty_sup = if self.domain == Domain::Nonneg { 0.0 } else { f64::NEG_INFINITY };
        let left = if self.domain == Domain::Nonneg && p <= 0.0 {
            Some(0.0)
        } else {
            self.segments.iter().find(|s| s.lo < p && p <= s.hi && !s.is_point()).map(|s| s.value_at(p))
        };
        let right = self.segments.iter().find(|s| s.lo <= p && p < s.hi && !s.is_point()).map(|s| s.value_at(p));
        OneSidedLimits {
            lower_left: left.unwrap_or(f64::INFINITY),
            upper_left: left.unwrap_or(empty_sup),
            lower_right: right.unwrap_or(f64::INFINITY),
            upper_right: right.unwrap_or(empty_sup),
        }
    }

    /// Exact infimum and supremum over the interval from `lo` to `hi`
    /// intersected with the domain.
    pub fn interval_extrema(&self, lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Extrema> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Domain(format!("interval [{lo}, {hi}]")));
        }
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        let mut hit = false;
        for s in &self.segments {
            if let Some((a, b)) = s.clip(lo, lo_closed, hi, hi_closed) {
                hit = true;
                let (va, vb) = (s.value_at(a), s.value_at(b));
                inf = inf.min(va).min(vb);
                sup = sup.max(va).max(vb);
            }
        }
        if !hit {
            return Err(Error::Domain(format!("[{lo}, {hi}] misses the transform domain [{}, {}]", self.lo(), self.hi())));
        }
        Ok(Extrema { inf, sup })
    }

    pub fn closed_extrema(&self, lo: f64, hi: f64) -> Result<Extrema> {
        self.interval_extrema(lo, hi, true, true)
    }

    /// `inf H` and `sup H` over the whole domain.
    pub fn global_extrema(&self) -> Extrema {
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        for s in &self.segments {
            let (a, b) = s.range();
            inf = inf.min(a);
            sup = sup.max(b);
        }
        Extrema { inf, sup }
    }

    fn monotone_on(&self, lo: f64, hi: f64, increasing: bool) -> bool {
        let ok = |a: f64, b: f64| if increasing { le_tol(a, b) } else { le_tol(b, a) };
        let mut prev: Option<f64> = None;
        for s in &self.segments {
            let Some((a, b)) = s.clip(lo, true, hi, true) else { continue };
            let wrong = if increasing { Mono::Dec } else { Mono::Inc };
            if s.mono == wrong && a < b {
                return false;
            }
            let (va, vb) = (s.value_at(a), s.value_at(b));
            if let Some(pv) = prev {
                if !ok(pv, va) {
                    return false;
                }
            }
            prev = Some(vb);
        }
        true
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.monotone_on(self.lo(), self.hi(), true)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.monotone_on(self.lo(), self.hi(), false)
    }

    pub fn is_nondecreasing_on(&self, lo: f64, hi: f64) -> bool {
        self.monotone_on(lo, hi, true)
    }

    /// A point `a` with `H` nonincreasing up to `a` and nondecreasing after it.
    /// Candidates are segment boundaries and domain ends; the smallest wins.
    pub fn quasiconvex_pivot(&self) -> Option<f64> {
        self.pivot(false)
    }

    /// A point `c` with `H` nondecreasing up to `c` and nonincreasing after it.
    pub fn quasiconcave_pivot(&self) -> Option<f64> {
        self.pivot(true)
    }

    fn pivot(&self, concave: bool) -> Option<f64> {
        let mut candidates = vec![self.lo()];
        candidates.extend(self.breakpoints());
        candidates.push(self.hi());
        candidates.into_iter().find(|&a| {
            if a.is_infinite() && a < 0.0 {
                return false;
            }
            self.monotone_on(self.lo(), a, concave) && self.monotone_on(a, self.hi(), !concave)
        })
    }

    pub fn is_left_continuous_at(&self, p: f64) -> bool {
        let lim = self.one_sided_limits(p);
        let v = match self.eval(p) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if self.domain == Domain::Nonneg && p <= 0.0 || p <= self.lo() {
            return true;
        }
        close(lim.lower_left, v)
    }

    pub fn is_right_continuous_at(&self, p: f64) -> bool {
        let lim = self.one_sided_limits(p);
        let v = match self.eval(p) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if p >= self.hi() {
            return true;
        }
        close(lim.lower_right, v)
    }

    pub fn is_continuous_at(&self, p: f64) -> bool {
        self.is_left_continuous_at(p) && self.is_right_continuous_at(p)
    }

    /// Continuity on the whole domain (checked at segment boundaries).
    pub fn is_continuous(&self) -> bool {
        self.breakpoints().into_iter().all(|x| self.is_continuous_at(x))
    }

    /// Left-continuity everywhere.
    pub fn is_left_continuous(&self) -> bool {
        self.breakpoints().into_iter().all(|x| self.is_left_continuous_at(x))
    }

    pub fn is_right_continuous(&self) -> bool {
        self.breakpoints().into_iter().all(|x| self.is_right_continuous_at(x))
    }

    /// Continuity, the sign of each piece's second derivative, and
    /// nonincreasing slopes across breakpoints.
    pub fn is_concave(&self) -> bool {
        self.curvature_test(true)
    }

    pub fn is_convex(&self) -> bool {
        self.curvature_test(false)
    }

    fn curvature_test(&self, concave: bool) -> bool {
        if !self.breakpoints().into_iter().all(|x| self.is_continuous_at(x)) {
            return false;
        }
        let pieces: Vec<&Segment> = self.segments.iter().filter(|s| !s.is_point()).collect();
        if !pieces.iter().all(|s| s.expr.curvature_ok(s.lo, s.hi, concave)) {
            return false;
        }
        pieces.windows(2).all(|w| {
            let b = w[0].hi;
            let (left, right) = (w[0].expr.deriv(b), w[1].expr.deriv(b));
            if concave {
                left >= right || close(left, right)
            } else {
                left <= right || close(left, right)
            }
        })
    }

    /// Left and right derivatives at `p`, where they exist.
    pub fn one_sided_derivatives(&self, p: f64) -> (Option<f64>, Option<f64>) {
        let left = self.segments.iter().find(|s| s.lo < p && p <= s.hi && !s.is_point()).map(|s| s.expr.deriv(p));
        let right = self.segments.iter().find(|s| s.lo <= p && p < s.hi && !s.is_point()).map(|s| s.expr.deriv(p));
        (left.filter(|d| d.is_finite()), right.filter(|d| d.is_finite()))
    }

    /// A support line at `p`: the midpoint of the one-sided derivatives unless
    /// `slope` overrides it, checked against `H` on 1000 points of `range`.
    pub fn support_slope(&self, p: f64, range: (f64, f64), slope: Option<f64>) -> Result<SupportLine> {
        let value = self.eval(p)?;
        let m = match slope {
            Some(m) => m,
            None => match self.one_sided_derivatives(p) {
                (Some(l), Some(r)) => 0.5 * (l + r),
                (Some(d), None) | (None, Some(d)) => d,
                (None, None) => return Err(Error::InvalidTransform(format!("no derivative at {p}"))),
            },
        };
        let line = SupportLine { p, slope: m, value };
        let (lo, hi) = (range.0.max(self.lo()), range.1.min(self.hi()));
        for k in 0..SUPPORT_GRID {
            let y = if hi > lo { lo + (hi - lo) * k as f64 / (SUPPORT_GRID - 1) as f64 } else { lo };
            let Ok(h) = self.eval(y) else { continue };
            let l = line.at(y);
            if h > l && !close(h, l) && h - l > 1e-9 * (1.0 + l.abs()) {
                return Err(Error::Hypothesis(format!("not concave at {p}: H({y}) = {h} exceeds the support line value {l}")));
            }
        }
        Ok(line)
    }

    /// The restriction to `[lo, hi]` (clipped to the domain), re-anchored as
    /// `domain`.
    pub fn restrict(&self, lo: f64, hi: f64, domain: Domain) -> Result<PiecewiseMap> {
        let mut out = Vec::new();
        for s in &self.segments {
            if let Some((a, b)) = s.clip(lo, true, hi, true) {
                let mut seg = *s;
                seg.lo = a;
                seg.hi = b;
                if a > s.lo {
                    seg.lo_closed = true;
                }
                if b < s.hi {
                    seg.hi_closed = true;
                }
                if a == b {
                    seg.mono = Mono::Const;
                    seg.expr = Expr::Const(s.value_at(a));
                    seg.lo_closed = true;
                    seg.hi_closed = true;
                }
                out.push(seg);
            }
        }
        // a clipped point piece next to a piece closed at the same point is redundant
        let mut cleaned: Vec<Segment> = Vec::with_capacity(out.len());
        for seg in out {
            if seg.is_point() {
                if let Some(prev) = cleaned.last() {
                    if prev.hi == seg.lo && prev.hi_closed {
                        continue;
                    }
                }
            }
            if let Some(prev) = cleaned.last_mut() {
                if prev.is_point() && prev.hi == seg.lo && seg.lo_closed && !seg.is_point() {
                    cleaned.pop();
                }
            }
            cleaned.push(seg);
        }
        PiecewiseMap::new(cleaned, domain)
    }

    /// `x ↦ H(−x)` on the mirrored domain (always a real domain).
    pub fn reflect(&self) -> Result<PiecewiseMap> {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                lo: -s.hi,
                hi: -s.lo,
                lo_closed: s.hi_closed,
                hi_closed: s.lo_closed,
                expr: s.expr.reflect(),
                mono: flip(s.mono),
            })
            .collect();
        PiecewiseMap::new(segments, Domain::Real)
    }

    /// `x ↦ −H(x)`.
    pub fn negate(&self) -> Result<PiecewiseMap> {
        let segments =
            self.segments.iter().map(|s| Segment { expr: s.expr.negate(), mono: flip(s.mono), ..*s }).collect();
        PiecewiseMap::new(segments, self.domain)
    }

    /// `{x : H(x) ∈ target}` within the domain.
    pub fn preimage(&self, target: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::new();
        for s in &self.segments {
            for &(u, v) in target.parts() {
                if let Some(piece) = segment_preimage(s, u, v) {
                    parts.push(piece);
                }
            }
        }
        IntervalSet::from_parts(parts)
    }

    /// `{x : H(x) ≥ t}`.
    pub fn superlevel(&self, t: f64) -> IntervalSet {
        self.preimage(&IntervalSet::interval(t, f64::INFINITY))
    }

    pub fn identity(domain: Domain) -> Self {
        let lo = if domain == Domain::Nonneg { 0.0 } else { f64::NEG_INFINITY };
        PiecewiseMap::affine_on(0.0, 1.0, lo, f64::INFINITY, domain).expect("identity is valid")
    }

    /// `a + b·x` on `[lo, hi]`.
    pub fn affine_on(a: f64, b: f64, lo: f64, hi: f64, domain: Domain) -> Result<Self> {
        let mono = mono_of(b);
        PiecewiseMap::new(vec![Segment::new(lo, hi, Expr::Affine { a, b }, mono)], domain)
    }

    /// `c·x^α` on `[0, ∞)`.
    pub fn power(c: f64, alpha: f64) -> Result<Self> {
        let mono = mono_of(c);
        PiecewiseMap::new(
            vec![Segment::new(0.0, f64::INFINITY, Expr::Power { c, alpha, d: 0.0, s: 1.0 }, mono)],
            Domain::Nonneg,
        )
    }

    /// `c·x^α` on all of ℝ for an odd integer `α`.
    pub fn odd_power(c: f64, alpha: u32) -> Result<Self> {
        if alpha.is_multiple_of(2) {
            return Err(Error::InvalidTransform("odd_power needs an odd exponent".into()));
        }
        PiecewiseMap::new(
            vec![Segment::new(
                f64::NEG_INFINITY,
                f64::INFINITY,
                Expr::Power { c, alpha: alpha as f64, d: 0.0, s: 1.0 },
                mono_of(c),
            )],
            Domain::Real,
        )
    }

    pub fn constant(k: f64, domain: Domain) -> Self {
        let lo = if domain == Domain::Nonneg { 0.0 } else { f64::NEG_INFINITY };
        PiecewiseMap::new(vec![Segment::new(lo, f64::INFINITY, Expr::Const(k), Mono::Const)], domain)
            .expect("constant is valid")
    }

    /// `c0 + c1·x + c2·x²` on `[lo, hi]`, split at the vertex when it is interior.
    pub fn quadratic_on(c0: f64, c1: f64, c2: f64, lo: f64, hi: f64, domain: Domain) -> Result<Self> {
        let expr = Expr::Quad { c0, c1, c2 };
        if c2 == 0.0 {
            return PiecewiseMap::new(vec![Segment::new(lo, hi, expr, mono_of(c1))], domain);
        }
        let v = -c1 / (2.0 * c2);
        let (first, second) = if c2 > 0.0 { (Mono::Dec, Mono::Inc) } else { (Mono::Inc, Mono::Dec) };
        if v <= lo {
            PiecewiseMap::new(vec![Segment::new(lo, hi, expr, second)], domain)
        } else if v >= hi {
            PiecewiseMap::new(vec![Segment::new(lo, hi, expr, first)], domain)
        } else {
            PiecewiseMap::new(vec![Segment::new(lo, v, expr, first), Segment::new(v, hi, expr, second)], domain)
        }
    }

    /// `x ∨ 0` on ℝ.
    pub fn positive_part() -> Self {
        PiecewiseMap::new(
            vec![
                Segment::new(f64::NEG_INFINITY, 0.0, Expr::Const(0.0), Mono::Const),
                Segment::new(0.0, f64::INFINITY, Expr::Affine { a: 0.0, b: 1.0 }, Mono::Inc),
            ],
            Domain::Real,
        )
        .expect("positive part is valid")
    }

    /// `(−x) ∨ 0` on ℝ.
    pub fn negative_part() -> Self {
        PiecewiseMap::new(
            vec![
                Segment::new(f64::NEG_INFINITY, 0.0, Expr::Affine { a: 0.0, b: -1.0 }, Mono::Dec),
                Segment::new(0.0, f64::INFINITY, Expr::Const(0.0), Mono::Const),
            ],
            Domain::Real,
        )
        .expect("negative part is valid")
    }

    pub fn to_spec(&self) -> HSpec {
        HSpec {
            segments: self
                .segments
                .iter()
                .map(|s| {
                    let (kind, params) = match s.expr {
                        Expr::Affine { a, b } => ("affine", vec![a, b]),
                        Expr::Power { c, alpha, d, s: sgn } => {
                            if sgn == 1.0 {
                                ("power", vec![c, alpha, d])
                            } else {
                                ("power", vec![c, alpha, d, sgn])
                            }
                        }
                        Expr::Quad { c0, c1, c2 } => ("quad", vec![c0, c1, c2]),
                        Expr::Const(k) => ("const", vec![k]),
                    };
                    SegmentSpec {
                        lo: Bound(s.lo),
                        hi: Bound(s.hi),
                        kind: kind.to_string(),
                        params,
                        mono: s.mono,
                        closed: Some(
                            match (s.lo_closed, s.hi_closed) {
                                (true, true) => "both",
                                (true, false) => "left",
                                (false, true) => "right",
                                (false, false) => "none",
                            }
                            .to_string(),
                        ),
                    }
                })
                .collect(),
            domain: self.domain,
        }
    }

    pub fn from_spec(spec: &HSpec) -> Result<Self> {
        let mut segments = Vec::with_capacity(spec.segments.len());
        for (i, s) in spec.segments.iter().enumerate() {
            let p = &s.params;
            let need = |n: usize| {
                if p.len() < n {
                    Err(Error::InvalidTransform(format!("segment {i}: {} needs {n} parameters", s.kind)))
                } else {
                    Ok(())
                }
            };
            let expr = match s.kind.as_str() {
                "affine" => {
                    need(2)?;
                    Expr::Affine { a: p[0], b: p[1] }
                }
                "power" => {
                    need(2)?;
                    Expr::Power {
                        c: p[0],
                        alpha: p[1],
                        d: p.get(2).copied().unwrap_or(0.0),
                        s: p.get(3).copied().unwrap_or(1.0),
                    }
                }
                "quad" => {
                    need(3)?;
                    Expr::Quad { c0: p[0], c1: p[1], c2: p[2] }
                }
                "const" => {
                    need(1)?;
                    Expr::Const(p[0])
                }
                other => return Err(Error::InvalidTransform(format!("segment {i}: unknown kind {other:?}"))),
            };
            let (lo, hi) = (s.lo.0, s.hi.0);
            let default = if lo == hi { "both" } else { "left" };
            let (lc, hc) = match s.closed.as_deref().unwrap_or(default) {
                "both" => (true, true),
                "left" => (true, false),
                "right" => (false, true),
                "none" => (false, false),
                other => return Err(Error::InvalidTransform(format!("segment {i}: closed = {other:?}"))),
            };
            segments.push(Segment { lo, hi, lo_closed: lc, hi_closed: hc, expr, mono: s.mono });
        }
        PiecewiseMap::new(segments, spec.domain)
    }
}

fn flip(m: Mono) -> Mono {
    match m {
        Mono::Inc => Mono::Dec,
        Mono::Dec => Mono::Inc,
        Mono::Const => Mono::Const,
    }
}

fn mono_of(slope: f64) -> Mono {
    if slope > 0.0 {
        Mono::Inc
    } else if slope < 0.0 {
        Mono::Dec
    } else {
        Mono::Const
    }
}

fn check_segment(i: usize, s: &Segment) -> Result<()> {
    let xs = s.samples();
    let vals: Vec<f64> = xs.iter().map(|&x| s.value_at(x)).collect();
    if vals.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidTransform(format!("segment {i} is undefined somewhere on [{}, {}]", s.lo, s.hi)));
    }
    for w in vals.windows(2) {
        let bad = match s.mono {
            Mono::Inc => !le_tol(w[0], w[1]),
            Mono::Dec => !le_tol(w[1], w[0]),
            Mono::Const => !close(w[0], w[1]),
        };
        if bad {
            return Err(Error::InvalidTransform(format!("segment {i} is not {:?} on [{}, {}]", s.mono, s.lo, s.hi)));
        }
    }
    Ok(())
}

/// `{x ∈ s : u ≤ expr(x) ≤ v}` as a closed interval.
fn segment_preimage(s: &Segment, u: f64, v: f64) -> Option<(f64, f64)> {
    let (lo, hi) = (s.lo, s.hi);
    let (flo, fhi) = (s.value_at(lo), s.value_at(hi));
    match s.mono {
        Mono::Const => (flo >= u && flo <= v).then_some((lo, hi)),
        Mono::Inc => {
            if fhi < u || flo > v {
                return None;
            }
            let a = if flo >= u { lo } else { s.expr.solve(u, lo, hi, true) };
            let b = if fhi <= v { hi } else { s.expr.solve(v, lo, hi, true) };
            (a <= b).then_some((a, b))
        }
        Mono::Dec => {
            if flo < u || fhi > v {
                return None;
            }
            let a = if flo <= v { lo } else { s.expr.solve(v, lo, hi, false) };
            let b = if fhi >= u { hi } else { s.expr.solve(u, lo, hi, false) };
            (a <= b).then_some((a, b))
        }
    }
}

/// A number or the string `"inf"` / `"-inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound(pub f64);

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Bound(x)),
            Raw::Str(s) => {
                let t = s.trim();
                let (neg, body) = match t.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, t.strip_prefix('+').unwrap_or(t)),
                };
                crate::extreal::parse_inf(body)
                    .map(|v| Bound(if neg { -v } else { v }))
                    .ok_or_else(|| serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}")))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub lo: Bound,
    pub hi: Bound,
    pub kind: String,
    pub params: Vec<f64>,
    pub mono: Mono,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<String>,
}

/// JSON form of a [`PiecewiseMap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSpec {
    pub segments: Vec<SegmentSpec>,
    #[serde(default = "default_domain")]
    pub domain: Domain,
}

fn default_domain() -> Domain {
    Domain::Nonneg
}

impl Serialize for PiecewiseMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = HSpec::deserialize(d)?;
        PiecewiseMap::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jump_map() -> PiecewiseMap {
        // 0.5 at 1, x² on (1, 2], 0 below 1
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
    fn evaluates_closed_forms() {
        let h = PiecewiseMap::power(1.0 / 3.0, 2.0).unwrap();
        assert!((h.eval(3.0).unwrap() - 3.0).abs() < 1e-15);
        let q = PiecewiseMap::quadratic_on(0.25, -1.0, 1.0, 0.0, f64::INFINITY, Domain::Nonneg).unwrap();
        assert_eq!(q.eval(0.5).unwrap(), 0.0);
        assert_eq!(q.segments().len(), 2);
        let id = PiecewiseMap::identity(Domain::Nonneg);
        assert_eq!(id.h_eval(ExtReal::INFINITY).unwrap(), ExtReal::INFINITY);
        assert!(id.eval(-1.0).is_err());
    }

    #[test]
    fn limits_at_a_jump() {
        let h = jump_map();
        let l = h.one_sided_limits(1.0);
        assert_eq!(l.lower_left, 0.0);
        assert_eq!(l.lower_right, 1.0);
        assert_eq!(h.eval(1.0).unwrap(), 0.5);
        assert_eq!(h.one_sided_limits(0.0).lower_left, 0.0);
        assert!(!h.is_left_continuous_at(1.0));
        assert!(!h.is_right_continuous_at(1.0));
        let e = h.closed_extrema(1.0, f64::INFINITY).unwrap();
        assert_eq!(e.inf, 0.5);
        assert_eq!(e.sup, 4.0);
    }

    #[test]
    fn continuous_limits_agree() {
        let h = PiecewiseMap::power(1.0, 0.5).unwrap();
        for p in [0.3, 1.0, 2.5] {
            let l = h.one_sided_limits(p);
            let v = h.eval(p).unwrap();
            for x in [l.lower_left, l.lower_right, l.upper_left, l.upper_right] {
                assert!(close(x, v));
            }
            let e = h.closed_extrema(p, p).unwrap();
            assert_eq!((e.inf, e.sup), (v, v));
        }
    }

    #[test]
    fn extrema_of_shifted_square() {
        let h = PiecewiseMap::quadratic_on(0.25, -1.0, 1.0, 0.0, f64::INFINITY, Domain::Nonneg).unwrap();
        let e = h.closed_extrema(2.5, f64::INFINITY).unwrap();
        assert_eq!(e.inf, 4.0);
        assert_eq!(e.sup, f64::INFINITY);
        assert_eq!(h.closed_extrema(0.0, 2.5).unwrap().inf, 0.0);
        assert_eq!(h.quasiconvex_pivot(), Some(0.5));
        assert!(h.is_convex());
        let cube = PiecewiseMap::power(1.0 / 3.0, 2.0).unwrap();
        assert!((cube.closed_extrema(0.0, 3.0).unwrap().sup - 3.0).abs() < 1e-15);
    }

    #[test]
    fn support_slopes() {
        let h = PiecewiseMap::power(1.0, 0.5).unwrap();
        let l = h.support_slope(2.5, (0.0, 5.0), None).unwrap();
        assert!((l.slope - 1.0 / 10f64.sqrt()).abs() < 1e-15);
        let l = h.support_slope(1.0 / 3.0, (0.0, 1.0), None).unwrap();
        assert!((l.slope - 0.5 * 3f64.sqrt()).abs() < 1e-12);
        let lin = PiecewiseMap::affine_on(0.0, 2.0, 0.0, f64::INFINITY, Domain::Nonneg).unwrap();
        assert_eq!(lin.support_slope(3.0, (0.0, 10.0), None).unwrap().slope, 2.0);
        let convex = PiecewiseMap::power(1.0, 2.0).unwrap();
        assert!(convex.support_slope(1.0, (0.0, 3.0), None).is_err());
    }

    #[test]
    fn rejects_bad_partitions() {
        let gap = PiecewiseMap::new(
            vec![
                Segment::new(0.0, 1.0, Expr::Const(0.0), Mono::Const),
                Segment::new(2.0, f64::INFINITY, Expr::Const(0.0), Mono::Const),
            ],
            Domain::Nonneg,
        );
        assert!(gap.is_err());
        let wrong_mono =
            PiecewiseMap::new(vec![Segment::new(0.0, 1.0, Expr::Affine { a: 1.0, b: -1.0 }, Mono::Inc)], Domain::Nonneg);
        assert!(wrong_mono.is_err());
    }

    #[test]
    fn preimages() {
        let q = PiecewiseMap::quadratic_on(0.25, -1.0, 1.0, 0.0, 5.0, Domain::Nonneg).unwrap();
        // (x − 0.5)² ≥ 1 on [0, 5] ⇔ x ≥ 1.5
        let s = q.superlevel(1.0);
        assert_eq!(s.parts().len(), 1);
        assert!((s.parts()[0].0 - 1.5).abs() < 1e-14);
        // (x − 0.5)² ≥ 0.04 ⇔ x ≤ 0.3 or x ≥ 0.7
        let s = q.superlevel(0.04);
        assert_eq!(s.parts().len(), 2);
        assert!((s.length() - (0.3 + 4.3)).abs() < 1e-12);
    }

    #[test]
    fn reflect_and_negate() {
        let cube = PiecewiseMap::odd_power(1.0, 3).unwrap();
        let h2 = cube.reflect().unwrap().negate().unwrap();
        assert!(close(h2.eval(0.5).unwrap(), 0.125));
        let h = PiecewiseMap::new(
            vec![
                Segment::new(f64::NEG_INFINITY, 0.0, Expr::Affine { a: 0.0, b: 2.0 }, Mono::Inc),
                Segment::new(0.0, f64::INFINITY, Expr::Affine { a: 0.0, b: 1.0 }, Mono::Inc),
            ],
            Domain::Real,
        )
        .unwrap();
        let h2 = h.reflect().unwrap().negate().unwrap().restrict(0.0, f64::INFINITY, Domain::Nonneg).unwrap();
        assert_eq!(h2.eval(1.5).unwrap(), 3.0);
        assert_eq!(h2.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"segments":[{"lo":0,"hi":1,"kind":"const","params":[0],"mono":"const"},
            {"lo":1,"hi":1,"kind":"const","params":[0.5],"mono":"const"},
            {"lo":1,"hi":"inf","kind":"power","params":[1,2],"mono":"inc"}],"domain":"nonneg"}"#;
        let h: PiecewiseMap = serde_json::from_str(text).unwrap();
        assert_eq!(h.eval(1.0).unwrap(), 0.5);
        assert_eq!(h.eval(2.0).unwrap(), 4.0);
        let back: PiecewiseMap = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn shape_classification() {
        let peak = PiecewiseMap::quadratic_on(0.0, 2.0, -1.0, 0.0, 2.0, Domain::Nonneg).unwrap();
        assert_eq!(peak.quasiconcave_pivot(), Some(1.0));
        assert!(peak.is_concave());
        assert!(!peak.is_nondecreasing());
        assert!(PiecewiseMap::power(1.0, 0.5).unwrap().is_nondecreasing());
        assert!(jump_map().is_nondecreasing());
    }
}
