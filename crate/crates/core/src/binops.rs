//! Nondecreasing binary operations and their declared structure.
//!
//! Flags are declarations. [`check_flags`] can falsify the algebraic ones on a
//! sample grid and can suspect a continuity failure, but it never certifies
//! continuity: a finite sample cannot.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::extreal::{ExtReal, SignedExtReal};
use crate::{Error, Result};

pub type BinFn = Arc<dyn Fn(ExtReal, ExtReal) -> ExtReal + Send + Sync>;
pub type MixedFn = Arc<dyn Fn(ExtReal, SignedExtReal) -> SignedExtReal + Send + Sync>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpFlags {
    pub nondecreasing: bool,
    /// `a ∘ 0 = 0` for all `a`.
    pub zero_absorbing: bool,
    /// `x ↦ x ∘ y` is left-continuous for every `y`.
    pub left_cont_first: bool,
    pub right_cont_first: bool,
    /// `y ↦ x ∘ y` is left-continuous for every `x`.
    pub left_cont_second: bool,
    pub right_cont_second: bool,
    /// `(a + b) ∘ c ≤ a ∘ c + b ∘ c`.
    pub subdistributive_add: bool,
    pub associative: bool,
}

impl OpFlags {
    const CONTINUOUS: OpFlags = OpFlags {
        nondecreasing: true,
        zero_absorbing: true,
        left_cont_first: true,
        right_cont_first: true,
        left_cont_second: true,
        right_cont_second: true,
        subdistributive_add: true,
        associative: true,
    };
}

/// How `t ↦ t ∘ G(t)` inherits a Lipschitz modulus from `G`; used to certify
/// profile searches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Lipschitz {
    #[default]
    Unknown,
    /// `|a∘b − a'∘b'| ≤ max(|a − a'|, |b − b'|)`, as for `min`.
    Unit,
    /// `a∘b = ab`.
    Bilinear,
}

/// A nondecreasing map `[0,∞]² → [0,∞]` with declared properties.
#[derive(Clone)]
pub struct BinaryOpSpec {
    name: String,
    eval: BinFn,
    pub flags: OpFlags,
    /// Values `a` with `a ∘ a = a`.
    pub idempotent_on: Vec<ExtReal>,
    pub lipschitz: Lipschitz,
}

impl fmt::Debug for BinaryOpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryOpSpec").field("name", &self.name).field("flags", &self.flags).finish()
    }
}

impl BinaryOpSpec {
    pub fn new<F>(name: impl Into<String>, flags: OpFlags, eval: F) -> Self
    where
        F: Fn(ExtReal, ExtReal) -> ExtReal + Send + Sync + 'static,
    {
        BinaryOpSpec {
            name: name.into(),
            eval: Arc::new(eval),
            flags,
            idempotent_on: Vec::new(),
            lipschitz: Lipschitz::Unknown,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn apply(&self, a: ExtReal, b: ExtReal) -> ExtReal {
        (self.eval)(a, b)
    }

    pub fn min() -> Self {
        let mut op = BinaryOpSpec::new("min", OpFlags::CONTINUOUS, |a, b| a.min(b));
        op.idempotent_on = vec![ExtReal::ZERO, ExtReal::ONE, ExtReal::INFINITY];
        op.lipschitz = Lipschitz::Unit;
        op
    }

    /// Product with `∞·0 = 0`. The right-continuity flag refers to finite
    /// second arguments: `x ↦ x·∞` jumps at `0`.
    pub fn product() -> Self {
        let mut op = BinaryOpSpec::new("product", OpFlags::CONTINUOUS, |a, b| a * b);
        op.idempotent_on = vec![ExtReal::ZERO, ExtReal::ONE];
        op.lipschitz = Lipschitz::Bilinear;
        op
    }

    /// Resolves `min`, `product`, a t-norm name, `qconj:<tnorm>` or
    /// `semicopula:<name>`.
    pub fn builtin(name: &str) -> Result<Self> {
        match builtin(name)? {
            Op::Binary(op) => Ok(op),
            Op::Mixed(_) => Err(Error::InvalidOp(format!("{name} mixes signs; it is not a [0,∞]² operation"))),
        }
    }

    /// Checks the two boundary values of a fuzzy conjunction and
    /// nondecreasingness on an 11-point grid of `[0,1]`.
    pub fn is_fuzzy_conjunction(&self) -> bool {
        let (z, o) = (ExtReal::ZERO, ExtReal::ONE);
        self.apply(o, o) == o
            && self.apply(z, o) == z
            && self.apply(o, z) == z
            && self.apply(z, z) == z
            && nondecreasing_witness(self, &unit_grid()).is_none()
    }

    /// A fuzzy conjunction with `1` as neutral element, checked on a grid.
    pub fn is_semicopula(&self) -> bool {
        self.is_fuzzy_conjunction()
            && unit_grid()
                .iter()
                .all(|&a| approx_eq(self.apply(a, ExtReal::ONE), a) && approx_eq(self.apply(ExtReal::ONE, a), a))
    }
}

/// A nondecreasing map `[0,∞] × [−∞,0] → [−∞,∞]`.
#[derive(Clone)]
pub struct MixedOpSpec {
    name: String,
    eval: MixedFn,
    pub nondecreasing: bool,
}

impl fmt::Debug for MixedOpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixedOpSpec").field("name", &self.name).finish()
    }
}

impl MixedOpSpec {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(ExtReal, SignedExtReal) -> SignedExtReal + Send + Sync + 'static,
    {
        MixedOpSpec { name: name.into(), eval: Arc::new(eval), nondecreasing: true }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, a: ExtReal, b: SignedExtReal) -> SignedExtReal {
        (self.eval)(a, b)
    }

    pub fn plus() -> Self {
        MixedOpSpec::new("plus", |a, b| a.to_signed() + b)
    }

    /// The symmetric maximum `a ⊻ b = sign(a + b)(|a| ∨ |b|)`.
    pub fn ovee() -> Self {
        MixedOpSpec::new("ovee", |a, b| symmetric_max(a.to_signed(), b))
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match builtin(name)? {
            Op::Mixed(op) => Ok(op),
            Op::Binary(_) => Err(Error::InvalidOp(format!("{name} is not a mixed-sign operation"))),
        }
    }
}

/// `sign(a + b)(|a| ∨ |b|)`. At `a = −b` the sign is `0`, so the value is `0`.
pub fn symmetric_max(a: SignedExtReal, b: SignedExtReal) -> SignedExtReal {
    let magnitude = a.abs().max(b.abs()).to_signed();
    match (a + b).signum() {
        1 => magnitude,
        -1 => -magnitude,
        _ => SignedExtReal::ZERO,
    }
}

pub enum Op {
    Binary(BinaryOpSpec),
    Mixed(MixedOpSpec),
}

/// Looks up a named operation.
pub fn builtin(name: &str) -> Result<Op> {
    let name = name.trim();
    if let Some(inner) = name.strip_prefix("qconj:") {
        return Ok(Op::Binary(fuzzy_conjunction_to_circ(&tnorm(inner)?)?));
    }
    if let Some(inner) = name.strip_prefix("semicopula:") {
        return Ok(Op::Binary(semicopula_circ(&semicopula(inner)?)?));
    }
    match name {
        "min" => Ok(Op::Binary(BinaryOpSpec::min())),
        "product" | "prod" => Ok(Op::Binary(BinaryOpSpec::product())),
        "plus" | "+" => Ok(Op::Mixed(MixedOpSpec::plus())),
        "ovee" => Ok(Op::Mixed(MixedOpSpec::ovee())),
        other => tnorm(other).map(Op::Binary).map_err(|_| Error::UnknownOp(other.to_string())),
    }
}

fn clamp1(x: ExtReal) -> f64 {
    x.to_f64().min(1.0)
}

/// A t-norm on `[0,1]²`, extended to `[0,∞]²` by clamping both inputs at 1.
///
/// Names: `min`, `product`, `lukasiewicz`, `nilpotent_min`, `drastic`.
pub fn tnorm(name: &str) -> Result<BinaryOpSpec> {
    let unit = |f: fn(f64, f64) -> f64| move |a: ExtReal, b: ExtReal| ExtReal::new(f(clamp1(a), clamp1(b)));
    let mut flags = OpFlags { subdistributive_add: false, ..OpFlags::CONTINUOUS };
    let mut op = match name {
        "min" => BinaryOpSpec::new("tnorm:min", OpFlags::CONTINUOUS, unit(f64::min)),
        "product" | "prod" => BinaryOpSpec::new("tnorm:product", OpFlags::CONTINUOUS, unit(|a, b| a * b)),
        "lukasiewicz" => BinaryOpSpec::new("tnorm:lukasiewicz", flags, unit(|a, b| (a - (1.0 - b)).max(0.0).min(a.min(b)))),
        "nilpotent_min" => {
            flags.right_cont_first = false;
            flags.right_cont_second = false;
            BinaryOpSpec::new("tnorm:nilpotent_min", flags, unit(|a, b| if a + b > 1.0 { a.min(b) } else { 0.0 }))
        }
        "drastic" => {
            flags.left_cont_first = false;
            flags.left_cont_second = false;
            BinaryOpSpec::new(
                "tnorm:drastic",
                flags,
                unit(|a, b| if a.max(b) >= 1.0 { a.min(b) } else { 0.0 }),
            )
        }
        other => return Err(Error::UnknownOp(format!("t-norm {other}"))),
    };
    op.idempotent_on = vec![ExtReal::ZERO, ExtReal::ONE];
    Ok(op)
}

/// A semicopula on `[0,1]²`: any t-norm name, or `prodmax` for the
/// non-associative `S(a,b) = ab(a ∨ b)`.
pub fn semicopula(name: &str) -> Result<BinaryOpSpec> {
    if name == "prodmax" {
        let flags = OpFlags { subdistributive_add: false, associative: false, ..OpFlags::CONTINUOUS };
        let mut op = BinaryOpSpec::new("semicopula:prodmax", flags, |a, b| {
            let (a, b) = (clamp1(a), clamp1(b));
            ExtReal::new(a * b * a.max(b))
        });
        op.idempotent_on = vec![ExtReal::ZERO, ExtReal::ONE];
        return Ok(op);
    }
    tnorm(name)
}

/// Turns a fuzzy conjunction `⊗` into `a ∘ b = (b ∧ 1) ⊗ (a ∧ 1)`, so that
/// the q-integral `sup_t μ({f ≥ t}) ⊗ t` is a generalized Sugeno integral.
/// `a ∘ 0 = 0` follows from `0 ≤ 0 ⊗ a ≤ 0 ⊗ 1 = 0`.
pub fn fuzzy_conjunction_to_circ(conj: &BinaryOpSpec) -> Result<BinaryOpSpec> {
    if !conj.is_fuzzy_conjunction() {
        return Err(Error::InvalidOp(format!("{} is not a fuzzy conjunction", conj.name())));
    }
    let c = conj.clone();
    let flags = OpFlags {
        nondecreasing: true,
        zero_absorbing: true,
        left_cont_first: conj.flags.left_cont_second,
        right_cont_first: conj.flags.right_cont_second,
        left_cont_second: conj.flags.left_cont_first,
        right_cont_second: conj.flags.right_cont_first,
        subdistributive_add: false,
        associative: false,
    };
    let mut op = BinaryOpSpec::new(format!("qconj:{}", short_name(conj.name())), flags, move |a, b| {
        c.apply(ExtReal::new(clamp1(b)), ExtReal::new(clamp1(a)))
    });
    op.idempotent_on = vec![ExtReal::ZERO];
    Ok(op)
}

/// `a ∘ b = S(a ∧ 1, b ∧ 1)` for a semicopula `S`.
pub fn semicopula_circ(s: &BinaryOpSpec) -> Result<BinaryOpSpec> {
    if !s.is_semicopula() {
        return Err(Error::InvalidOp(format!("{} is not a semicopula", s.name())));
    }
    let inner = s.clone();
    let flags = OpFlags { subdistributive_add: false, associative: false, ..s.flags };
    let mut op = BinaryOpSpec::new(format!("semicopula:{}", short_name(s.name())), flags, move |a, b| {
        inner.apply(ExtReal::new(clamp1(a)), ExtReal::new(clamp1(b)))
    });
    op.idempotent_on = vec![ExtReal::ZERO];
    Ok(op)
}

fn short_name(name: &str) -> &str {
    name.rsplit(':').next().unwrap_or(name)
}

fn unit_grid() -> Vec<ExtReal> {
    (0..=10).map(|i| ExtReal::new(i as f64 / 10.0)).collect()
}

fn approx_eq(a: ExtReal, b: ExtReal) -> bool {
    match (a.finite(), b.finite()) {
        (Some(x), Some(y)) => (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs())),
        (None, None) => true,
        _ => false,
    }
}

fn approx_le(a: ExtReal, b: ExtReal) -> bool {
    a <= b || approx_eq(a, b)
}

/// The default checking grid `{0, 0.1, 0.5, 1, 2, ∞}`.
pub fn default_grid() -> Vec<ExtReal> {
    [0.0, 0.1, 0.5, 1.0, 2.0, f64::INFINITY].into_iter().map(ExtReal::new).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FlagStatus {
    Pass,
    Fail { witness: Vec<ExtReal> },
    /// Not falsified on the sample; continuity is never certified.
    Unverified,
    NotDeclared,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlagCheck {
    pub flag: &'static str,
    pub declared: bool,
    #[serde(flatten)]
    pub status: FlagStatus,
    /// Sample points (pairs or triples) examined.
    pub checked: usize,
    /// Number of failing samples.
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlagReport {
    pub op: String,
    pub checks: Vec<FlagCheck>,
}

impl FlagReport {
    /// True when no declared flag was falsified.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.status, FlagStatus::Fail { .. }))
    }

    pub fn get(&self, flag: &str) -> Option<&FlagCheck> {
        self.checks.iter().find(|c| c.flag == flag)
    }
}

fn nondecreasing_witness(op: &BinaryOpSpec, grid: &[ExtReal]) -> Option<Vec<ExtReal>> {
    let mut sorted = grid.to_vec();
    sorted.sort();
    for &y in &sorted {
        for w in sorted.windows(2) {
            if !approx_le(op.apply(w[0], y), op.apply(w[1], y)) {
                return Some(vec![w[0], w[1], y]);
            }
            if !approx_le(op.apply(y, w[0]), op.apply(y, w[1])) {
                return Some(vec![y, w[0], w[1]]);
            }
        }
    }
    None
}

/// Tests every declared flag of `op` against `grid` (which should contain 0 and ∞).
///
/// Nondecreasingness is tested on all grid pairs, subdistributivity and
/// associativity on all triples. Continuity flags are probed at `x ± δ` for
/// finite second arguments and can only be falsified.
pub fn check_flags(op: &BinaryOpSpec, grid: &[ExtReal]) -> FlagReport {
    let mut checks = Vec::new();
    let n = grid.len();

    let mut tally = |flag: &'static str, declared: bool, cases: &mut dyn Iterator<Item = Option<Vec<ExtReal>>>| {
        let mut checked = 0;
        let mut failures = 0;
        let mut witness = None;
        for case in cases {
            checked += 1;
            if let Some(w) = case {
                failures += 1;
                witness.get_or_insert(w);
            }
        }
        let status = match (declared, witness) {
            (false, _) => FlagStatus::NotDeclared,
            (true, Some(witness)) => FlagStatus::Fail { witness },
            (true, None) => FlagStatus::Pass,
        };
        checks.push(FlagCheck { flag, declared, status, checked, failures });
    };

    let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (grid[i], grid[j])));
    let triples = || pairs().flat_map(move |(a, b)| grid.iter().map(move |&c| (a, b, c)));

    tally(
        "nondecreasing",
        op.flags.nondecreasing,
        &mut pairs().flat_map(|(a, c)| pairs().map(move |(b, d)| (a, b, c, d))).filter(|(a, b, c, d)| a <= c && b <= d).map(
            |(a, b, c, d)| (!approx_le(op.apply(a, b), op.apply(c, d))).then(|| vec![a, b, c, d]),
        ),
    );
    tally(
        "zero_absorbing",
        op.flags.zero_absorbing,
        &mut grid.iter().map(|&a| (!op.apply(a, ExtReal::ZERO).is_zero()).then(|| vec![a])),
    );
    tally(
        "subdistributive_add",
        op.flags.subdistributive_add,
        &mut triples()
            .map(|(a, b, c)| (!approx_le(op.apply(a + b, c), op.apply(a, c) + op.apply(b, c))).then(|| vec![a, b, c])),
    );
    tally(
        "associative",
        op.flags.associative,
        &mut triples().map(|(a, b, c)| {
            (!approx_eq(op.apply(op.apply(a, b), c), op.apply(a, op.apply(b, c)))).then(|| vec![a, b, c])
        }),
    );
    tally(
        "idempotent_on",
        !op.idempotent_on.is_empty(),
        &mut op.idempotent_on.iter().map(|&a| (!approx_eq(op.apply(a, a), a)).then(|| vec![a])),
    );

    for (flag, declared, first, left) in [
        ("left_cont_first", op.flags.left_cont_first, true, true),
        ("right_cont_first", op.flags.right_cont_first, true, false),
        ("left_cont_second", op.flags.left_cont_second, false, true),
        ("right_cont_second", op.flags.right_cont_second, false, false),
    ] {
        let mut checked = 0;
        let mut witness = None;
        let mut failures = 0;
        for (x, y) in pairs() {
            let (Some(xv), true) = (x.finite(), y.is_finite()) else { continue };
            let delta = 1e-9 * xv.abs().max(1.0);
            let probe = if left { xv - delta } else { xv + delta };
            if probe < 0.0 {
                continue;
            }
            let probe = ExtReal::new(probe);
            let (at, near) = if first {
                (op.apply(x, y), op.apply(probe, y))
            } else {
                (op.apply(y, x), op.apply(y, probe))
            };
            checked += 1;
            let gap = at.abs_diff(near);
            if gap > 1e-6 * (1.0 + at.to_f64().abs().min(1e12)) {
                failures += 1;
                witness.get_or_insert(if first { vec![x, y] } else { vec![y, x] });
            }
        }
        let status = match (declared, witness) {
            (false, _) => FlagStatus::NotDeclared,
            (true, Some(witness)) => FlagStatus::Fail { witness },
            (true, None) => FlagStatus::Unverified,
        };
        checks.push(FlagCheck { flag, declared, status, checked, failures });
    }

    FlagReport { op: op.name().to_string(), checks }
}

/// Pairwise nondecreasingness of a mixed operation on `pos × neg` grids.
pub fn check_mixed(op: &MixedOpSpec, pos: &[ExtReal], neg: &[SignedExtReal]) -> Option<(ExtReal, SignedExtReal)> {
    let mut p = pos.to_vec();
    p.sort();
    let mut q = neg.to_vec();
    q.sort();
    for &b in &q {
        for w in p.windows(2) {
            if op.apply(w[0], b) > op.apply(w[1], b) {
                return Some((w[1], b));
            }
        }
    }
    for &a in &p {
        for w in q.windows(2) {
            if op.apply(a, w[0]) > op.apply(a, w[1]) {
                return Some((a, w[1]));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: f64) -> ExtReal {
        ExtReal::new(x)
    }

    #[test]
    fn min_and_product_values() {
        assert_eq!(BinaryOpSpec::min().apply(e(2.0), e(3.0)), e(2.0));
        assert_eq!(BinaryOpSpec::product().apply(ExtReal::INFINITY, ExtReal::ZERO), ExtReal::ZERO);
    }

    #[test]
    fn ovee_example() {
        let v = MixedOpSpec::ovee().apply(e(0.2), SignedExtReal::new(-0.1));
        assert_eq!(v, SignedExtReal::new(0.2));
        assert_eq!(MixedOpSpec::ovee().apply(e(0.3), SignedExtReal::new(-0.3)), SignedExtReal::ZERO);
        assert_eq!(MixedOpSpec::plus().apply(e(0.2), SignedExtReal::new(-0.1)).to_f64(), 0.2 - 0.1);
    }

    #[test]
    fn unknown_name_is_rejected() {
        assert!(matches!(builtin("frobnicate"), Err(Error::UnknownOp(_))));
    }

    #[test]
    fn builtins_pass_their_flags() {
        let grid = default_grid();
        for name in [
            "min",
            "product",
            "qconj:min",
            "qconj:product",
            "qconj:lukasiewicz",
            "semicopula:min",
            "semicopula:product",
            "semicopula:prodmax",
            "lukasiewicz",
            "nilpotent_min",
        ] {
            let op = BinaryOpSpec::builtin(name).unwrap();
            let report = check_flags(&op, &grid);
            assert!(report.all_passed(), "{name}: {report:?}");
        }
        let pos: Vec<_> = grid.clone();
        let neg: Vec<_> = grid.iter().map(|v| -v.to_signed()).collect();
        assert!(check_mixed(&MixedOpSpec::plus(), &pos, &neg).is_none());
        assert!(check_mixed(&MixedOpSpec::ovee(), &pos, &neg).is_none());
    }

    #[test]
    fn product_is_distributive() {
        let report = check_flags(&BinaryOpSpec::product(), &[e(0.0), e(1.0), e(2.0), ExtReal::INFINITY]);
        assert_eq!(report.get("subdistributive_add").unwrap().status, FlagStatus::Pass);
    }

    #[test]
    fn subdistributivity_triples() {
        let flags = OpFlags { nondecreasing: true, zero_absorbing: true, subdistributive_add: true, ..Default::default() };
        // a·b² is linear in a: (a+b)∘c = a∘c + b∘c for every triple
        let linear = BinaryOpSpec::new("ab2", flags, |a, b| a * b * b);
        let grid = [e(0.0), e(1.0), e(2.0)];
        let check = check_flags(&linear, &grid);
        let sub = check.get("subdistributive_add").unwrap();
        assert_eq!(sub.status, FlagStatus::Pass);
        assert_eq!(sub.checked, 27);
        // a²·b: (1+1)²·1 = 4 > 1 + 1
        let convex = BinaryOpSpec::new("a2b", flags, |a, b| a * a * b);
        let sub = check_flags(&convex, &grid).get("subdistributive_add").unwrap().clone();
        assert_eq!(sub.status, FlagStatus::Fail { witness: vec![e(1.0), e(1.0), e(1.0)] });
        assert!(sub.failures > 1);
    }

    #[test]
    fn ceiling_op_is_not_right_continuous() {
        let flags = OpFlags { right_cont_first: true, left_cont_first: true, ..OpFlags::default() };
        let ceil = BinaryOpSpec::new("ceil_min", flags, |a, b| match a.finite() {
            Some(x) => ExtReal::new(x.ceil()).min(b),
            None => b,
        });
        let r = check_flags(&ceil, &default_grid());
        assert!(matches!(r.get("right_cont_first").unwrap().status, FlagStatus::Fail { .. }));
        assert_eq!(r.get("left_cont_first").unwrap().status, FlagStatus::Unverified);
    }

    #[test]
    fn conjunction_to_circ() {
        let circ = fuzzy_conjunction_to_circ(&tnorm("min").unwrap()).unwrap();
        assert_eq!(circ.apply(e(0.7), e(0.4)), e(0.4));
        let circ = fuzzy_conjunction_to_circ(&tnorm("product").unwrap()).unwrap();
        assert_eq!(circ.apply(e(2.0), e(0.5)), e(0.5));
        for name in ["min", "product", "lukasiewicz", "drastic", "nilpotent_min"] {
            let circ = fuzzy_conjunction_to_circ(&tnorm(name).unwrap()).unwrap();
            for a in default_grid() {
                assert_eq!(circ.apply(a, ExtReal::ZERO), ExtReal::ZERO);
            }
        }
    }

    #[test]
    fn conjunction_boundary_violation_is_rejected() {
        let bad = BinaryOpSpec::new("one", OpFlags::default(), |_, _| ExtReal::ONE);
        assert!(fuzzy_conjunction_to_circ(&bad).is_err());
    }

    #[test]
    fn semicopula_laws() {
        for name in ["min", "product", "lukasiewicz", "prodmax", "drastic"] {
            let s = semicopula(name).unwrap();
            assert!(s.is_semicopula(), "{name}");
            for a in unit_grid() {
                for b in unit_grid() {
                    assert!(s.apply(a, b) <= a.min(b), "{name}: S({a},{b}) > a∧b");
                }
            }
        }
        let ab2 = BinaryOpSpec::new("ab2", OpFlags::default(), |a, b| {
            ExtReal::new(clamp1(a) * clamp1(b) * clamp1(b))
        });
        assert!(ab2.is_fuzzy_conjunction());
        assert!(!ab2.is_semicopula());
    }

    #[test]
    fn min_is_the_only_builtin_below_both_arguments() {
        let grid = default_grid();
        let min = BinaryOpSpec::min();
        let prod = BinaryOpSpec::product();
        for &a in &grid {
            for &b in &grid {
                assert!(min.apply(a, b) <= a && min.apply(a, b) <= b);
            }
        }
        assert!(prod.apply(e(2.0), e(2.0)) > e(2.0));
    }
}
