//! Jensen-type lower and upper bounds for generalized Sugeno integrals of
//! `H(f)`, their hypotheses, and an instance-level checker.
//!
//! [`formulas`] holds the closed forms; [`check_bound`] evaluates both sides
//! of one inequality on one instance and records which hypotheses hold.
//! Hypothesis failures never stop the evaluation.

pub mod formulas;
pub mod liapunov;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::binops::{fuzzy_conjunction_to_circ, semicopula_circ, tnorm, BinaryOpSpec, MixedOpSpec};
use crate::extreal::{ExtReal, SignedExtReal};
use crate::integrals::{integrate, IntegralResult, DEFAULT_TOL};
use crate::profile::Instance;
use crate::symmetric::{mixed_monotone_bounds, symmetric_integral, upper_bound_001};
use crate::transforms::{PiecewiseMap, SupportLine};
use crate::verify::predicates::{instance_property, Predicate};
use crate::{Error, Result};

use formulas::{nonneg, BoundInputs, Ss};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    Tw1i,
    Tw1ii,
    Flo,
    Convex,
    Shilkret,
    Qint,
    Seminormed,
    Tw2i,
    Tw2ii,
    Co2,
    Ss1,
    Ss2,
    Ss3,
    Ss4,
    Noo1,
    In3a,
    Tw4,
    In99,
    L1,
    Comonotone,
    In80,
    Signed001,
    MixedLower,
    MixedUpper,
    /// `H(∫f) ≤ ∫H(f)` for convex `H`; false in general.
    ConvexJensen,
    /// `∫H(f) ≤ m/(m+1)·(sup f − p) + H(p)/(m+1)` for concave `H`; false in general.
    Nn1,
}

const NAMES: &[(BoundId, &str, &[&str])] = &[
    (BoundId::Tw1i, "tw1i", &["tw1_i", "in1"]),
    (BoundId::Tw1ii, "tw1ii", &["tw1_ii", "in2"]),
    (BoundId::Flo, "flo", &[]),
    (BoundId::Convex, "convex", &["in2a"]),
    (BoundId::Shilkret, "shilkret", &["pp1"]),
    (BoundId::Qint, "qint", &["q"]),
    (BoundId::Seminormed, "seminormed", &[]),
    (BoundId::Tw2i, "tw2i", &["tw2_i", "in3"]),
    (BoundId::Tw2ii, "tw2ii", &["tw2_ii", "in4"]),
    (BoundId::Co2, "co2", &["unimodal"]),
    (BoundId::Ss1, "ss1", &[]),
    (BoundId::Ss2, "ss2", &[]),
    (BoundId::Ss3, "ss3", &[]),
    (BoundId::Ss4, "ss4", &[]),
    (BoundId::Noo1, "noo1", &[]),
    (BoundId::In3a, "in3a", &[]),
    (BoundId::Tw4, "tw4", &["in8"]),
    (BoundId::In99, "in99", &[]),
    (BoundId::L1, "l1", &[]),
    (BoundId::Comonotone, "comono", &["comonotone"]),
    (BoundId::In80, "in80", &[]),
    (BoundId::Signed001, "001", &["signed"]),
    (BoundId::MixedLower, "mixed_lower", &["mixed-lower"]),
    (BoundId::MixedUpper, "mixed_upper", &["mixed-upper"]),
    (BoundId::ConvexJensen, "convex_jensen", &["jensen"]),
    (BoundId::Nn1, "nn1", &[]),
];

impl BoundId {
    pub const ALL: [BoundId; 26] = [
        BoundId::Tw1i,
        BoundId::Tw1ii,
        BoundId::Flo,
        BoundId::Convex,
        BoundId::Shilkret,
        BoundId::Qint,
        BoundId::Seminormed,
        BoundId::Tw2i,
        BoundId::Tw2ii,
        BoundId::Co2,
        BoundId::Ss1,
        BoundId::Ss2,
        BoundId::Ss3,
        BoundId::Ss4,
        BoundId::Noo1,
        BoundId::In3a,
        BoundId::Tw4,
        BoundId::In99,
        BoundId::L1,
        BoundId::Comonotone,
        BoundId::In80,
        BoundId::Signed001,
        BoundId::MixedLower,
        BoundId::MixedUpper,
        BoundId::ConvexJensen,
        BoundId::Nn1,
    ];

    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(id, _, _)| *id == self).map(|(_, n, _)| *n).expect("every id is named")
    }

    pub fn direction(self) -> Direction {
        use BoundId::*;
        match self {
            Tw1i | Tw1ii | Flo | Convex | Shilkret | Qint | Seminormed | Ss1 | Ss3 | Noo1 | MixedLower
            | ConvexJensen => Direction::Lower,
            _ => Direction::Upper,
        }
    }

    /// Claims that do not hold in general; kept to reproduce their refutation.
    pub fn is_refuted(self) -> bool {
        matches!(self, BoundId::ConvexJensen | BoundId::Nn1)
    }

    pub fn is_signed(self) -> bool {
        matches!(self, BoundId::Signed001 | BoundId::MixedLower | BoundId::MixedUpper)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        NAMES
            .iter()
            .find(|(_, n, aliases)| *n == s || aliases.contains(&s.as_str()))
            .map(|(id, _, _)| *id)
            .ok_or_else(|| Error::Parse(format!("unknown bound id {s:?}")))
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for BoundId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub bound: BoundId,
    pub direction: Direction,
    pub lhs: SignedExtReal,
    pub rhs: SignedExtReal,
    /// `lhs − rhs` for lower bounds, `rhs − lhs` for upper bounds.
    pub slack: SignedExtReal,
    pub holds: bool,
    pub hypotheses_hold: bool,
    pub hypotheses: Vec<Hypothesis>,
    /// Intermediate values such as `p`, `μ(A)`, `m_p` or the minimizing `c`.
    pub quantities: BTreeMap<String, SignedExtReal>,
    /// Tolerance used for `holds`, including profile-search error bounds.
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// An instance together with the transform and operations a bound needs.
#[derive(Clone, Debug)]
pub struct BoundInstance {
    pub instance: Instance,
    pub h: PiecewiseMap,
    /// The `∘` of the generalized integrals (default `min`).
    pub op: BinaryOpSpec,
    /// The fuzzy conjunction of the q-integral or the semicopula of the
    /// seminormed integral (default `min`).
    pub conj: Option<BinaryOpSpec>,
    /// The `⋆` of the signed bound (default `+`).
    pub star: MixedOpSpec,
    /// Overrides the support-line slope `m_p` (default: midpoint of the
    /// one-sided derivatives).
    pub slope: Option<f64>,
    /// The extremum point: `a` for convex `H`, `a₀` for the q-integral and
    /// seminormed bounds, `c` for the unimodal bound.
    pub pivot: Option<f64>,
    /// Overrides the inner integral `p` of the support-line bound.
    pub p: Option<f64>,
    pub c_grid: Option<Vec<f64>>,
    /// Tolerance for profile integrals.
    pub profile_tol: f64,
}

impl BoundInstance {
    pub fn new(instance: Instance, h: PiecewiseMap) -> Self {
        BoundInstance {
            instance,
            h,
            op: BinaryOpSpec::min(),
            conj: None,
            star: MixedOpSpec::plus(),
            slope: None,
            pivot: None,
            p: None,
            c_grid: None,
            profile_tol: DEFAULT_TOL,
        }
    }
}

struct Ctx<'a> {
    bi: &'a BoundInstance,
    hyps: Vec<Hypothesis>,
    quantities: BTreeMap<String, SignedExtReal>,
    notes: Vec<String>,
    err: f64,
}

struct Sides {
    lhs: SignedExtReal,
    rhs: SignedExtReal,
}

fn sides(lhs: ExtReal, rhs: ExtReal) -> Sides {
    Sides { lhs: lhs.to_signed(), rhs: rhs.to_signed() }
}

impl<'a> Ctx<'a> {
    fn inst(&self) -> &'a Instance {
        &self.bi.instance
    }

    fn h(&self) -> &'a PiecewiseMap {
        &self.bi.h
    }

    fn hyp(&mut self, name: &str, holds: bool, detail: impl Into<String>) {
        self.hyps.push(Hypothesis { name: name.to_string(), holds, detail: detail.into() });
    }

    fn quantity(&mut self, name: &str, v: impl Into<SignedExtReal>) {
        self.quantities.insert(name.to_string(), v.into());
    }

    fn integral(&mut self, op: &BinaryOpSpec, chain: &[&PiecewiseMap]) -> Result<IntegralResult> {
        let r = integrate(op, self.inst(), chain, self.bi.profile_tol)?;
        self.err += r.error_bound.unwrap_or(0.0);
        Ok(r)
    }

    fn finite(&mut self, name: &str, v: ExtReal) -> Result<f64> {
        self.quantity(name, v);
        v.finite().ok_or_else(|| Error::NotFinite(format!("{name} = ∫f is infinite")))
    }

    /// `p = Su(f)`.
    fn sugeno_p(&mut self) -> Result<(ExtReal, f64)> {
        let r = self.integral(&BinaryOpSpec::min(), &[])?;
        let p = self.finite("p", r.value)?;
        Ok((r.value, p))
    }

    fn mu_a(&mut self) -> ExtReal {
        let m = self.inst().mu_a();
        self.quantity("mu_a", m);
        m
    }

    fn lhs(&mut self, op: &BinaryOpSpec) -> Result<ExtReal> {
        let h = self.h();
        Ok(self.integral(op, &[h])?.value)
    }

    fn op_flags(&mut self, op: &BinaryOpSpec, which: &[&str]) {
        for &flag in which {
            let (holds, text) = match flag {
                "nondecreasing" => (op.flags.nondecreasing, "∘ is nondecreasing"),
                "zero_absorbing" => (op.flags.zero_absorbing, "a ∘ 0 = 0"),
                "left_cont_first" => (op.flags.left_cont_first, "x ↦ x ∘ y is left-continuous"),
                "right_cont_first" => (op.flags.right_cont_first, "x ↦ x ∘ y is right-continuous"),
                "left_cont_second" => (op.flags.left_cont_second, "y ↦ x ∘ y is left-continuous"),
                "subdistributive_add" => (op.flags.subdistributive_add, "(a + b) ∘ c ≤ a ∘ c + b ∘ c"),
                other => unreachable!("unknown flag {other}"),
            };
            self.hyp(flag, holds, format!("{text} (declared by {})", op.name()));
        }
    }

    fn measure(&mut self, pred: Predicate) {
        let (holds, detail) = instance_property(self.inst(), pred);
        self.hyp(pred.name(), holds, detail);
    }

    fn continuous_measure(&mut self) {
        let holds = match self.inst() {
            Instance::Discrete { .. } => true,
            Instance::Interval { measure, .. } => measure.is_continuous(),
        };
        self.hyp("measure_continuous", holds, if holds { "μ is continuous" } else { "μ is not continuous from above" });
    }

    fn h_nonneg(&mut self) {
        let inf = self.h().global_extrema().inf;
        self.hyp("h_nonneg", inf >= 0.0, format!("inf H = {inf}"));
    }

    fn h_nondecreasing(&mut self) {
        let holds = self.h().is_nondecreasing();
        self.hyp("h_nondecreasing", holds, "H is nondecreasing");
    }

    fn h_left_continuous_at(&mut self, p: f64) {
        let holds = self.h().is_left_continuous_at(p);
        self.hyp("h_left_continuous_at_p", holds, format!("H is left-continuous at {p}"));
    }

    fn h_continuous(&mut self) {
        let holds = self.h().is_continuous();
        self.hyp("h_continuous", holds, "H is continuous");
    }

    fn h_concave(&mut self) {
        let holds = self.h().is_concave();
        self.hyp("h_concave", holds, "H is concave (sampled)");
    }

    /// `f(A) ⊆ [0, 1]`, `μ(A) ≤ 1` and `H([0,1]) ⊆ [0,1]`.
    fn unit_scale(&mut self, mu_a: ExtReal) -> Result<()> {
        self.hyp("mu_a_at_most_one", mu_a <= ExtReal::ONE, format!("μ(A) = {mu_a}"));
        let (lo, hi) = self.inst().range_hull(&[])?;
        self.hyp("f_in_unit_interval", lo >= 0.0 && hi <= 1.0, format!("f(A) ⊆ [{lo}, {hi}]"));
        let h = self.h();
        let ok = h.in_domain(0.0) && h.in_domain(1.0) && {
            let e = h.closed_extrema(0.0, 1.0)?;
            e.inf >= 0.0 && e.sup <= 1.0
        };
        self.hyp("h_maps_unit_interval", ok, "H maps [0, 1] into [0, 1]");
        Ok(())
    }

    /// Support line at `p` with the default or overridden slope, and whether
    /// it dominates `H` on the sampled range.
    fn support_line(&mut self, p: f64) -> Result<SupportLine> {
        let h = self.h();
        let line = h.support_slope(p, (p, p), self.bi.slope)?;
        let (_, f_hi) = self.inst().range_hull(&[])?;
        let reach = 4.0 * p.abs().max(f_hi.abs()).max(1.0);
        let lo = if h.lo().is_finite() { h.lo() } else { -reach };
        let hi = if h.hi().is_finite() { h.hi() } else { reach };
        let check = h.support_slope(p, (lo, hi), Some(line.slope));
        let detail = match &check {
            Ok(_) => format!("H(y) ≤ H({p}) + {}·(y − {p}) on [{lo}, {hi}]", line.slope),
            Err(e) => e.to_string(),
        };
        self.hyp("support_line", check.is_ok(), detail);
        self.quantity("m_p", SignedExtReal::new(line.slope));
        Ok(line)
    }

    fn f_max(&self) -> Result<f64> {
        Ok(self.inst().range_hull(&[])?.1)
    }
}

fn fixed_map(slope: f64, c: f64) -> Result<PiecewiseMap> {
    liapunov::shifted_line(slope, c)
}

/// Evaluates both sides of bound `id` on `bi` and records its hypotheses.
/// `holds` compares with `tol` plus the error bounds of any profile integrals.
pub fn check_bound(bi: &BoundInstance, id: BoundId, tol: f64) -> Result<BoundReport> {
    let mut cx = Ctx { bi, hyps: Vec::new(), quantities: BTreeMap::new(), notes: Vec::new(), err: 0.0 };
    let s = evaluate(&mut cx, id)?;
    let direction = id.direction();
    let slack = match direction {
        Direction::Lower => s.lhs.sub(s.rhs),
        Direction::Upper => s.rhs.sub(s.lhs),
    };
    let tolerance = tol + cx.err;
    let holds = slack >= SignedExtReal::new(-tolerance);
    let hypotheses_hold = cx.hyps.iter().all(|h| h.holds);
    Ok(BoundReport {
        bound: id,
        direction,
        lhs: s.lhs,
        rhs: s.rhs,
        slack,
        holds,
        hypotheses_hold,
        hypotheses: cx.hyps,
        quantities: cx.quantities,
        tolerance,
        notes: cx.notes,
    })
}

fn evaluate(cx: &mut Ctx<'_>, id: BoundId) -> Result<Sides> {
    use BoundId::*;
    let bi = cx.bi;
    let min = BinaryOpSpec::min();
    match id {
        Tw1i | Tw1ii | Tw2i | Tw2ii | Ss1 | Ss2 | Ss3 | Ss4 | Noo1 | In3a => {
            let op = &bi.op;
            let (p, _) = cx.sugeno_p()?;
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(op)?;
            cx.op_flags(op, &["nondecreasing", "zero_absorbing"]);
            cx.h_nonneg();
            match id {
                Tw1i => cx.op_flags(op, &["left_cont_first"]),
                Tw1ii => {
                    cx.op_flags(op, &["left_cont_first"]);
                    cx.measure(Predicate::WeaklySubadditive);
                }
                Tw2i => cx.op_flags(op, &["right_cont_first"]),
                Tw2ii => {
                    cx.op_flags(op, &["right_cont_first"]);
                    cx.measure(Predicate::WeaklySuperadditive);
                }
                Ss1 | Ss2 => cx.continuous_measure(),
                Ss3 => {
                    cx.continuous_measure();
                    cx.measure(Predicate::WeaklySubadditive);
                }
                Ss4 => {
                    cx.continuous_measure();
                    cx.measure(Predicate::WeaklySuperadditive);
                }
                Noo1 => {
                    cx.continuous_measure();
                    cx.measure(Predicate::Subadditive);
                    cx.h_continuous();
                }
                In3a => {
                    cx.continuous_measure();
                    cx.measure(Predicate::Superadditive);
                    cx.h_continuous();
                    let pivot = cx.h().quasiconcave_pivot();
                    cx.hyp("h_quasiconcave", pivot.is_some(), "H is quasiconcave");
                }
                _ => unreachable!(),
            }
            let input = BoundInputs { op, h: cx.h(), p, mu_a };
            let rhs = match id {
                Tw1i => input.tw1_i()?,
                Tw1ii => input.tw1_ii()?,
                Tw2i => input.tw2_i()?,
                Tw2ii => input.tw2_ii()?,
                Ss1 => input.ss(Ss::Ss1)?,
                Ss2 => input.ss(Ss::Ss2)?,
                Ss3 => input.ss(Ss::Ss3)?,
                Ss4 => input.ss(Ss::Ss4)?,
                Noo1 => input.noo1()?,
                _ => input.in3a()?,
            };
            Ok(sides(lhs, rhs))
        }
        Flo | Convex | ConvexJensen => {
            let (p, pf) = cx.sugeno_p()?;
            let lhs = cx.lhs(&min)?;
            cx.h_nonneg();
            let hp = nonneg(cx.h().eval(pf)?, "H(p)")?;
            let rhs = match id {
                Flo => {
                    cx.h_nondecreasing();
                    cx.h_left_continuous_at(pf);
                    hp.min(p)
                }
                Convex => {
                    let convex = cx.h().is_convex();
                    cx.hyp("h_convex", convex, "H is convex (sampled)");
                    let a = bi.pivot.or_else(|| cx.h().quasiconvex_pivot()).unwrap_or(0.0);
                    cx.quantity("a", SignedExtReal::new(a));
                    cx.hyp("p_at_least_a", pf >= a, format!("p = {pf}, minimizer a = {a}"));
                    hp.min(p)
                }
                _ => {
                    let convex = cx.h().is_convex();
                    cx.hyp("h_convex", convex, "H is convex (sampled)");
                    cx.notes.push("H(∫f) ≤ ∫H(f) for convex H is false in general".into());
                    hp
                }
            };
            Ok(sides(lhs, rhs))
        }
        Shilkret => {
            let (p, pf) = cx.sugeno_p()?;
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(&BinaryOpSpec::product())?;
            cx.h_nonneg();
            cx.h_nondecreasing();
            cx.h_left_continuous_at(pf);
            cx.hyp("mu_a_finite", mu_a.is_finite(), format!("μ(A) = {mu_a}"));
            Ok(sides(lhs, formulas::pp1(cx.h(), p)?))
        }
        Qint => {
            let conj = match &bi.conj {
                Some(c) => c.clone(),
                None => tnorm("min")?,
            };
            cx.hyp("fuzzy_conjunction", conj.is_fuzzy_conjunction(), format!("{} is a fuzzy conjunction", conj.name()));
            let circ = fuzzy_conjunction_to_circ(&conj)?;
            cx.op_flags(&conj, &["left_cont_second"]);
            let pr = cx.integral(&circ, &[])?;
            let pf = cx.finite("p", pr.value)?;
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(&circ)?;
            cx.unit_scale(mu_a)?;
            let pivot = bi.pivot.or_else(|| cx.h().quasiconvex_pivot());
            cx.hyp("h_quasiconvex", pivot.is_some(), "H is quasiconvex on its domain");
            let a0 = pivot.unwrap_or(0.0);
            cx.quantity("a0", SignedExtReal::new(a0));
            cx.hyp("p_at_least_a0", pf >= a0, format!("p = {pf}, a₀ = {a0}"));
            let left = cx.h().one_sided_limits(pf).lower_left;
            let after = cx.h().interval_extrema(pf, f64::INFINITY, true, true)?.inf;
            let edge = pf > a0 || left <= after;
            cx.hyp(
                "left_limit_below_tail",
                edge,
                format!("p > a₀ or H(p_-) = {left} ≤ inf H([p, 1]) = {after}"),
            );
            Ok(sides(lhs, conj.apply(pr.value, nonneg(left, "H(p_-)")?)))
        }
        Seminormed => {
            let s = match &bi.conj {
                Some(c) => c.clone(),
                None => crate::binops::semicopula("min")?,
            };
            cx.hyp("semicopula", s.is_semicopula(), format!("{} is a semicopula", s.name()));
            cx.op_flags(&s, &["left_cont_first"]);
            let circ = semicopula_circ(&s)?;
            let pr = cx.integral(&circ, &[])?;
            let pf = cx.finite("p", pr.value)?;
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(&circ)?;
            cx.unit_scale(mu_a)?;
            let a0 = match bi.pivot {
                Some(a) => a,
                None => nondecreasing_start(cx.h()),
            };
            cx.quantity("a0", SignedExtReal::new(a0));
            let h = cx.h();
            let ok = h.is_nondecreasing_on(a0, 1.0)
                && h.breakpoints().into_iter().filter(|&x| x > a0 && x <= 1.0).all(|x| h.is_left_continuous_at(x));
            cx.hyp("h_nondecreasing_left_continuous", ok, format!("H is nondecreasing and left-continuous on [{a0}, 1]"));
            cx.hyp("p_at_least_a0", pf >= a0, format!("p_S = {pf}, a₀ = {a0}"));
            let hp = nonneg(h.eval(pf)?, "H(p_S)")?;
            Ok(sides(lhs, s.apply(hp, pr.value)))
        }
        Co2 => {
            let (p, pf) = cx.sugeno_p()?;
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(&min)?;
            cx.h_nonneg();
            cx.h_continuous();
            let h = cx.h();
            let c = bi.pivot.or_else(|| h.quasiconcave_pivot());
            cx.hyp("h_unimodal", c.is_some(), "H increases then decreases");
            let c = c.unwrap_or(h.lo());
            cx.quantity("c", SignedExtReal::new(c));
            let weak_super = instance_property(cx.inst(), Predicate::WeaklySuperadditive);
            let ok = h.is_nondecreasing_on(h.lo(), c) && h.reflect()?.is_nondecreasing_on(-h.hi(), -c);
            cx.hyp("h_increasing_then_decreasing", ok, format!("H is nondecreasing on [0, {c}] and nonincreasing after"));
            if pf > c {
                cx.hyp("weakly-superadditive", weak_super.0, weak_super.1);
            }
            let hp = nonneg(h.eval(pf)?, "H(p)")?;
            let hc = nonneg(h.eval(c)?, "H(c)")?;
            let rhs = if pf <= c { hp.max(p) } else { hp.max(mu_a.monus(p)) }.min(hc).min(mu_a);
            Ok(sides(lhs, rhs))
        }
        Tw4 => {
            let op = &bi.op;
            cx.op_flags(op, &["nondecreasing", "zero_absorbing", "subdistributive_add"]);
            let pf = match bi.p {
                Some(p) => {
                    cx.quantity("p", SignedExtReal::new(p));
                    p
                }
                None => {
                    let r = cx.integral(op, &[])?;
                    cx.finite("p", r.value)?
                }
            };
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(op)?;
            let line = cx.support_line(pf)?;
            let grid = match &bi.c_grid {
                Some(g) => g.clone(),
                None => liapunov::default_c_grid(mu_a, line.slope, cx.f_max()?)?,
            };
            let best = liapunov::minimize_tw4(op, cx.inst(), &line, &grid, bi.profile_tol)?;
            cx.err += best.error_bound;
            cx.quantity("c", SignedExtReal::new(best.c));
            Ok(sides(lhs, best.value))
        }
        In99 | L1 | Comonotone => {
            let (p, pf) = cx.sugeno_p()?;
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(&min)?;
            cx.h_nonneg();
            cx.h_concave();
            let line = cx.support_line(pf)?;
            let m = line.slope;
            let head = nonneg((line.value - pf * m).max(0.0), "(H(p) − p·m)⁺")?.min(mu_a);
            let rhs = match id {
                In99 => {
                    let g = fixed_map(m, pf)?;
                    let tail = cx.integral(&min, &[&g])?.value;
                    nonneg(line.value, "H(p)")?.min(mu_a) + tail
                }
                L1 => {
                    let g = fixed_map(m.max(0.0), 0.0)?;
                    head + cx.integral(&min, &[&g])?.value
                }
                _ => {
                    cx.hyp("slope_in_unit_interval", m > 0.0 && m <= 1.0, format!("m_p = {m}"));
                    let (lo, hi) = cx.inst().range_hull(&[])?;
                    cx.hyp("f_in_unit_interval", lo >= 0.0 && hi <= 1.0, format!("f(A) ⊆ [{lo}, {hi}]"));
                    head + ExtReal::new(m.max(0.0)).min(p)
                }
            };
            Ok(sides(lhs, rhs))
        }
        In80 => {
            let prod = BinaryOpSpec::product();
            let pr = cx.integral(&prod, &[])?;
            let pf = cx.finite("p", pr.value)?;
            let mu_a = cx.mu_a();
            let lhs = cx.lhs(&prod)?;
            cx.h_nonneg();
            cx.h_concave();
            let (l, r) = cx.h().one_sided_derivatives(pf);
            let diff = matches!((l, r), (Some(a), Some(b)) if (a - b).abs() <= 1e-9 * (1.0 + a.abs()))
                || (pf == cx.h().lo() && r.is_some());
            cx.hyp("h_differentiable_at_p", diff, format!("one-sided derivatives {l:?}, {r:?}"));
            let line = cx.support_line(pf)?;
            let m = line.slope;
            let head = nonneg((line.value - m * pf).max(0.0), "H(p) − p·H'(p)")? * mu_a;
            Ok(sides(lhs, head + ExtReal::new(m.max(0.0) * pf)))
        }
        Signed001 => {
            let star = &bi.star;
            let known = matches!(star.name(), "plus" | "ovee");
            cx.hyp("star_plus_or_ovee", known, format!("⋆ = {}", star.name()));
            let h = cx.h();
            let h0 = if h.in_domain(0.0) { h.eval(0.0)? } else { f64::NAN };
            cx.hyp("h_zero_at_zero", h0 == 0.0, format!("H(0) = {h0}"));
            cx.h_nondecreasing();
            cx.continuous_measure();
            let parts = symmetric_integral(star, cx.inst(), None, bi.profile_tol)?;
            let full = symmetric_integral(star, cx.inst(), Some(h), bi.profile_tol)?;
            for r in [parts.positive, parts.negative, full.positive, full.negative] {
                cx.err += r.error_bound.unwrap_or(0.0);
            }
            let (p1, p2) = (parts.positive.value, parts.negative.value);
            cx.quantity("p1", p1);
            cx.quantity("p2", p2);
            cx.quantity("positive_part", full.positive.value);
            cx.quantity("negative_part", full.negative.value);
            let mu_a = cx.mu_a();
            let sup_h = h.global_extrema().sup;
            cx.hyp("p1_at_most_sup_h", p1.to_f64() <= sup_h, format!("p₁ = {p1}, sup H = {sup_h}"));
            let (Some(x1), Some(x2)) = (p1.finite(), p2.finite()) else {
                return Err(Error::NotFinite("p₁ and p₂ must be finite".into()));
            };
            let rhs = if x1 <= sup_h {
                upper_bound_001(h, p1, p2, mu_a, star)?
            } else {
                // evaluated literally; the hypothesis above records the failure
                let first = nonneg(h.eval(x1)?.max(x1), "H(p₁) ∨ p₁")?.min(mu_a);
                star.apply(first, SignedExtReal::new(h.eval(-x2)?.max(-x2)))
            };
            Ok(Sides { lhs: full.value, rhs })
        }
        MixedLower | MixedUpper => {
            let h = cx.h();
            let lhs = cx.lhs(&min)?;
            cx.h_nonneg();
            let h0 = if h.in_domain(0.0) { h.eval(0.0)? } else { f64::NAN };
            cx.hyp("h_zero_at_zero", h0 == 0.0, format!("H(0) = {h0}"));
            let up = h.is_nondecreasing_on(0.0, f64::INFINITY);
            let down = h.lo() >= 0.0 || h.reflect()?.is_nondecreasing_on(0.0, f64::INFINITY);
            cx.hyp("h_v_shaped", up && down, "H is nonincreasing on x ≤ 0 and nondecreasing on x ≥ 0");
            if id == MixedUpper {
                cx.measure(Predicate::Subadditive);
            }
            let b = mixed_monotone_bounds(h, cx.inst(), bi.profile_tol)?;
            cx.err += b.positive.error_bound.unwrap_or(0.0) + b.negative.error_bound.unwrap_or(0.0);
            cx.quantity("positive_part", b.positive.value);
            cx.quantity("negative_part", b.negative.value);
            Ok(sides(lhs, if id == MixedLower { b.lower } else { b.upper }))
        }
        Nn1 => {
            let (_, pf) = cx.sugeno_p()?;
            let lhs = cx.lhs(&min)?;
            cx.h_nonneg();
            cx.h_concave();
            let line = cx.support_line(pf)?;
            let m = line.slope;
            cx.hyp("slope_positive", m > 0.0, format!("m_p = {m}"));
            let b = cx.f_max()?;
            cx.quantity("sup_f", SignedExtReal::new(b));
            let rhs = m / (m + 1.0) * (b - pf) + line.value / (m + 1.0);
            cx.notes.push("this inequality is false in general".into());
            Ok(Sides { lhs: lhs.to_signed(), rhs: SignedExtReal::new(rhs) })
        }
    }
}

/// The smallest breakpoint (or 0) from which `H` is nondecreasing on `[·, 1]`.
fn nondecreasing_start(h: &PiecewiseMap) -> f64 {
    let mut candidates = vec![0.0_f64.max(h.lo())];
    candidates.extend(h.breakpoints().into_iter().filter(|&x| (0.0..=1.0).contains(&x)));
    candidates.sort_by(f64::total_cmp);
    candidates.into_iter().find(|&a| h.is_nondecreasing_on(a, 1.0)).unwrap_or(1.0)
}
