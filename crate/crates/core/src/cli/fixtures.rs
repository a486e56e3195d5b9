//! Worked examples with known values, run by `reproduce`.

use serde::Serialize;

use crate::binops::{BinaryOpSpec, MixedOpSpec};
use crate::bounds::{check_bound, BoundId, BoundInstance, BoundReport};
use crate::extreal::{ExtReal, SignedExtReal};
use crate::integrals::integrate;
use crate::measure::{DiscreteMeasure, FiniteSpace, IntervalMeasure, StorageMode, Subset};
use crate::profile::Instance;
use crate::symmetric::symmetric_integral;
use crate::transforms::{Domain, Expr, Mono, PiecewiseMap, Segment};
use crate::{Error, Result};

pub const FIXTURE_IDS: [&str; 8] = ["ex2_4", "cex2_6", "ex2_9", "ex2_10", "sec3", "sec4_1", "sec4_2", "remark_nn1"];

/// Profile-search tolerance for interval fixtures.
pub const PROFILE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: String,
    pub pass: bool,
    /// Where the expected value comes from.
    pub source: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub id: String,
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

struct Builder {
    id: String,
    title: String,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Builder {
    fn new(id: impl Into<String>, title: &str) -> Self {
        Builder { id: id.into(), title: title.to_string(), checks: Vec::new(), notes: Vec::new() }
    }

    fn push(&mut self, name: &str, value: f64, expected: String, pass: bool, source: &str) {
        self.checks.push(Check { name: name.to_string(), value, expected, pass, source: source.to_string() });
    }

    fn approx(&mut self, name: &str, value: f64, target: f64, tol: f64, source: &str) {
        let pass = (value - target).abs() <= tol;
        self.push(name, value, format!("{} ± {tol:e}", fmt12(target)), pass, source);
    }

    fn exact(&mut self, name: &str, value: f64, target: f64, source: &str) {
        self.push(name, value, format!("{} exactly", fmt12(target)), value == target, source);
    }

    fn within(&mut self, name: &str, value: f64, lo: f64, hi: f64, source: &str) {
        self.push(name, value, format!("in [{}, {}]", fmt12(lo), fmt12(hi)), (lo..=hi).contains(&value), source);
    }

    fn holds(&mut self, name: &str, r: &BoundReport, expect: bool, source: &str) {
        let expected = if expect { "holds" } else { "violated" };
        self.push(name, r.slack.to_f64(), format!("{expected} (value is the slack)"), r.holds == expect, source);
    }

    fn finish(self) -> FixtureReport {
        let pass = self.checks.iter().all(|c| c.pass);
        FixtureReport { id: self.id, title: self.title, checks: self.checks, notes: self.notes, pass }
    }
}

/// Twelve significant digits.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.*e}", 11, x);
    let v: f64 = s.parse().expect("formatted float parses");
    let mag = v.abs().log10().floor();
    if (-5.0..15.0).contains(&mag) {
        let decimals = (11.0 - mag).max(0.0) as usize;
        let t = format!("{v:.decimals$}");
        if t.contains('.') {
            t.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            t
        }
    } else {
        s
    }
}

fn identity_on(lo: f64, hi: f64, domain: Domain) -> Result<PiecewiseMap> {
    PiecewiseMap::affine_on(0.0, 1.0, lo, hi, domain)
}

fn lebesgue_identity(hi: f64) -> Result<Instance> {
    Instance::interval(IntervalMeasure::Lebesgue, 0.0, hi, identity_on(0.0, hi, Domain::Nonneg)?)
}

fn profile_bound(inst: Instance, h: PiecewiseMap) -> BoundInstance {
    let mut bi = BoundInstance::new(inst, h);
    bi.profile_tol = PROFILE_TOL;
    bi
}

fn sugeno(inst: &Instance, chain: &[&PiecewiseMap]) -> Result<f64> {
    Ok(integrate(&BinaryOpSpec::min(), inst, chain, PROFILE_TOL)?.value.to_f64())
}

fn shilkret(inst: &Instance, chain: &[&PiecewiseMap]) -> Result<f64> {
    Ok(integrate(&BinaryOpSpec::product(), inst, chain, PROFILE_TOL)?.value.to_f64())
}

/// Counting measure on five points, `f(i) = i`, `H(x) = x²/3`.
pub fn ex2_4_instance() -> Result<BoundInstance> {
    let space = FiniteSpace::new(5)?;
    let f = (1..=5).map(|i| ExtReal::new(i as f64)).collect();
    let inst = Instance::discrete(DiscreteMeasure::counting(space), space.full(), f)?;
    Ok(BoundInstance::new(inst, PiecewiseMap::power(1.0 / 3.0, 2.0)?))
}

fn ex2_4() -> Result<FixtureReport> {
    let mut b = Builder::new("ex2_4", "counting measure, f = x, H(x) = x²/3");
    let bi = ex2_4_instance()?;
    let src = "ex2_4: max over i of i ∧ (6 − i)";
    b.exact("sugeno(f)", sugeno(&bi.instance, &[])?, 3.0, src);
    b.exact("sugeno(H(f))", sugeno(&bi.instance, &[&bi.h])?, 3.0, src);
    let flo = check_bound(&bi, BoundId::Flo, 0.0)?;
    b.exact("flo slack", flo.slack.to_f64(), 0.0, "ex2_4: the monotone lower bound is attained by a nonconstant f");
    Ok(b.finish())
}

fn cex2_6() -> Result<FixtureReport> {
    let mut b = Builder::new("cex2_6", "Lebesgue measure on [0,5], f = x, φ(x) = (x − 0.5)²");
    let phi = PiecewiseMap::quadratic_on(0.25, -1.0, 1.0, 0.0, f64::INFINITY, Domain::Nonneg)?;
    let bi = profile_bound(lebesgue_identity(5.0)?, phi);
    let src = "cex2_6: level sets of φ(f) have measure 4.5 − √t above t = 1/4";
    b.exact("sugeno(f)", sugeno(&bi.instance, &[])?, 2.5, "cex2_6: level sets [t, 5]");
    b.approx("sugeno(φ(f))", sugeno(&bi.instance, &[&bi.h])?, (10.0 - 19f64.sqrt()) / 2.0, 1e-9, src);
    let jensen = check_bound(&bi, BoundId::ConvexJensen, 1e-9)?;
    b.exact("φ(p)", jensen.rhs.to_f64(), 4.0, "cex2_6: φ(2.5) = 4");
    b.holds("φ(p) ≤ sugeno(φ(f))", &jensen, false, "cex2_6: the convex Jensen claim fails");
    let convex = check_bound(&bi, BoundId::Convex, 1e-9)?;
    b.exact("convex bound rhs", convex.rhs.to_f64(), 2.5, "cex2_6: φ(p) ∧ p = 2.5");
    b.holds("convex bound", &convex, true, "cex2_6: the corrected bound holds");
    Ok(b.finish())
}

/// `μ = λ^q` on `[0,1]`, `f(x) = x^q`, `H(x) = x^{1/q}`.
pub fn ex2_9_instance(q: f64) -> Result<BoundInstance> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidValue(format!("q = {q} must be positive")));
    }
    let f = PiecewiseMap::power(1.0, q)?.restrict(0.0, 1.0, Domain::Nonneg)?;
    let inst = Instance::interval(IntervalMeasure::Power { q }, 0.0, 1.0, f)?;
    Ok(profile_bound(inst, PiecewiseMap::power(1.0, 1.0 / q)?))
}

fn ex2_9(qs: &[f64]) -> Result<FixtureReport> {
    let title = format!("μ = λ^q on [0,1], f = x^q, H = x^(1/q), q ∈ {qs:?}");
    let mut b = Builder::new("ex2_9", &title);
    for &q in qs {
        let bi = ex2_9_instance(q)?;
        let src = format!("ex2_9 (q = {q})");
        b.approx(&format!("q={q}: sugeno(f)"), sugeno(&bi.instance, &[])?, 0.5f64.powf(q), 1e-9, &src);
        let expected = (1.0 / q) * (q / (1.0 + q)).powf(q + 1.0);
        b.approx(&format!("q={q}: shilkret(H(f))"), shilkret(&bi.instance, &[&bi.h])?, expected, 1e-9, &src);
        let pp1 = check_bound(&bi, BoundId::Shilkret, 1e-9)?;
        b.approx(&format!("q={q}: shilkret bound rhs"), pp1.rhs.to_f64(), 0.5f64.powf(q + 1.0), 1e-9, &src);
        b.holds(&format!("q={q}: shilkret bound"), &pp1, true, &src);
    }
    Ok(b.finish())
}

fn ex2_10() -> Result<FixtureReport> {
    let mut b = Builder::new("ex2_10", "shilkret(f) ≥ sugeno(f)² from the shilkret bound with H(x) = x");
    let id = PiecewiseMap::identity(Domain::Nonneg);
    let discrete = BoundInstance { h: id.clone(), ..ex2_4_instance()? };
    let interval = profile_bound(lebesgue_identity(5.0)?, id);
    for (label, bi) in [("counting, f = x", discrete), ("Lebesgue on [0,5], f = x", interval)] {
        let su = sugeno(&bi.instance, &[])?;
        let sh = shilkret(&bi.instance, &[])?;
        let src = "ex2_10: the product and min integrals of a linear profile";
        b.approx(&format!("{label}: shilkret(f) − sugeno(f)²"), sh - su * su, 0.0, 1e-9, src);
        let r = check_bound(&bi, BoundId::Shilkret, 1e-9)?;
        b.holds(&format!("{label}: shilkret bound"), &r, true, src);
    }
    b.notes.push("equality holds for a non-piecewise-constant f under the product".into());
    Ok(b.finish())
}

fn sec3() -> Result<FixtureReport> {
    let mut b = Builder::new("sec3", "Lebesgue measure on [0,5], f = x, H(x) = √x, support-line bound over c");
    let bi = profile_bound(lebesgue_identity(5.0)?, PiecewiseMap::power(1.0, 0.5)?);
    let exact = (-1.0 + 21f64.sqrt()) / 2.0;
    let value = sugeno(&bi.instance, &[&bi.h])?;
    b.approx("sugeno(√f)", value, exact, 1e-9, "sec3: the fixed point of t = 5 − t²");
    let r = check_bound(&bi, BoundId::Tw4, 1e-9)?;
    b.within("min over c of the bound", r.rhs.to_f64(), value, 1.8020, "sec3: g(−2.5) ≈ 1.8019");
    let c = r.quantities.get("c").map(|v| v.to_f64()).unwrap_or(f64::NAN);
    b.within("minimizing c", c, -2.55, -2.45, "sec3: the infimum is at c = −2.5");
    b.holds("support-line bound", &r, true, "sec3");
    Ok(b.finish())
}

/// The three-point measure with `f = (−1, 0.3, 1)` and `H(x) = x³`.
pub fn sec4_1_instance(star: MixedOpSpec) -> Result<BoundInstance> {
    let vals = [
        (vec![0], 0.1),
        (vec![1], 0.25),
        (vec![2], 0.2),
        (vec![0, 1], 0.4),
        (vec![0, 2], 0.3),
        (vec![1, 2], 0.6),
        (vec![0, 1, 2], 1.0),
    ];
    let space = FiniteSpace::new(3)?;
    let m = DiscreteMeasure::from_values(
        space,
        vals.into_iter().map(|(k, v)| (Subset::from_indices(k), ExtReal::new(v))),
        StorageMode::Strict,
    )?;
    let f = [-1.0, 0.3, 1.0].map(SignedExtReal::new).to_vec();
    let mut bi = BoundInstance::new(Instance::signed(m, space.full(), f)?, PiecewiseMap::odd_power(1.0, 3)?);
    bi.star = star;
    Ok(bi)
}

fn sec4_1() -> Result<FixtureReport> {
    let mut b = Builder::new("sec4_1", "three-point measure, f = (−1, 0.3, 1), H(x) = x³");
    let src = "sec4_1";
    for (star, sym, literal) in [(MixedOpSpec::plus(), 0.1, 0.299), (MixedOpSpec::ovee(), 0.2, 0.3)] {
        let name = star.name().to_string();
        let bi = sec4_1_instance(star.clone())?;
        let parts = symmetric_integral(&star, &bi.instance, None, PROFILE_TOL)?;
        let full = symmetric_integral(&star, &bi.instance, Some(&bi.h), PROFILE_TOL)?;
        if name == "plus" {
            b.exact("p1", parts.positive.value.to_f64(), 0.3, src);
            b.exact("p2", parts.negative.value.to_f64(), 0.1, src);
            b.exact("sugeno(H1(f+))", full.positive.value.to_f64(), 0.2, src);
            b.exact("sugeno(H2(f-))", full.negative.value.to_f64(), 0.1, src);
        }
        b.approx(&format!("symmetric integral, ⋆ = {name}"), full.value.to_f64(), sym, 1e-15, src);
        let r = check_bound(&bi, BoundId::Signed001, 1e-9)?;
        b.approx(&format!("signed bound rhs, ⋆ = {name}"), r.rhs.to_f64(), literal, 1e-12, "sec4_1: evaluated from the formula");
        b.holds(&format!("signed bound, ⋆ = {name}"), &r, true, src);
    }
    b.notes.push(
        "the worked example displays p1 ⋆ (−p2) (0.2 for +, 0.3 for ⊻) as the right-hand side; \
         the formula [(H(p1) ∨ p1) ∧ μ(A)] ⋆ [H(−p2) ∨ (−p2)] gives 0.299 for + and 0.3 for ⊻. \
         Both dominate the integrals (0.1 and 0.2)."
            .into(),
    );
    Ok(b.finish())
}

/// `μ = √λ` on `A = [−3, 1]`, `f(x) = x`, `H(x) = x` for `x ≥ 0` and `2x` below.
pub fn sec4_2_instance(star: MixedOpSpec) -> Result<BoundInstance> {
    let f = identity_on(-3.0, 1.0, Domain::Real)?;
    let inst = Instance::interval(IntervalMeasure::Power { q: 0.5 }, -3.0, 1.0, f)?;
    let h = PiecewiseMap::new(
        vec![
            Segment::new(f64::NEG_INFINITY, 0.0, Expr::Affine { a: 0.0, b: 2.0 }, Mono::Inc),
            Segment::new(0.0, f64::INFINITY, Expr::Affine { a: 0.0, b: 1.0 }, Mono::Inc),
        ],
        Domain::Real,
    )?;
    let mut bi = profile_bound(inst, h);
    bi.star = star;
    Ok(bi)
}

fn sec4_2() -> Result<FixtureReport> {
    let mut b = Builder::new("sec4_2", "μ = √λ on [−3,1], f = x, H(x) = x on x ≥ 0 and 2x on x < 0");
    let src = "sec4_2: the level sets are [t, 1] and [−3, −t]";
    let (r5, r13) = (5f64.sqrt(), 13f64.sqrt());
    let bi = sec4_2_instance(MixedOpSpec::ovee())?;
    let parts = symmetric_integral(&bi.star, &bi.instance, None, PROFILE_TOL)?;
    let full = symmetric_integral(&bi.star, &bi.instance, Some(&bi.h), PROFILE_TOL)?;
    b.approx("p1", parts.positive.value.to_f64(), (r5 - 1.0) / 2.0, 1e-9, src);
    b.approx("p2", parts.negative.value.to_f64(), (r13 - 1.0) / 2.0, 1e-9, src);
    b.approx("sugeno(H1(f+))", full.positive.value.to_f64(), (r5 - 1.0) / 2.0, 1e-9, src);
    b.approx("sugeno(H2(f-))", full.negative.value.to_f64(), 1.5, 1e-9, src);
    let r = check_bound(&bi, BoundId::Signed001, 1e-9)?;
    b.approx("signed bound rhs, ⋆ = ovee", r.rhs.to_f64(), (1.0 - r13) / 2.0, 1e-9, src);
    b.approx("symmetric integral, ⋆ = ovee", r.lhs.to_f64(), -1.5, 1e-9, src);
    b.holds("signed bound, ⋆ = ovee", &r, true, src);
    let plus = check_bound(&sec4_2_instance(MixedOpSpec::plus())?, BoundId::Signed001, 1e-9)?;
    b.approx("symmetric integral, ⋆ = plus", plus.lhs.to_f64(), (r5 - 4.0) / 2.0, 1e-9, src);
    b.holds("signed bound, ⋆ = plus", &plus, true, src);
    Ok(b.finish())
}

fn remark_nn1() -> Result<FixtureReport> {
    let mut b = Builder::new("remark_nn1", "Lebesgue measure on [0,1], f = x/2, φ(x) = √x");
    let f = PiecewiseMap::affine_on(0.0, 0.5, 0.0, 1.0, Domain::Nonneg)?;
    let inst = Instance::interval(IntervalMeasure::Lebesgue, 0.0, 1.0, f)?;
    let bi = profile_bound(inst, PiecewiseMap::power(1.0, 0.5)?);
    let r = check_bound(&bi, BoundId::Nn1, 1e-9)?;
    let src = "remark_nn1: p = 1/3, m = √3/2";
    b.approx("p", r.quantities["p"].to_f64(), 1.0 / 3.0, 1e-9, src);
    b.approx("sugeno(φ(f))", r.lhs.to_f64(), 0.5, 1e-9, src);
    b.within("claimed upper bound", r.rhs.to_f64(), 0.38, 0.40, src);
    b.holds("claimed upper bound", &r, false, "remark_nn1: the claim is refuted");
    Ok(b.finish())
}

/// Runs one fixture. `q` selects the exponent of `ex2_9` (default: 0.5, 1 and 2).
pub fn run_fixture(id: &str, q: Option<f64>) -> Result<FixtureReport> {
    match id {
        "ex2_4" => ex2_4(),
        "cex2_6" => cex2_6(),
        "ex2_9" => match q {
            Some(q) => ex2_9(&[q]),
            None => ex2_9(&[0.5, 1.0, 2.0]),
        },
        "ex2_10" => ex2_10(),
        "sec3" => sec3(),
        "sec4_1" => sec4_1(),
        "sec4_2" => sec4_2(),
        "remark_nn1" => remark_nn1(),
        other => Err(Error::Parse(format!("unknown fixture {other:?}; known: {}", FIXTURE_IDS.join(", ")))),
    }
}
