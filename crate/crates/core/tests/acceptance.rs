//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! with status 1 if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sugeno_bounds::binops::{BinaryOpSpec, MixedOpSpec};
use sugeno_bounds::bounds::{check_bound, BoundId, BoundInstance};
use sugeno_bounds::cli::fixtures::{ex2_4_instance, ex2_9_instance, run_fixture, sec4_1_instance, sec4_2_instance};
use sugeno_bounds::integrals::{generalized_integral, integrate};
use sugeno_bounds::measure::{DiscreteMeasure, FiniteSpace, IntervalMeasure, StorageMode, Subset};
use sugeno_bounds::profile::Instance;
use sugeno_bounds::symmetric::symmetric_integral;
use sugeno_bounds::transforms::{Domain, PiecewiseMap};
use sugeno_bounds::verify::fuzz::{fuzz, FuzzConfig};
use sugeno_bounds::verify::generate::{random_function, random_h, random_measure, random_subset, HFamily, HShape};
use sugeno_bounds::verify::predicates::{check_discrete, Predicate};
use sugeno_bounds::verify::witness::attainability_witness;
use sugeno_bounds::verify::{oracle_integral, MeasureKind};
use sugeno_bounds::{ExtReal, Result};

const SEED: u64 = 0x5eed_2024;

/// Failed sub-checks of one criterion, plus a summary of what was measured.
#[derive(Default)]
struct Criterion {
    failures: Vec<String>,
    summary: Vec<String>,
}

impl Criterion {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn exact(&mut self, name: &str, value: f64, target: f64) {
        self.expect(value == target, format!("{name} = {value:.15}, expected exactly {target}"));
    }

    fn close(&mut self, name: &str, value: f64, target: f64, tol: f64) {
        let ok = (value - target).abs() <= tol;
        self.expect(ok, format!("{name} = {value:.15}, expected {target:.15} within {tol:e}"));
    }

    fn note(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }
}

fn lebesgue_identity(hi: f64) -> Result<Instance> {
    Instance::interval(IntervalMeasure::Lebesgue, 0.0, hi, PiecewiseMap::affine_on(0.0, 1.0, 0.0, hi, Domain::Nonneg)?)
}

fn profile_instance(inst: Instance, h: PiecewiseMap, tol: f64) -> BoundInstance {
    let mut bi = BoundInstance::new(inst, h);
    bi.profile_tol = tol;
    bi
}

fn sugeno_value(inst: &Instance, chain: &[&PiecewiseMap], tol: f64) -> Result<f64> {
    Ok(integrate(&BinaryOpSpec::min(), inst, chain, tol)?.value.to_f64())
}

fn c1_example_2_4() -> Result<Criterion> {
    let mut c = Criterion::default();
    let start = Instant::now();
    let bi = ex2_4_instance()?;
    let su_f = sugeno_value(&bi.instance, &[], 1e-9)?;
    let su_hf = sugeno_value(&bi.instance, &[&bi.h], 1e-9)?;
    let flo = check_bound(&bi, BoundId::Flo, 0.0)?;
    let elapsed = start.elapsed();
    c.exact("sugeno(f)", su_f, 3.0);
    c.exact("sugeno(H(f))", su_hf, 3.0);
    c.exact("flo slack", flo.slack.to_f64(), 0.0);
    c.expect(elapsed < Duration::from_millis(10), format!("took {elapsed:?}"));
    c.note(format!("runtime {elapsed:?}"));
    Ok(c)
}

fn c2_counterexample_2_6() -> Result<Criterion> {
    let mut c = Criterion::default();
    let tol = 1e-10;
    let phi = PiecewiseMap::quadratic_on(0.25, -1.0, 1.0, 0.0, f64::INFINITY, Domain::Nonneg)?;
    let bi = profile_instance(lebesgue_identity(5.0)?, phi, tol);
    c.exact("sugeno(f)", sugeno_value(&bi.instance, &[], tol)?, 2.5);
    c.close("sugeno(φ(f))", sugeno_value(&bi.instance, &[&bi.h], tol)?, (10.0 - 19f64.sqrt()) / 2.0, 1e-9);
    let claim = check_bound(&bi, BoundId::ConvexJensen, 1e-9)?;
    c.exact("φ(p)", claim.rhs.to_f64(), 4.0);
    c.expect(!claim.holds, "the refuted claim φ(p) ≤ sugeno(φ(f)) was reported to hold");
    let in2a = check_bound(&bi, BoundId::Convex, 1e-9)?;
    c.exact("in2a rhs", in2a.rhs.to_f64(), 2.5);
    c.expect(in2a.holds, "in2a does not hold");
    Ok(c)
}

fn c3_support_line_example() -> Result<Criterion> {
    let mut c = Criterion::default();
    let bi = profile_instance(lebesgue_identity(5.0)?, PiecewiseMap::power(1.0, 0.5)?, 1e-10);
    let value = sugeno_value(&bi.instance, &[&bi.h], 1e-10)?;
    c.close("sugeno(√f)", value, (-1.0 + 21f64.sqrt()) / 2.0, 1e-9);
    let r = check_bound(&bi, BoundId::Tw4, 1e-9)?;
    let rhs = r.rhs.to_f64();
    c.expect(rhs <= 1.8020, format!("minimized bound {rhs} exceeds 1.8020"));
    c.expect(rhs >= value, format!("minimized bound {rhs} is below the integral {value}"));
    let cmin = r.quantities.get("c").map(|v| v.to_f64()).unwrap_or(f64::NAN);
    c.close("minimizing c", cmin, -2.5, 0.05);
    c.note(format!("bound {rhs:.6} at c = {cmin}"));
    Ok(c)
}

fn c4_example_2_9() -> Result<Criterion> {
    let mut c = Criterion::default();
    for q in [0.5, 1.0, 2.0] {
        let bi = ex2_9_instance(q)?;
        c.close(&format!("q={q} sugeno(f)"), sugeno_value(&bi.instance, &[], 1e-10)?, 0.5f64.powf(q), 1e-9);
        let shilkret = integrate(&BinaryOpSpec::product(), &bi.instance, &[&bi.h], 1e-10)?.value.to_f64();
        let expected = (1.0 / q) * (q / (1.0 + q)).powf(q + 1.0);
        c.close(&format!("q={q} shilkret(H(f))"), shilkret, expected, 1e-9);
        let pp1 = check_bound(&bi, BoundId::Shilkret, 1e-9)?;
        c.close(&format!("q={q} pp1 rhs"), pp1.rhs.to_f64(), 0.5f64.powf(q + 1.0), 1e-9);
        c.expect(pp1.holds, format!("q={q}: pp1 does not hold"));
    }
    Ok(c)
}

fn c5_signed_discrete() -> Result<Criterion> {
    let mut c = Criterion::default();
    for (star, sym) in [(MixedOpSpec::plus(), 0.1), (MixedOpSpec::ovee(), 0.2)] {
        let name = star.name().to_string();
        let bi = sec4_1_instance(star.clone())?;
        let parts = symmetric_integral(&star, &bi.instance, None, 1e-10)?;
        let full = symmetric_integral(&star, &bi.instance, Some(&bi.h), 1e-10)?;
        c.exact("p1", parts.positive.value.to_f64(), 0.3);
        c.exact("p2", parts.negative.value.to_f64(), 0.1);
        c.exact("sugeno(H1(f+))", full.positive.value.to_f64(), 0.2);
        c.exact("sugeno(H2(f-))", full.negative.value.to_f64(), 0.1);
        c.close(&format!("symmetric integral ({name})"), full.value.to_f64(), sym, 1e-15);
        let r = check_bound(&bi, BoundId::Signed001, 1e-9)?;
        c.expect(r.holds && r.hypotheses_hold, format!("001 fails for ⋆ = {name}"));
    }
    let report = run_fixture("sec4_1", None)?;
    c.expect(report.pass, "sec4_1 fixture fails");
    c.expect(
        report.notes.iter().any(|n| n.contains("0.299") && n.contains("0.2")),
        "the report does not flag the displayed right-hand side",
    );
    Ok(c)
}

fn c6_signed_interval() -> Result<Criterion> {
    let mut c = Criterion::default();
    let (r5, r13) = (5f64.sqrt(), 13f64.sqrt());
    let bi = sec4_2_instance(MixedOpSpec::ovee())?;
    let parts = symmetric_integral(&bi.star, &bi.instance, None, 1e-10)?;
    let full = symmetric_integral(&bi.star, &bi.instance, Some(&bi.h), 1e-10)?;
    c.close("p1", parts.positive.value.to_f64(), (r5 - 1.0) / 2.0, 1e-9);
    c.close("p2", parts.negative.value.to_f64(), (r13 - 1.0) / 2.0, 1e-9);
    c.close("sugeno(H2(f-))", full.negative.value.to_f64(), 1.5, 1e-9);
    let r = check_bound(&bi, BoundId::Signed001, 1e-9)?;
    c.close("001 rhs (ovee)", r.rhs.to_f64(), (1.0 - r13) / 2.0, 1e-9);
    c.expect(r.holds, "001 does not hold for ⋆ = ovee");
    Ok(c)
}

fn c7_nn1_refuted() -> Result<Criterion> {
    let mut c = Criterion::default();
    let f = PiecewiseMap::affine_on(0.0, 0.5, 0.0, 1.0, Domain::Nonneg)?;
    let inst = Instance::interval(IntervalMeasure::Lebesgue, 0.0, 1.0, f)?;
    let bi = profile_instance(inst, PiecewiseMap::power(1.0, 0.5)?, 1e-10);
    let r = check_bound(&bi, BoundId::Nn1, 1e-9)?;
    let rhs = r.rhs.to_f64();
    c.expect((0.38..=0.40).contains(&rhs), format!("nn1 rhs {rhs} outside [0.38, 0.40]"));
    c.close("nn1 lhs", r.lhs.to_f64(), 0.5, 1e-9);
    c.expect(!r.holds, "nn1 was reported to hold");
    c.note(format!("rhs {rhs:.6}"));
    Ok(c)
}

fn c8_property_suite() -> Result<Criterion> {
    let mut c = Criterion::default();
    let ids = "tw1i,tw1ii,flo,pp1,qint,seminormed,tw2i,tw2ii,co2,ss1,ss2,ss3,ss4,noo1,in3a,in99,l1,comonotone,in80,001,mixed_lower,mixed_upper";
    let bounds = ids.split(',').map(str::parse).collect::<Result<Vec<BoundId>>>()?;
    let cfg = FuzzConfig { seed: SEED, trials: 10_000, n_range: (1, 6), bounds, ..FuzzConfig::default() };
    let start = Instant::now();
    let report = fuzz(&cfg)?;
    let elapsed = start.elapsed();
    for (b, s) in &report.stats {
        c.expect(s.violations == 0, format!("{b}: {} violations", s.violations));
        c.expect(s.evaluated > 0, format!("{b}: never evaluated"));
    }
    if let Some(v) = report.violations.first() {
        c.expect(false, format!("first violation: {}", v.instance.to_json()));
    }
    c.expect(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"));
    let evaluated: usize = report.stats.values().map(|s| s.evaluated).sum();
    let skipped: usize = report.stats.values().map(|s| s.skipped).sum();
    c.note(format!("{evaluated} checks, {skipped} skipped, {elapsed:.1?}"));
    Ok(c)
}

fn c9_oracle_equivalence() -> Result<Criterion> {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for op in [BinaryOpSpec::min(), BinaryOpSpec::product()] {
        let mut mismatches = 0;
        for _ in 0..1000 {
            let n = rng.gen_range(1..=6);
            let a = random_subset(&mut rng, n);
            let m = random_measure(&mut rng, n, MeasureKind::Mixed, a)?;
            let hi = [1.0, 3.0, 10.0][rng.gen_range(0..3)];
            let f = random_function(&mut rng, n, hi);
            let engine = generalized_integral(&op, &m, a, &f)?.value;
            if engine != oracle_integral(&op, &m, a, &f) {
                mismatches += 1;
            }
        }
        c.expect(mismatches == 0, format!("{}: {mismatches} of 1000 differ", op.name()));
    }
    Ok(c)
}

fn witness_setup(bound: BoundId) -> (HFamily, MeasureKind) {
    use BoundId::*;
    match bound {
        Tw1i | Ss1 => (HFamily::Nondecreasing, MeasureKind::General),
        Tw1ii | Ss3 => (HFamily::Quasiconvex, MeasureKind::WeaklySub),
        Tw2i | Ss2 => (HFamily::Quasiconcave, MeasureKind::General),
        Tw2ii | Ss4 => (HFamily::Nonincreasing, MeasureKind::WeaklySuper),
        _ => (HFamily::SignedNondecreasing, MeasureKind::General),
    }
}

fn c10_attainability() -> Result<Criterion> {
    let mut c = Criterion::default();
    let bounds = [
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
    let mut counts = Vec::new();
    for bound in bounds {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ bound as u64);
        let (family, kind) = witness_setup(bound);
        let mut applicable = 0;
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let a = random_subset(&mut rng, n);
            let m: DiscreteMeasure = random_measure(&mut rng, n, kind, a)?;
            let hi = [1.0, 2.0, 5.0][rng.gen_range(0..3)];
            let jumps = rng.gen_bool(0.3);
            let h = random_h(&mut rng, HShape { family, hi, jumps, unit: false })?;
            let Ok(bi) = attainability_witness(bound, &m, a, &h) else { continue };
            let r = check_bound(&bi, bound, 0.0)?;
            if !r.hypotheses_hold {
                continue;
            }
            applicable += 1;
            let slack = r.slack.to_f64();
            c.expect(slack.abs() <= 1e-12, format!("{bound}: slack {slack:e} on {:?}", bi.instance));
        }
        c.expect(applicable >= 20, format!("{bound}: only {applicable} of 200 pairs meet the conditions"));
        counts.push(format!("{bound} {applicable}"));
    }
    c.note(format!("applicable pairs: {}", counts.join(", ")));
    Ok(c)
}

fn c11_predicates() -> Result<Criterion> {
    let mut c = Criterion::default();
    let space = FiniteSpace::new(3)?;
    let three_point = DiscreteMeasure::from_fn(space, |s| ExtReal::new([0.0, 0.5, 1.0, 2.0][s.len()]));
    let pair = Subset::from_indices([0, 1]);
    let weak = check_discrete(&three_point, Some(pair), Predicate::WeaklySubadditive)?;
    c.expect(weak.holds, "three-point measure is not weakly subadditive on {0,1}");
    let sub = check_discrete(&three_point, None, Predicate::Subadditive)?;
    c.expect(!sub.holds, "three-point measure is reported subadditive");

    let additive = DiscreteMeasure::additive(&[0.2, 0.5, 1.0, 0.25])?;
    let stored = DiscreteMeasure::from_values(
        additive.space(),
        additive.space().subsets().map(|s| (s, additive.value(s))),
        StorageMode::Strict,
    )?;
    for p in Predicate::ALL {
        let scope = p.is_weak().then(|| stored.space().full());
        c.expect(check_discrete(&stored, scope, p)?.holds, format!("additive measure fails {}", p.name()));
    }
    Ok(c)
}

type CriterionFn = fn() -> Result<Criterion>;

fn main() {
    let criteria: [(&str, CriterionFn); 11] = [
        ("ex2_4 values, flo slack 0, under 10 ms", c1_example_2_4),
        ("cex2_6 convex claim refuted, in2a holds", c2_counterexample_2_6),
        ("sec3 support-line bound minimized near c = -2.5", c3_support_line_example),
        ("ex2_9 sugeno, shilkret and pp1 for q in {0.5, 1, 2}", c4_example_2_9),
        ("sec4_1 signed parts, symmetric integrals, 001", c5_signed_discrete),
        ("sec4_2 signed interval example", c6_signed_interval),
        ("nn1 refutation reproduced", c7_nn1_refuted),
        ("10,000 fuzz trials, zero violations, under 60 s", c8_property_suite),
        ("engine equals oracle on 1000 instances per op", c9_oracle_equivalence),
        ("attainability witnesses reach |slack| <= 1e-12", c10_attainability),
        ("measure predicates on the three-point and additive measures", c11_predicates),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run);
        let (pass, lines) = match outcome {
            Ok(Ok(c)) => (c.failures.is_empty(), if c.failures.is_empty() { c.summary } else { c.failures }),
            Ok(Err(e)) => (false, vec![format!("error: {e}")]),
            Err(_) => (false, vec!["panicked".to_string()]),
        };
        if !pass {
            failed += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        let extra = if lines.is_empty() { String::new() } else { format!(" ({})", lines.join("; ")) };
        println!("{verdict} criterion {:>2}: {title}{extra}", i + 1);
    }
    println!("{} of {} acceptance criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
