//! Randomized checking of the bounds on small discrete instances, with
//! shrinking of any violation found.
//!
//! Each trial draws, for every requested bound, an instance shaped for that
//! bound (measure kind, transform family, operations). Draws whose
//! hypotheses fail are rejected and redrawn up to [`RESAMPLES`] times; after
//! that the bound is skipped for the trial.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::binops::{semicopula, tnorm, BinaryOpSpec, MixedOpSpec};
use crate::bounds::{check_bound, BoundId, BoundInstance, BoundReport, Hypothesis};
use crate::extreal::SignedExtReal;
use crate::instance::InstanceFile;
use crate::measure::{DiscreteMeasure, Subset};
use crate::profile::Instance;
use crate::verify::generate::{
    normalize, random_function, random_h, random_measure, random_signed_function, random_subset, HFamily, HShape,
    MeasureKind,
};
use crate::{Error, Result};

pub const RESAMPLES: usize = 100;
pub const QUANTUM: f64 = 1.0 / 64.0;
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive range of ground-set sizes.
    pub n_range: (usize, usize),
    /// Overrides the per-bound measure kind.
    pub kind: Option<MeasureKind>,
    pub bounds: Vec<BoundId>,
    pub tol: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            trials: 1000,
            n_range: (2, 6),
            kind: None,
            bounds: BoundId::ALL.into_iter().filter(|b| !b.is_refuted()).collect(),
            tol: 1e-9,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidValue("trials must be at least 1".into()));
        }
        let (lo, hi) = self.n_range;
        if lo == 0 || lo > hi || hi > 12 {
            return Err(Error::InvalidValue(format!("n range [{lo}, {hi}] must lie within [1, 12]")));
        }
        if self.bounds.is_empty() {
            return Err(Error::InvalidValue("no bounds selected".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidValue(format!("tolerance {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub bound: BoundId,
    pub trial: usize,
    pub instance: InstanceFile,
    pub lhs: SignedExtReal,
    pub rhs: SignedExtReal,
    pub slack: SignedExtReal,
    pub hypotheses: Vec<Hypothesis>,
    pub shrink_steps: usize,
    /// SHA-256 of the bound name and the serialized instance.
    pub digest: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundStats {
    pub evaluated: usize,
    pub skipped: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub stats: BTreeMap<BoundId, BoundStats>,
    /// Sorted by digest.
    pub violations: Vec<Counterexample>,
    /// SHA-256 over the statistics and the violation digests.
    pub digest: String,
}

impl FuzzReport {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }
}

fn kind_for(bound: BoundId) -> MeasureKind {
    use BoundId::*;
    match bound {
        Tw1ii | Ss3 => MeasureKind::WeaklySub,
        Tw2ii | Ss4 | Co2 => MeasureKind::WeaklySuper,
        Noo1 | MixedUpper => MeasureKind::Subadditive,
        In3a => MeasureKind::Superadditive,
        _ => MeasureKind::General,
    }
}

fn family_for<R: Rng>(rng: &mut R, bound: BoundId) -> HFamily {
    use BoundId::*;
    match bound {
        Flo | Shilkret => HFamily::Nondecreasing,
        Qint => HFamily::Quasiconvex,
        Seminormed => HFamily::Nondecreasing,
        Co2 | In3a => HFamily::Quasiconcave,
        In99 | L1 | Comonotone | Tw4 | Nn1 => HFamily::Concave,
        In80 => HFamily::SmoothConcave,
        Signed001 => HFamily::SignedNondecreasing,
        MixedLower | MixedUpper => HFamily::VShaped,
        Convex | ConvexJensen => HFamily::Convex,
        _ => *HFamily::NONNEG.choose(rng).expect("nonempty"),
    }
}

fn unit_scale(bound: BoundId) -> bool {
    matches!(bound, BoundId::Qint | BoundId::Seminormed | BoundId::Comonotone)
}

/// One draw of an instance shaped for `bound`.
pub fn draw<R: Rng>(rng: &mut R, cfg: &FuzzConfig, bound: BoundId) -> Result<BoundInstance> {
    let n = rng.gen_range(cfg.n_range.0..=cfg.n_range.1);
    let a = random_subset(rng, n);
    let kind = cfg.kind.unwrap_or_else(|| kind_for(bound));
    let unit = unit_scale(bound);
    let mut measure = random_measure(rng, n, kind, a)?;
    if unit {
        measure = normalize(&measure);
    }
    let hi = if unit { 1.0 } else { *[1.0, 2.0, 5.0].choose(rng).expect("nonempty") };
    let family = family_for(rng, bound);
    let continuous = matches!(bound, BoundId::Noo1 | BoundId::In3a | BoundId::Co2);
    let jumps = !continuous && rng.gen_bool(0.5);
    let unit_h = unit || rng.gen_bool(0.2);
    let h = random_h(rng, HShape { family, hi, jumps, unit: unit_h })?;
    let inst = if bound.is_signed() || matches!(bound, BoundId::MixedLower | BoundId::MixedUpper) {
        Instance::signed(measure, a, random_signed_function(rng, n, hi))?
    } else {
        Instance::discrete(measure, a, random_function(rng, n, hi))?
    };
    let mut bi = BoundInstance::new(inst, h);
    bi.op = if rng.gen_bool(0.5) { BinaryOpSpec::min() } else { BinaryOpSpec::product() };
    match bound {
        BoundId::Qint => bi.conj = Some(tnorm(["min", "product", "lukasiewicz"].choose(rng).expect("nonempty"))?),
        BoundId::Seminormed => {
            bi.conj = Some(semicopula(["min", "product", "prodmax", "lukasiewicz"].choose(rng).expect("nonempty"))?)
        }
        BoundId::Signed001 => bi.star = if rng.gen_bool(0.5) { MixedOpSpec::plus() } else { MixedOpSpec::ovee() },
        _ => {}
    }
    Ok(bi)
}

fn is_violation(r: &BoundReport) -> bool {
    r.hypotheses_hold && !r.holds
}

fn still_fails(bi: &BoundInstance, bound: BoundId, tol: f64) -> Option<BoundReport> {
    check_bound(bi, bound, tol).ok().filter(is_violation)
}

/// Drops bit `i` and moves the higher bits down.
fn compress(s: Subset, i: usize) -> Subset {
    let bits = s.bits();
    let low = bits & ((1u32 << i) - 1);
    let high = (bits >> (i + 1)) << i;
    Subset::from_bits(low | high)
}

fn quantize(x: f64) -> f64 {
    (x / QUANTUM).round() * QUANTUM
}

fn discrete_parts(bi: &BoundInstance) -> Option<(&DiscreteMeasure, Subset, Vec<SignedExtReal>)> {
    match &bi.instance {
        Instance::Discrete { measure, a, f } => Some((measure, *a, f.clone())),
        Instance::Interval { .. } => None,
    }
}

fn rebuild(bi: &BoundInstance, measure: DiscreteMeasure, a: Subset, f: Vec<SignedExtReal>) -> Option<BoundInstance> {
    if a.is_empty() {
        return None;
    }
    let inst = Instance::signed(measure, a, f).ok()?;
    Some(BoundInstance { instance: inst, ..bi.clone() })
}

/// Candidate one-step simplifications of a discrete instance.
fn shrink_candidates(bi: &BoundInstance) -> Vec<BoundInstance> {
    let Some((measure, a, f)) = discrete_parts(bi) else { return Vec::new() };
    let n = measure.space().n();
    let mut out = Vec::new();
    if n > 1 {
        for i in 0..n {
            let Ok(m) = measure.remove_element(i) else { continue };
            let mut g = f.clone();
            g.remove(i);
            out.extend(rebuild(bi, m, compress(a, i), g));
        }
    }
    for i in 0..n {
        if f[i] != SignedExtReal::new(0.0) {
            let mut g = f.clone();
            g[i] = SignedExtReal::new(0.0);
            out.extend(rebuild(bi, measure.clone(), a, g));
        }
    }
    let qf: Vec<SignedExtReal> =
        f.iter().map(|v| if v.is_finite() { SignedExtReal::new(quantize(v.to_f64())) } else { *v }).collect();
    if qf != f {
        out.extend(rebuild(bi, measure.clone(), a, qf));
    }
    let qm = measure.quantize(QUANTUM);
    if &qm != measure {
        out.extend(rebuild(bi, qm, a, f));
    }
    out
}

/// Greedy shrinking: the first candidate that still violates the bound under
/// its hypotheses replaces the instance, until none does.
pub fn shrink(bi: BoundInstance, bound: BoundId, tol: f64) -> (BoundInstance, BoundReport, usize) {
    let mut report = check_bound(&bi, bound, tol).expect("shrinking starts from an evaluated instance");
    let mut current = bi;
    let mut steps = 0;
    'outer: loop {
        for cand in shrink_candidates(&current) {
            if let Some(r) = still_fails(&cand, bound, tol) {
                current = cand;
                report = r;
                steps += 1;
                continue 'outer;
            }
        }
        break;
    }
    (current, report, steps)
}

fn counterexample(bi: BoundInstance, bound: BoundId, trial: usize, tol: f64) -> Counterexample {
    let (small, r, steps) = shrink(bi, bound, tol);
    let instance = InstanceFile::from_bound_instance(&small);
    let mut hasher = Sha256::new();
    hasher.update(bound.name().as_bytes());
    hasher.update(instance.to_json().as_bytes());
    Counterexample {
        bound,
        trial,
        instance,
        lhs: r.lhs,
        rhs: r.rhs,
        slack: r.slack,
        hypotheses: r.hypotheses,
        shrink_steps: steps,
        digest: hex::encode(hasher.finalize()),
    }
}

enum Outcome {
    Held,
    Skipped,
    Violated(Box<Counterexample>),
}

fn run_bound(rng: &mut ChaCha8Rng, cfg: &FuzzConfig, bound: BoundId, trial: usize) -> Outcome {
    for _ in 0..RESAMPLES {
        let Ok(bi) = draw(rng, cfg, bound) else { continue };
        let Ok(r) = check_bound(&bi, bound, cfg.tol) else { continue };
        if !r.hypotheses_hold {
            continue;
        }
        return if r.holds { Outcome::Held } else { Outcome::Violated(Box::new(counterexample(bi, bound, trial, cfg.tol))) };
    }
    Outcome::Skipped
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(SEED_STRIDE))
}

/// Runs the configured trials in parallel. The report does not depend on
/// the thread count.
pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    cfg.validate()?;
    let results: Vec<Vec<(BoundId, Outcome)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            cfg.bounds.iter().map(|&b| (b, run_bound(&mut rng, cfg, b, trial))).collect()
        })
        .collect();

    let mut stats: BTreeMap<BoundId, BoundStats> = cfg.bounds.iter().map(|&b| (b, BoundStats::default())).collect();
    let mut violations = Vec::new();
    for (bound, outcome) in results.into_iter().flatten() {
        let s = stats.get_mut(&bound).expect("bound is configured");
        match outcome {
            Outcome::Held => s.evaluated += 1,
            Outcome::Skipped => s.skipped += 1,
            Outcome::Violated(cex) => {
                s.evaluated += 1;
                s.violations += 1;
                violations.push(*cex);
            }
        }
    }
    violations.sort_by(|a, b| a.digest.cmp(&b.digest).then(a.trial.cmp(&b.trial)));

    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(&stats)?);
    for v in &violations {
        hasher.update(v.digest.as_bytes());
    }
    Ok(FuzzReport { config: cfg.clone(), stats, violations, digest: hex::encode(hasher.finalize()) })
}
