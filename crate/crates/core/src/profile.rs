//! Level-set profiles `t ↦ μ(A ∩ {g ≥ t})` and the instances that produce them.

use std::fmt;
use std::sync::Arc;

use crate::extreal::{ExtReal, SignedExtReal};
use crate::interval_set::IntervalSet;
use crate::measure::{DiscreteMeasure, IntervalMeasure, Subset};
use crate::transforms::PiecewiseMap;
use crate::{Error, Result};

pub type ProfileFn = Arc<dyn Fn(f64) -> ExtReal + Send + Sync>;

/// A nonincreasing survival function with a threshold `T` past which it is 0.
#[derive(Clone)]
pub struct SurvivalProfile {
    evaluator: ProfileFn,
    pub domain_hint: f64,
    /// Thresholds where the profile may jump; seeded into the search grid.
    pub breakpoints: Vec<f64>,
    /// Lipschitz modulus of the profile, when known.
    pub lipschitz_hint: Option<f64>,
}

impl fmt::Debug for SurvivalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurvivalProfile")
            .field("domain_hint", &self.domain_hint)
            .field("breakpoints", &self.breakpoints)
            .field("lipschitz_hint", &self.lipschitz_hint)
            .finish()
    }
}

impl SurvivalProfile {
    pub fn new<F>(domain_hint: f64, evaluator: F) -> Self
    where
        F: Fn(f64) -> ExtReal + Send + Sync + 'static,
    {
        SurvivalProfile { evaluator: Arc::new(evaluator), domain_hint, breakpoints: Vec::new(), lipschitz_hint: None }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz_hint = Some(l);
        self
    }

    /// `G(t)`; zero past the threshold.
    pub fn eval(&self, t: f64) -> ExtReal {
        if t > self.domain_hint {
            ExtReal::ZERO
        } else {
            (self.evaluator)(t)
        }
    }
}

/// A measure, a set `A` and a function on it.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    /// A finite space; `f` may be signed, nonnegative contexts require `f ≥ 0` on `A`.
    Discrete { measure: DiscreteMeasure, a: Subset, f: Vec<SignedExtReal> },
    /// `A = [lo, hi]` on the real line with a closed-form measure.
    Interval { measure: IntervalMeasure, lo: f64, hi: f64, f: PiecewiseMap },
}

impl Instance {
    pub fn discrete(measure: DiscreteMeasure, a: Subset, f: Vec<ExtReal>) -> Result<Self> {
        Instance::signed(measure, a, f.into_iter().map(ExtReal::to_signed).collect())
    }

    pub fn signed(measure: DiscreteMeasure, a: Subset, f: Vec<SignedExtReal>) -> Result<Self> {
        measure.space().check(a)?;
        if f.len() != measure.space().n() {
            return Err(Error::InvalidValue(format!(
                "function has {} values on a space of {} elements",
                f.len(),
                measure.space().n()
            )));
        }
        Ok(Instance::Discrete { measure, a, f })
    }

    pub fn interval(measure: IntervalMeasure, lo: f64, hi: f64, f: PiecewiseMap) -> Result<Self> {
        measure.validate()?;
        if !(lo <= hi) {
            return Err(Error::InvalidValue(format!("A = [{lo}, {hi}]")));
        }
        if !f.in_domain(lo) || !f.in_domain(hi) {
            return Err(Error::Domain(format!("A = [{lo}, {hi}] is not inside the domain of f")));
        }
        Ok(Instance::Interval { measure, lo, hi, f })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Instance::Discrete { .. })
    }

    /// `μ(A)`.
    pub fn mu_a(&self) -> ExtReal {
        match self {
            Instance::Discrete { measure, a, .. } => measure.value(*a),
            Instance::Interval { measure, lo, hi, .. } => measure.eval(&IntervalSet::interval(*lo, *hi)),
        }
    }

    /// The values of `f`, which must be nonnegative on `A`; entries outside
    /// `A` are clamped at 0.
    pub fn nonneg_values(&self) -> Result<Vec<ExtReal>> {
        let Instance::Discrete { a, f, .. } = self else { return Err(Error::NotEnumerable) };
        f.iter()
            .enumerate()
            .map(|(i, v)| match v.to_nonneg() {
                Some(x) => Ok(x),
                None if !a.contains(i) => Ok(ExtReal::ZERO),
                None => Err(Error::Domain(format!("f({i}) = {v} is negative"))),
            })
            .collect()
    }

    /// Values of `chain_k(…chain_1(f))` on a finite space, with negative
    /// results replaced by 0 (the integrals only see the positive part).
    pub fn transformed_values(&self, chain: &[&PiecewiseMap]) -> Result<Vec<ExtReal>> {
        let Instance::Discrete { a, f, .. } = self else { return Err(Error::NotEnumerable) };
        f.iter()
            .enumerate()
            .map(|(i, &v)| {
                if !a.contains(i) {
                    return Ok(ExtReal::ZERO);
                }
                let mut x = v.to_f64();
                for h in chain {
                    x = h.eval(x)?;
                }
                Ok(ExtReal::clamp_nonneg(x).unwrap_or(ExtReal::ZERO))
            })
            .collect()
    }

    /// Upper end of the range of `chain(f)` on `A` (an upper bound, exact for
    /// monotone chains).
    pub fn range_hull(&self, chain: &[&PiecewiseMap]) -> Result<(f64, f64)> {
        match self {
            Instance::Discrete { a, f, .. } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in a.iter() {
                    let mut x = f[i].to_f64();
                    for h in chain {
                        x = h.eval(x)?;
                    }
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
                Ok((lo, hi))
            }
            Instance::Interval { lo, hi, f, .. } => {
                let e = f.closed_extrema(*lo, *hi)?;
                let (mut a, mut b) = (e.inf, e.sup);
                for h in chain {
                    let e = h.closed_extrema(a.max(h.lo()), b.min(h.hi()))?;
                    a = e.inf;
                    b = e.sup;
                }
                Ok((a, b))
            }
        }
    }

    /// The profile of `chain(f)` on an interval instance.
    pub fn profile(&self, chain: &[&PiecewiseMap]) -> Result<SurvivalProfile> {
        let Instance::Interval { measure, lo, hi, f } = self else {
            return Err(Error::InvalidValue("profiles are built from interval instances".into()));
        };
        let (_, top) = self.range_hull(chain)?;
        let maps: Vec<PiecewiseMap> = std::iter::once(f.clone()).chain(chain.iter().map(|h| (*h).clone())).collect();
        let a = IntervalSet::interval(*lo, *hi);
        let measure = *measure;
        let mu_a = measure.eval(&a);

        let mut breakpoints = Vec::new();
        let mut xs = vec![*lo, *hi];
        xs.extend(f.breakpoints().into_iter().filter(|x| x > lo && x < hi));
        for x in xs {
            let mut v = x;
            let mut ok = true;
            for h in &maps {
                match h.eval(v) {
                    Ok(y) => v = y,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && v.is_finite() && v > 0.0 {
                breakpoints.push(v);
            }
        }
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();

        let a_set = a.clone();
        let profile = SurvivalProfile::new(top.max(0.0), move |t| {
            if t <= 0.0 {
                return mu_a;
            }
            let mut set = IntervalSet::interval(t, f64::INFINITY);
            for h in maps.iter().rev() {
                set = h.preimage(&set);
                if set.is_empty() {
                    return ExtReal::ZERO;
                }
            }
            measure.eval(&set.intersect(&a_set))
        });
        Ok(profile.with_breakpoints(breakpoints))
    }
}
