//! Ground spaces, monotone measures and level-set evaluation.
//!
//! On a finite space every monotone measure is continuous from below and from
//! above (monotone set sequences are eventually constant), so hypotheses that
//! ask for a continuous measure hold for every [`DiscreteMeasure`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::extreal::ExtReal;
use crate::interval_set::IntervalSet;
use crate::{Error, Result};

/// Largest supported ground set; `2^24` subsets are still enumerable.
pub const MAX_ELEMENTS: usize = 24;

/// A subset of `{0, .., n-1}` as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0u32, |acc, i| acc | (1u32 << i)))
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Element indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// Every subset of `self`, including `∅` and `self`.
    pub fn submasks(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(Subset(cur))
        })
    }

    /// Comma-separated sorted element list, the key format of instance files.
    pub fn key(self) -> String {
        self.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_key(key: &str) -> Result<Self> {
        let key = key.trim();
        if key.is_empty() || key == "{}" {
            return Ok(Subset::EMPTY);
        }
        let key = key.trim_start_matches('{').trim_end_matches('}');
        let mut bits = 0u32;
        for part in key.split(',') {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad element {part:?} in subset key {key:?}")))?;
            if i >= MAX_ELEMENTS {
                return Err(Error::MalformedSubset { mask: 1u64 << i.min(63), n: MAX_ELEMENTS });
            }
            bits |= 1 << i;
        }
        Ok(Subset(bits))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSpace {
    n: usize,
}

impl FiniteSpace {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_ELEMENTS).contains(&n) {
            Ok(FiniteSpace { n })
        } else {
            Err(Error::SpaceSize(n))
        }
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn full(self) -> Subset {
        Subset(((1u64 << self.n) - 1) as u32)
    }

    pub fn subset_count(self) -> usize {
        1 << self.n
    }

    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        (0..(1u32 << self.n)).map(Subset)
    }

    pub fn complement(self, s: Subset) -> Subset {
        self.full().difference(s)
    }

    pub fn check(self, s: Subset) -> Result<()> {
        if s.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::MalformedSubset { mask: s.0 as u64, n: self.n })
        }
    }
}

/// How absent subset values are treated when building a [`DiscreteMeasure`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StorageMode {
    /// Every nonempty subset must be given.
    Strict,
    /// An absent `μ(B)` is the largest stored `μ(C)` with `C ⊆ B`.
    #[default]
    Closure,
}

/// A set function on all subsets of a finite space, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    space: FiniteSpace,
    values: Vec<ExtReal>,
}

impl DiscreteMeasure {
    /// Builds a measure from stored values. `μ(∅)` defaults to 0.
    ///
    /// Stored values are kept as given, so a non-monotone assignment is
    /// representable and shows up in [`DiscreteMeasure::validate_monotone`].
    pub fn from_values<I>(space: FiniteSpace, stored: I, mode: StorageMode) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, ExtReal)>,
    {
        let size = space.subset_count();
        let mut given: Vec<Option<ExtReal>> = vec![None; size];
        for (s, v) in stored {
            space.check(s)?;
            given[s.0 as usize] = Some(v);
        }
        if given[0].is_none() {
            given[0] = Some(ExtReal::ZERO);
        }
        let values = match mode {
            StorageMode::Strict => {
                let mut values = Vec::with_capacity(size);
                for (bits, v) in given.iter().enumerate() {
                    match v {
                        Some(v) => values.push(*v),
                        None => return Err(Error::MissingSubset(Subset(bits as u32).key())),
                    }
                }
                values
            }
            StorageMode::Closure => {
                // best[B] = max over stored C ⊆ B, by a sum-over-subsets sweep
                let mut best: Vec<ExtReal> = given.iter().map(|v| v.unwrap_or(ExtReal::ZERO)).collect();
                for i in 0..space.n() {
                    let bit = 1usize << i;
                    for b in 0..size {
                        if b & bit != 0 {
                            let lower = best[b ^ bit];
                            if lower > best[b] {
                                best[b] = lower;
                            }
                        }
                    }
                }
                given
                    .iter()
                    .zip(best)
                    .map(|(g, b)| g.unwrap_or(b))
                    .collect()
            }
        };
        Ok(DiscreteMeasure { space, values })
    }

    /// Builds a measure from a function of the subset (no validation).
    pub fn from_fn(space: FiniteSpace, mut f: impl FnMut(Subset) -> ExtReal) -> Self {
        let values = space.subsets().map(|s| if s.is_empty() { ExtReal::ZERO } else { f(s) }).collect();
        DiscreteMeasure { space, values }
    }

    /// `μ(B) = |B|`.
    pub fn counting(space: FiniteSpace) -> Self {
        Self::from_fn(space, |s| ExtReal::from(s.len() as u32))
    }

    /// `μ(B) = Σ_{i∈B} w_i`.
    pub fn additive(weights: &[f64]) -> Result<Self> {
        let space = FiniteSpace::new(weights.len())?;
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidValue("additive weights must be nonnegative".into()));
        }
        Ok(Self::from_fn(space, |s| ExtReal::new(s.iter().map(|i| weights[i]).sum())))
    }

    /// `μ(B) = (Σ_{i∈B} w_i)^α`: subadditive for `α ≤ 1`, superadditive for `α ≥ 1`.
    pub fn distorted_additive(weights: &[f64], alpha: f64) -> Result<Self> {
        let base = Self::additive(weights)?;
        Ok(base.map_values(|v| ExtReal::new(v.to_f64().powf(alpha))))
    }

    pub fn space(&self) -> FiniteSpace {
        self.space
    }

    /// `μ(B)`; errors if `B` does not fit the space.
    pub fn eval(&self, s: Subset) -> Result<ExtReal> {
        self.space.check(s)?;
        Ok(self.values[s.0 as usize])
    }

    /// `μ(B)` for a subset already known to fit the space.
    pub fn value(&self, s: Subset) -> ExtReal {
        self.values[s.0 as usize]
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn map_values(&self, mut f: impl FnMut(ExtReal) -> ExtReal) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| if i == 0 { ExtReal::ZERO } else { f(v) })
            .collect();
        DiscreteMeasure { space: self.space, values }
    }

    /// Checks `μ(∅) = 0` and every covering pair `A ⊂ A ∪ {i}`. Covering pairs
    /// characterize monotonicity, so an empty list means `μ` is monotone.
    pub fn validate_monotone(&self) -> MonotonicityReport {
        let mut violations = Vec::new();
        for s in self.space.subsets() {
            for i in 0..self.space.n() {
                if !s.contains(i) {
                    let t = s.with(i);
                    if self.value(s) > self.value(t) {
                        violations.push((s, t));
                    }
                }
            }
        }
        MonotonicityReport { empty_is_zero: self.values[0].is_zero(), violations }
    }

    /// `μ(A ∩ {x : f(x) ≥ t})`.
    pub fn survival(&self, a: Subset, f: &[ExtReal], t: ExtReal) -> Result<ExtReal> {
        self.space.check(a)?;
        if f.len() != self.space.n() {
            return Err(Error::InvalidValue(format!(
                "function has {} values on a space of {} elements",
                f.len(),
                self.space.n()
            )));
        }
        let level = Subset::from_indices(a.iter().filter(|&i| f[i] >= t));
        Ok(self.value(level))
    }

    /// Deletes element `i`, renumbering later elements; `μ'(B) = μ(B')` where
    /// `B'` is `B` lifted back into the original space.
    pub fn remove_element(&self, i: usize) -> Result<Self> {
        let n = self.space.n();
        let space = FiniteSpace::new(n - 1)?;
        Ok(Self::from_fn(space, |s| self.value(lift(s, i))))
    }

    /// Rounds every value to a multiple of `step`. Rounding is monotone, so
    /// monotonicity is preserved.
    pub fn quantize(&self, step: f64) -> Self {
        self.map_values(|v| match v.finite() {
            Some(x) => ExtReal::new((x / step).round() * step),
            None => v,
        })
    }

    /// Setwise `self ≤ other`.
    pub fn le(&self, other: &DiscreteMeasure) -> bool {
        self.space == other.space && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Stored values keyed by subset, for serialization.
    pub fn to_map(&self) -> BTreeMap<Subset, ExtReal> {
        self.space.subsets().skip(1).map(|s| (s, self.value(s))).collect()
    }
}

/// Maps a subset of the reduced space back into the space that still has element `removed`.
pub(crate) fn lift(s: Subset, removed: usize) -> Subset {
    let low = s.0 & ((1u32 << removed) - 1);
    let high = (s.0 >> removed) << (removed + 1);
    Subset(low | high)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub empty_is_zero: bool,
    pub violations: Vec<(Subset, Subset)>,
}

impl MonotonicityReport {
    pub fn is_valid(&self) -> bool {
        self.empty_is_zero && self.violations.is_empty()
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

/// Closed-form measures on subsets of the real line, used only through
/// level-set profiles; they are never enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IntervalMeasure {
    /// Length.
    Lebesgue,
    /// Length raised to `q > 0`.
    Power { q: f64 },
    /// Cardinality; `∞` on any set of positive length.
    Counting,
}

impl IntervalMeasure {
    pub fn eval(&self, set: &IntervalSet) -> ExtReal {
        match *self {
            IntervalMeasure::Lebesgue => ExtReal::new(set.length().max(0.0)),
            IntervalMeasure::Power { q } => ExtReal::new(set.length().max(0.0).powf(q)),
            IntervalMeasure::Counting => {
                if set.has_positive_length() {
                    ExtReal::INFINITY
                } else {
                    ExtReal::from(set.point_count() as u32)
                }
            }
        }
    }

    /// Continuity from below and above. Counting measure fails from above:
    /// `[0, 1/k]` shrinks to a point but every term is infinite.
    pub fn is_continuous(&self) -> bool {
        !matches!(self, IntervalMeasure::Counting)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            IntervalMeasure::Power { q } if !(q > 0.0 && q.is_finite()) => {
                Err(Error::InvalidValue(format!("power measure needs q > 0, got {q}")))
            }
            _ => Ok(()),
        }
    }
}

/// Either a set function on a finite space or a closed-form 1-D measure.
#[derive(Clone, Debug, PartialEq)]
pub enum MonotoneMeasure {
    Discrete(DiscreteMeasure),
    Interval(IntervalMeasure),
}

impl MonotoneMeasure {
    pub fn validate_monotone(&self) -> Result<MonotonicityReport> {
        match self {
            MonotoneMeasure::Discrete(m) => Ok(m.validate_monotone()),
            MonotoneMeasure::Interval(_) => Err(Error::NotEnumerable),
        }
    }

    pub fn as_discrete(&self) -> Result<&DiscreteMeasure> {
        match self {
            MonotoneMeasure::Discrete(m) => Ok(m),
            MonotoneMeasure::Interval(_) => Err(Error::NotEnumerable),
        }
    }

    pub fn is_continuous(&self) -> bool {
        match self {
            MonotoneMeasure::Discrete(_) => true,
            MonotoneMeasure::Interval(m) => m.is_continuous(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: f64) -> ExtReal {
        ExtReal::new(x)
    }

    /// Singletons 0.5, pairs 1, whole space 2.
    pub(crate) fn pair_measure() -> DiscreteMeasure {
        let space = FiniteSpace::new(3).unwrap();
        DiscreteMeasure::from_fn(space, |s| match s.len() {
            1 => e(0.5),
            2 => e(1.0),
            _ => e(2.0),
        })
    }

    #[test]
    fn empty_set_has_measure_zero() {
        let m = pair_measure();
        assert_eq!(m.eval(Subset::EMPTY).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn pair_measure_values() {
        let m = pair_measure();
        assert_eq!(m.eval(Subset::from_indices([0, 1])).unwrap(), e(1.0));
        assert!(m.validate_monotone().is_valid());
    }

    #[test]
    fn counting_measure_eval() {
        let m = DiscreteMeasure::counting(FiniteSpace::new(5).unwrap());
        assert_eq!(m.eval(Subset::from_indices([1, 2, 3])).unwrap(), e(3.0));
        assert!(DiscreteMeasure::counting(FiniteSpace::new(3).unwrap()).validate_monotone().is_valid());
    }

    #[test]
    fn malformed_subset_is_an_error() {
        let m = pair_measure();
        assert!(matches!(m.eval(Subset::from_indices([5])), Err(Error::MalformedSubset { .. })));
    }

    #[test]
    fn strict_mode_requires_every_subset() {
        let space = FiniteSpace::new(2).unwrap();
        let stored = [(Subset::from_indices([0]), e(1.0)), (Subset::from_indices([0, 1]), e(2.0))];
        assert!(matches!(
            DiscreteMeasure::from_values(space, stored, StorageMode::Strict),
            Err(Error::MissingSubset(_))
        ));
        let m = DiscreteMeasure::from_values(space, stored, StorageMode::Closure).unwrap();
        assert_eq!(m.value(Subset::from_indices([1])), ExtReal::ZERO);
    }

    #[test]
    fn closure_fills_from_stored_subsets() {
        let space = FiniteSpace::new(3).unwrap();
        let stored = [(Subset::from_indices([0]), e(0.4)), (Subset::from_indices([1, 2]), e(0.7))];
        let m = DiscreteMeasure::from_values(space, stored, StorageMode::Closure).unwrap();
        assert_eq!(m.value(Subset::from_indices([0, 1])), e(0.4));
        assert_eq!(m.value(Subset::from_indices([0, 1, 2])), e(0.7));
        assert!(m.validate_monotone().is_valid());
    }

    #[test]
    fn reports_violating_pair() {
        let space = FiniteSpace::new(2).unwrap();
        let stored = [(Subset::from_indices([0]), e(2.0)), (Subset::from_indices([0, 1]), e(1.0))];
        let m = DiscreteMeasure::from_values(space, stored, StorageMode::Closure).unwrap();
        let report = m.validate_monotone();
        assert!(!report.is_valid());
        assert!(report.violations.contains(&(Subset::from_indices([0]), Subset::from_indices([0, 1]))));
    }

    #[test]
    fn interval_measure_is_not_enumerable() {
        let m = MonotoneMeasure::Interval(IntervalMeasure::Lebesgue);
        assert!(matches!(m.validate_monotone(), Err(Error::NotEnumerable)));
    }

    #[test]
    fn survival_examples() {
        // counting measure on five points with f(x) = x
        let m = DiscreteMeasure::counting(FiniteSpace::new(5).unwrap());
        let f: Vec<ExtReal> = (1..=5).map(|i| e(i as f64)).collect();
        let a = m.space().full();
        assert_eq!(m.survival(a, &f, e(3.0)).unwrap(), e(3.0));
        assert_eq!(m.survival(a, &f, ExtReal::ZERO).unwrap(), m.value(a));
        assert_eq!(m.survival(a, &f, e(5.5)).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn remove_element_lifts_correctly() {
        let m = DiscreteMeasure::additive(&[1.0, 2.0, 4.0]).unwrap();
        let r = m.remove_element(1).unwrap();
        assert_eq!(r.value(Subset::from_indices([0, 1])), e(5.0));
        assert_eq!(r.value(Subset::from_indices([1])), e(4.0));
    }

    #[test]
    fn subset_keys_round_trip() {
        let s = Subset::from_indices([0, 2, 5]);
        assert_eq!(s.key(), "0,2,5");
        assert_eq!(Subset::parse_key("0,2,5").unwrap(), s);
        assert_eq!(Subset::parse_key("").unwrap(), Subset::EMPTY);
        assert_eq!(Subset::from_indices([0, 1]).submasks().count(), 4);
    }

    #[test]
    fn interval_measures() {
        let s = IntervalSet::from_parts(vec![(0.0, 1.0), (2.0, 5.0)]);
        assert_eq!(IntervalMeasure::Lebesgue.eval(&s), e(4.0));
        assert_eq!(IntervalMeasure::Power { q: 0.5 }.eval(&s), e(2.0));
        assert_eq!(IntervalMeasure::Counting.eval(&s), ExtReal::INFINITY);
        assert_eq!(IntervalMeasure::Counting.eval(&IntervalSet::interval(1.0, 1.0)), e(1.0));
    }
}
