//! Additivity-type predicates on finite monotone measures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::extreal::ExtReal;
use crate::measure::{DiscreteMeasure, IntervalMeasure, MonotoneMeasure, Subset};
use crate::profile::Instance;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    WeaklySubadditive,
    WeaklySuperadditive,
    Subadditive,
    Superadditive,
}

impl Predicate {
    pub const ALL: [Predicate; 4] =
        [Predicate::WeaklySubadditive, Predicate::WeaklySuperadditive, Predicate::Subadditive, Predicate::Superadditive];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::WeaklySubadditive => "weakly-subadditive",
            Predicate::WeaklySuperadditive => "weakly-superadditive",
            Predicate::Subadditive => "subadditive",
            Predicate::Superadditive => "superadditive",
        }
    }

    /// Whether the predicate is relative to a set `A`.
    pub fn is_weak(self) -> bool {
        matches!(self, Predicate::WeaklySubadditive | Predicate::WeaklySuperadditive)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown predicate {s:?}")))
    }
}

/// The outcome of a predicate, with the pair `(B, C)` of disjoint sets that
/// breaks it: `μ(B ∪ C)` against `μ(B) + μ(C)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredicateResult {
    pub predicate: Predicate,
    pub holds: bool,
    pub witness: Option<(Subset, Subset)>,
}

impl PredicateResult {
    pub fn detail(&self, measure: &DiscreteMeasure) -> String {
        match self.witness {
            None => format!("{} holds", self.predicate),
            Some((b, c)) => format!(
                "{} fails: μ({{{}}}) = {}, μ({{{}}}) + μ({{{}}}) = {}",
                self.predicate,
                b.union(c).key(),
                measure.value(b.union(c)),
                b.key(),
                c.key(),
                measure.value(b) + measure.value(c)
            ),
        }
    }
}

// Sums of stored reals are compared with a relative slack of a few ulps so
// that additive measures built from float weights pass both directions.
const SLACK: f64 = 1e-12;

fn le(x: ExtReal, y: ExtReal) -> bool {
    match (x.finite(), y.finite()) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b + SLACK * (1.0 + b.abs()),
    }
}

fn split_ok(measure: &DiscreteMeasure, b: Subset, c: Subset, sub: bool) -> bool {
    let whole = measure.value(b.union(c));
    let parts = measure.value(b) + measure.value(c);
    if sub {
        le(whole, parts)
    } else {
        le(parts, whole)
    }
}

/// `μ(A) ≤ μ(A ∩ B) + μ(A ∖ B)` for every `B` (only `B ∩ A` matters).
pub fn is_weakly_subadditive(measure: &DiscreteMeasure, a: Subset) -> PredicateResult {
    weak(measure, a, true)
}

/// `μ(A) ≥ μ(A ∩ B) + μ(A ∖ B)` for every `B`.
pub fn is_weakly_superadditive(measure: &DiscreteMeasure, a: Subset) -> PredicateResult {
    weak(measure, a, false)
}

fn weak(measure: &DiscreteMeasure, a: Subset, sub: bool) -> PredicateResult {
    let predicate = if sub { Predicate::WeaklySubadditive } else { Predicate::WeaklySuperadditive };
    let witness = a.submasks().map(|b| (b, a.difference(b))).find(|&(b, c)| !split_ok(measure, b, c, sub));
    PredicateResult { predicate, holds: witness.is_none(), witness }
}

/// `μ(B ∪ C) ≤ μ(B) + μ(C)` for all disjoint `B, C`.
pub fn is_subadditive(measure: &DiscreteMeasure) -> PredicateResult {
    global(measure, true)
}

/// `μ(B ∪ C) ≥ μ(B) + μ(C)` for all disjoint `B, C`.
pub fn is_superadditive(measure: &DiscreteMeasure) -> PredicateResult {
    global(measure, false)
}

fn global(measure: &DiscreteMeasure, sub: bool) -> PredicateResult {
    let predicate = if sub { Predicate::Subadditive } else { Predicate::Superadditive };
    let witness = measure.space().subsets().find_map(|u| {
        u.submasks().map(|b| (b, u.difference(b))).find(|&(b, c)| !split_ok(measure, b, c, sub))
    });
    PredicateResult { predicate, holds: witness.is_none(), witness }
}

/// Runs `predicate`; the weak forms need `A`.
pub fn check_discrete(measure: &DiscreteMeasure, a: Option<Subset>, predicate: Predicate) -> Result<PredicateResult> {
    let need_a = || a.ok_or_else(|| Error::InvalidValue(format!("{predicate} needs a set A")));
    Ok(match predicate {
        Predicate::WeaklySubadditive => is_weakly_subadditive(measure, need_a()?),
        Predicate::WeaklySuperadditive => is_weakly_superadditive(measure, need_a()?),
        Predicate::Subadditive => is_subadditive(measure),
        Predicate::Superadditive => is_superadditive(measure),
    })
}

pub fn check(measure: &MonotoneMeasure, a: Option<Subset>, predicate: Predicate) -> Result<PredicateResult> {
    check_discrete(measure.as_discrete()?, a, predicate)
}

/// The closed-form answer for the 1-D measures: Lebesgue and counting are
/// additive, `λ^q` is subadditive for `q ≤ 1` and superadditive for `q ≥ 1`.
pub fn interval_property(measure: &IntervalMeasure, predicate: Predicate) -> bool {
    let (sub, sup) = match measure {
        IntervalMeasure::Lebesgue | IntervalMeasure::Counting => (true, true),
        IntervalMeasure::Power { q } => (*q <= 1.0, *q >= 1.0),
    };
    match predicate {
        Predicate::WeaklySubadditive | Predicate::Subadditive => sub,
        Predicate::WeaklySuperadditive | Predicate::Superadditive => sup,
    }
}

/// The predicate on an instance's measure (and set `A` for the weak forms),
/// with a human-readable detail.
pub fn instance_property(inst: &Instance, predicate: Predicate) -> (bool, String) {
    match inst {
        Instance::Discrete { measure, a, .. } => {
            let r = check_discrete(measure, Some(*a), predicate).expect("A is supplied");
            let detail = r.detail(measure);
            (r.holds, detail)
        }
        Instance::Interval { measure, .. } => {
            let holds = interval_property(measure, predicate);
            (holds, format!("{predicate} {} for {measure:?} (closed form)", if holds { "holds" } else { "fails" }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{FiniteSpace, StorageMode};

    fn three_point() -> DiscreteMeasure {
        let space = FiniteSpace::new(3).unwrap();
        DiscreteMeasure::from_fn(space, |s| match s.len() {
            0 => ExtReal::ZERO,
            1 => ExtReal::new(0.5),
            2 => ExtReal::ONE,
            _ => ExtReal::new(2.0),
        })
    }

    #[test]
    fn weak_but_not_global() {
        let m = three_point();
        let a = Subset::from_indices([0, 1]);
        assert!(is_weakly_subadditive(&m, a).holds);
        let r = is_subadditive(&m);
        assert!(!r.holds);
        let (b, c) = r.witness.unwrap();
        assert_eq!(b.union(c), m.space().full());
        assert!(m.value(b) + m.value(c) < ExtReal::new(2.0));
        assert!(!is_weakly_subadditive(&m, m.space().full()).holds);
    }

    #[test]
    fn additive_passes_everything() {
        let m = DiscreteMeasure::additive(&[0.1, 0.7, 0.2, 0.3]).unwrap();
        for a in m.space().subsets() {
            assert!(is_weakly_subadditive(&m, a).holds);
            assert!(is_weakly_superadditive(&m, a).holds);
        }
        assert!(is_subadditive(&m).holds);
        assert!(is_superadditive(&m).holds);
    }

    #[test]
    fn squared_counting_is_superadditive() {
        let m = DiscreteMeasure::from_values(
            FiniteSpace::new(2).unwrap(),
            [(Subset::from_indices([0]), ExtReal::ONE), (Subset::from_indices([1]), ExtReal::ONE), (Subset::from_indices([0, 1]), ExtReal::new(4.0))],
            StorageMode::Strict,
        )
        .unwrap();
        assert!(is_superadditive(&m).holds);
        assert!(!is_subadditive(&m).holds);
    }

    #[test]
    fn parse_names() {
        assert_eq!("weakly-subadditive".parse::<Predicate>().unwrap(), Predicate::WeaklySubadditive);
        assert_eq!("weakly_superadditive".parse::<Predicate>().unwrap(), Predicate::WeaklySuperadditive);
        assert!("additive".parse::<Predicate>().is_err());
    }

    #[test]
    fn interval_measures_answer_in_closed_form() {
        assert!(interval_property(&IntervalMeasure::Power { q: 0.5 }, Predicate::Subadditive));
        assert!(!interval_property(&IntervalMeasure::Power { q: 0.5 }, Predicate::Superadditive));
        let m = MonotoneMeasure::Interval(IntervalMeasure::Lebesgue);
        assert!(matches!(check(&m, None, Predicate::Subadditive), Err(Error::NotEnumerable)));
    }
}
