//! Extended real numbers.
//!
//! [`ExtReal`] lives in `[0, ∞]` and [`SignedExtReal`] in `[-∞, ∞]`. Infinity is
//! a distinct tag, not an IEEE sentinel, so `∞·0 = 0` holds by rule.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Repr {
    Finite(f64),
    Inf,
}

/// A value in `[0, ∞]`.
///
/// Conventions: `∞·0 = 0·∞ = 0`, `a ∧ ∞ = a`, `a ∨ ∞ = ∞`, `a + ∞ = ∞`,
/// and `∞ − a = ∞` for finite `a` (see [`ExtReal::monus`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtReal(Repr);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(Repr::Finite(0.0));
    pub const ONE: ExtReal = ExtReal(Repr::Finite(1.0));
    pub const INFINITY: ExtReal = ExtReal(Repr::Inf);

    /// Builds a value from an `f64`. `+∞` maps to [`ExtReal::INFINITY`].
    ///
    /// Panics on negative or NaN input; use [`ExtReal::try_new`] for untrusted data.
    pub fn new(x: f64) -> Self {
        Self::try_new(x).unwrap_or_else(|| panic!("ExtReal::new: {x} is not in [0, ∞]"))
    }

    pub fn try_new(x: f64) -> Option<Self> {
        if x.is_nan() || x < 0.0 {
            None
        } else if x == f64::INFINITY {
            Some(Self::INFINITY)
        } else {
            // normalizes -0.0
            Some(ExtReal(Repr::Finite(x + 0.0)))
        }
    }

    /// Clamps negative input to zero. NaN is rejected.
    pub fn clamp_nonneg(x: f64) -> Option<Self> {
        if x.is_nan() {
            None
        } else {
            Self::try_new(x.max(0.0))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self.0, Repr::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == Repr::Finite(0.0)
    }

    /// The finite payload, or `None` for `∞`.
    pub fn finite(self) -> Option<f64> {
        match self.0 {
            Repr::Finite(x) => Some(x),
            Repr::Inf => None,
        }
    }

    /// Lossy conversion for reporting and closed-form arithmetic.
    pub fn to_f64(self) -> f64 {
        match self.0 {
            Repr::Finite(x) => x,
            Repr::Inf => f64::INFINITY,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Truncated subtraction `max(self − rhs, 0)` with `∞ − a = ∞` for finite `a`
    /// and `a − ∞ = 0` (including `∞ − ∞`).
    pub fn monus(self, rhs: Self) -> Self {
        match (self.0, rhs.0) {
            (_, Repr::Inf) => Self::ZERO,
            (Repr::Inf, Repr::Finite(_)) => Self::INFINITY,
            (Repr::Finite(a), Repr::Finite(b)) => ExtReal::new((a - b).max(0.0)),
        }
    }

    pub fn to_signed(self) -> SignedExtReal {
        SignedExtReal::from(self)
    }

    /// Absolute difference as `f64`; `0` when both are `∞`.
    pub fn abs_diff(self, other: Self) -> f64 {
        match (self.0, other.0) {
            (Repr::Inf, Repr::Inf) => 0.0,
            (Repr::Finite(a), Repr::Finite(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Repr::Inf, Repr::Inf) => Ordering::Equal,
            (Repr::Inf, _) => Ordering::Greater,
            (_, Repr::Inf) => Ordering::Less,
            (Repr::Finite(a), Repr::Finite(b)) => a.total_cmp(&b),
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: Self) -> Self {
        match (self.0, rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtReal::new(a + b),
            _ => Self::INFINITY,
        }
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        match (self.0, rhs.0) {
            (Repr::Finite(a), Repr::Finite(b)) => ExtReal::new(a * b),
            _ => Self::INFINITY,
        }
    }
}

impl From<u32> for ExtReal {
    fn from(v: u32) -> Self {
        ExtReal::new(v as f64)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Finite(x) => write!(f, "{x}"),
            Repr::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Repr::Finite(x) => s.serialize_f64(x),
            Repr::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = d.deserialize_any(NumberOrInf)?;
        ExtReal::try_new(v).ok_or_else(|| de::Error::custom(format!("{v} is not in [0, inf]")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum SRepr {
    Finite(f64),
    PosInf,
    NegInf,
}

/// A value in `[-∞, ∞]`.
///
/// The indeterminate sum `∞ + (−∞)` is defined as `0`, the same value the
/// symmetric maximum assigns to `a ⊻ (−a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedExtReal(SRepr);

impl SignedExtReal {
    pub const ZERO: SignedExtReal = SignedExtReal(SRepr::Finite(0.0));
    pub const INFINITY: SignedExtReal = SignedExtReal(SRepr::PosInf);
    pub const NEG_INFINITY: SignedExtReal = SignedExtReal(SRepr::NegInf);

    /// Panics on NaN.
    pub fn new(x: f64) -> Self {
        Self::try_new(x).expect("SignedExtReal::new: NaN")
    }

    pub fn try_new(x: f64) -> Option<Self> {
        if x.is_nan() {
            None
        } else if x == f64::INFINITY {
            Some(Self::INFINITY)
        } else if x == f64::NEG_INFINITY {
            Some(Self::NEG_INFINITY)
        } else {
            Some(SignedExtReal(SRepr::Finite(x + 0.0)))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self.0, SRepr::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        match self.0 {
            SRepr::Finite(x) => x,
            SRepr::PosInf => f64::INFINITY,
            SRepr::NegInf => f64::NEG_INFINITY,
        }
    }

    /// `-1`, `0` or `1`; `sign(0) = 0`.
    pub fn signum(self) -> i8 {
        match self.0 {
            SRepr::Finite(x) if x > 0.0 => 1,
            SRepr::Finite(x) if x < 0.0 => -1,
            SRepr::Finite(_) => 0,
            SRepr::PosInf => 1,
            SRepr::NegInf => -1,
        }
    }

    pub fn abs(self) -> ExtReal {
        match self.0 {
            SRepr::Finite(x) => ExtReal::new(x.abs()),
            _ => ExtReal::INFINITY,
        }
    }

    /// `self ∨ 0`.
    pub fn positive_part(self) -> ExtReal {
        if self.signum() > 0 {
            self.abs()
        } else {
            ExtReal::ZERO
        }
    }

    /// `(−self) ∨ 0`.
    pub fn negative_part(self) -> ExtReal {
        (-self).positive_part()
    }

    /// Converts to `[0, ∞]` if the value is nonnegative.
    pub fn to_nonneg(self) -> Option<ExtReal> {
        if self.signum() >= 0 {
            Some(self.abs())
        } else {
            None
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl From<ExtReal> for SignedExtReal {
    fn from(v: ExtReal) -> Self {
        match v.0 {
            Repr::Finite(x) => SignedExtReal(SRepr::Finite(x)),
            Repr::Inf => SignedExtReal::INFINITY,
        }
    }
}

impl Eq for SignedExtReal {}

impl PartialOrd for SignedExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(v: SRepr) -> (i8, f64) {
            match v {
                SRepr::NegInf => (-1, 0.0),
                SRepr::Finite(x) => (0, x),
                SRepr::PosInf => (1, 0.0),
            }
        }
        let (ra, a) = rank(self.0);
        let (rb, b) = rank(other.0);
        ra.cmp(&rb).then(a.total_cmp(&b))
    }
}

impl Neg for SignedExtReal {
    type Output = SignedExtReal;
    fn neg(self) -> Self {
        match self.0 {
            SRepr::Finite(x) => SignedExtReal::new(-x),
            SRepr::PosInf => Self::NEG_INFINITY,
            SRepr::NegInf => Self::INFINITY,
        }
    }
}

impl Add for SignedExtReal {
    type Output = SignedExtReal;
    fn add(self, rhs: Self) -> Self {
        match (self.0, rhs.0) {
            (SRepr::Finite(a), SRepr::Finite(b)) => SignedExtReal::new(a + b),
            (SRepr::PosInf, SRepr::NegInf) | (SRepr::NegInf, SRepr::PosInf) => Self::ZERO,
            (SRepr::PosInf, _) | (_, SRepr::PosInf) => Self::INFINITY,
            _ => Self::NEG_INFINITY,
        }
    }
}

impl fmt::Display for SignedExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SRepr::Finite(x) => write!(f, "{x}"),
            SRepr::PosInf => f.write_str("inf"),
            SRepr::NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for SignedExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            SRepr::Finite(x) => s.serialize_f64(x),
            SRepr::PosInf => s.serialize_str("inf"),
            SRepr::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SignedExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = d.deserialize_any(NumberOrInf)?;
        SignedExtReal::try_new(v).ok_or_else(|| de::Error::custom("NaN is not allowed"))
    }
}

/// Accepts a JSON number or one of the strings `"inf"`, `"+inf"`, `"-inf"`.
struct NumberOrInf;

impl<'de> Visitor<'de> for NumberOrInf {
    type Value = f64;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number or \"inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
        Ok(v)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
        parse_inf(v).ok_or_else(|| E::custom(format!("unrecognized value {v:?}")))
    }
}

pub(crate) fn parse_inf(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" | "∞" => Some(f64::INFINITY),
        "-inf" | "-∞" => Some(f64::NEG_INFINITY),
        other => other.parse::<f64>().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: f64) -> ExtReal {
        ExtReal::new(x)
    }

    #[test]
    fn infinity_times_zero_is_zero() {
        assert_eq!(ExtReal::INFINITY * ExtReal::ZERO, ExtReal::ZERO);
        assert_eq!(ExtReal::ZERO * ExtReal::INFINITY, ExtReal::ZERO);
        assert_eq!(ExtReal::INFINITY * e(0.5), ExtReal::INFINITY);
    }

    #[test]
    fn conventions_on_small_grid() {
        let grid = [e(0.0), e(0.5), e(1.0), ExtReal::INFINITY];
        for &a in &grid {
            assert!(a <= ExtReal::INFINITY);
            assert_eq!(a.min(ExtReal::INFINITY), a);
            assert_eq!(a.max(ExtReal::INFINITY), ExtReal::INFINITY);
            assert_eq!(a + ExtReal::INFINITY, ExtReal::INFINITY);
            if a.is_finite() {
                assert_eq!(ExtReal::INFINITY.monus(a), ExtReal::INFINITY);
            }
            for &b in &grid {
                assert_eq!(a * b, b * a);
                assert_eq!(a + b, b + a);
                assert_eq!(a.min(b), b.min(a));
            }
        }
    }

    #[test]
    fn monus_truncates() {
        assert_eq!(e(1.0).monus(e(3.0)), ExtReal::ZERO);
        assert_eq!(e(3.0).monus(e(1.0)), e(2.0));
        assert_eq!(ExtReal::INFINITY.monus(ExtReal::INFINITY), ExtReal::ZERO);
    }

    #[test]
    fn rejects_negative_and_nan() {
        assert!(ExtReal::try_new(-1.0).is_none());
        assert!(ExtReal::try_new(f64::NAN).is_none());
        assert_eq!(ExtReal::try_new(f64::INFINITY), Some(ExtReal::INFINITY));
    }

    #[test]
    fn signed_parts_and_sign() {
        let x = SignedExtReal::new(-1.5);
        assert_eq!(x.signum(), -1);
        assert_eq!(SignedExtReal::ZERO.signum(), 0);
        assert_eq!(x.positive_part(), ExtReal::ZERO);
        assert_eq!(x.negative_part(), e(1.5));
        assert_eq!(x.abs(), e(1.5));
        assert_eq!(SignedExtReal::INFINITY + SignedExtReal::NEG_INFINITY, SignedExtReal::ZERO);
        assert!(SignedExtReal::NEG_INFINITY < x && x < SignedExtReal::ZERO);
    }

    #[test]
    fn json_accepts_inf_strings() {
        let v: Vec<ExtReal> = serde_json::from_str(r#"[1, 2.5, "inf"]"#).unwrap();
        assert_eq!(v, vec![e(1.0), e(2.5), ExtReal::INFINITY]);
        let s: SignedExtReal = serde_json::from_str(r#""-inf""#).unwrap();
        assert_eq!(s, SignedExtReal::NEG_INFINITY);
        assert!(serde_json::from_str::<ExtReal>("-1").is_err());
        assert_eq!(serde_json::to_string(&ExtReal::INFINITY).unwrap(), r#""inf""#);
    }
}
