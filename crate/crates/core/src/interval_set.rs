//! Finite unions of closed real intervals.
//!
//! Only the measure of a set matters downstream, and every interval measure
//! in this crate is either nonatomic or only distinguishes points from
//! nondegenerate intervals, so endpoints are always treated as closed.

/// Sorted, pairwise disjoint closed intervals `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet {
    parts: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        IntervalSet::from_parts(vec![(lo, hi)])
    }

    /// Normalizes arbitrary intervals: drops empty ones, sorts, merges overlaps.
    pub fn from_parts(mut parts: Vec<(f64, f64)>) -> Self {
        parts.retain(|&(lo, hi)| !lo.is_nan() && !hi.is_nan() && lo <= hi);
        parts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (lo, hi) in parts {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        IntervalSet { parts: merged }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.parts.clone();
        all.extend_from_slice(&other.parts);
        IntervalSet::from_parts(all)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a0, a1) = self.parts[i];
            let (b0, b1) = other.parts[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet::from_parts(out)
    }

    /// Total length; infinite if any part is unbounded.
    pub fn length(&self) -> f64 {
        self.parts.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    /// Number of degenerate (single point) parts.
    pub fn point_count(&self) -> usize {
        self.parts.iter().filter(|&&(lo, hi)| lo == hi).count()
    }

    pub fn has_positive_length(&self) -> bool {
        self.parts.iter().any(|&(lo, hi)| hi > lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_measures() {
        let s = IntervalSet::from_parts(vec![(3.0, 4.0), (0.0, 1.0), (0.5, 2.0), (5.0, 5.0)]);
        assert_eq!(s.parts(), &[(0.0, 2.0), (3.0, 4.0), (5.0, 5.0)]);
        assert_eq!(s.length(), 3.0);
        assert_eq!(s.point_count(), 1);
    }

    #[test]
    fn intersection_of_unions() {
        let a = IntervalSet::from_parts(vec![(0.0, 2.0), (3.0, 6.0)]);
        let b = IntervalSet::from_parts(vec![(1.0, 4.0), (5.0, 7.0)]);
        assert_eq!(a.intersect(&b).parts(), &[(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)]);
        assert!(a.intersect(&IntervalSet::empty()).is_empty());
    }
}
