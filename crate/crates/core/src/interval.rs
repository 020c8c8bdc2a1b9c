//! Finite unions of open intervals on the real line.

use serde::Serialize;

/// Sorted, pairwise disjoint open intervals. Endpoints may be infinite.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IntervalUnion {
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn real_line() -> Self {
        Self { parts: vec![(f64::NEG_INFINITY, f64::INFINITY)] }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::from_intervals(vec![(lo, hi)])
    }

    /// Builds the union of arbitrary open intervals; empty ones are dropped
    /// and overlapping ones merged. Touching intervals `(a, b)`, `(b, c)` are
    /// kept apart since `b` is not covered.
    pub fn from_intervals(mut v: Vec<(f64, f64)>) -> Self {
        v.retain(|&(lo, hi)| lo < hi);
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut parts: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match parts.last_mut() {
                Some(last) if lo < last.1 => last.1 = last.1.max(hi),
                _ => parts.push((lo, hi)),
            }
        }
        Self { parts }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.parts.partition_point(|p| p.1 <= x);
        i < self.parts.len() && self.parts[i].0 < x
    }

    /// Merges neighbours whose gap is at most `tol`, absorbing isolated
    /// missing points.
    pub fn snapped(&self, tol: f64) -> Self {
        let mut parts: Vec<(f64, f64)> = Vec::with_capacity(self.parts.len());
        for &(lo, hi) in &self.parts {
            match parts.last_mut() {
                Some(last) if lo - last.1 <= tol => last.1 = last.1.max(hi),
                _ => parts.push((lo, hi)),
            }
        }
        Self { parts }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.parts.clone();
        v.extend_from_slice(&other.parts);
        Self::from_intervals(v)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.parts.len() && j < other.parts.len() {
            let (a0, a1) = self.parts[i];
            let (b0, b1) = other.parts[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { parts: out }
    }

    pub fn intersect_interval(&self, lo: f64, hi: f64) -> Self {
        self.intersect(&Self::interval(lo, hi))
    }

    /// Open complement, ignoring the endpoints themselves (a measure-zero
    /// set), restricted to `(lo, hi)`.
    pub fn complement_within(&self, lo: f64, hi: f64) -> Self {
        let mut out = Vec::new();
        let mut cur = lo;
        for &(a, b) in &self.parts {
            if a > cur {
                out.push((cur, a.min(hi)));
            }
            cur = cur.max(b);
            if cur >= hi {
                break;
            }
        }
        if cur < hi {
            out.push((cur, hi));
        }
        Self::from_intervals(out)
    }

    /// Total length (may be infinite).
    pub fn measure(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn inf(&self) -> Option<f64> {
        self.parts.first().map(|p| p.0)
    }

    pub fn sup(&self) -> Option<f64> {
        self.parts.last().map(|p| p.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_overlaps_keeps_touching() {
        let u = IntervalUnion::from_intervals(vec![(2.0, 3.0), (0.0, 1.0), (0.5, 1.5), (1.5, 2.0)]);
        assert_eq!(u.parts(), &[(0.0, 1.5), (1.5, 2.0), (2.0, 3.0)]);
        assert!(!u.contains(1.5));
        assert_eq!(u.snapped(0.0).parts(), &[(0.0, 3.0)]);
    }

    #[test]
    fn complement_and_intersection() {
        let u = IntervalUnion::from_intervals(vec![(0.0, 1.0), (2.0, 3.0)]);
        let c = u.complement_within(-1.0, 4.0);
        assert_eq!(c.parts(), &[(-1.0, 0.0), (1.0, 2.0), (3.0, 4.0)]);
        assert!(u.intersect(&c).is_empty());
        let i = u.intersect_interval(0.5, 2.5);
        assert_eq!(i.parts(), &[(0.5, 1.0), (2.0, 2.5)]);
        assert!((u.measure() - 2.0).abs() < 1e-15);
    }
}
