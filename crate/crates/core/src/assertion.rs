//! Assertions about the parameter: structured subsets of the parameter space.
//!
//! Scalar assertions are finite unions of intervals with explicit endpoint
//! closure, which is what makes exact suprema and structural complements
//! possible. Higher-dimensional assertions are half-spaces or arbitrary
//! predicates and are always handled on a grid.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A real interval with independent endpoint closure.
///
/// Infinite endpoints are always treated as open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn point(x: f64) -> Self {
        Self::closed(x, x)
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_nan()
            || self.hi.is_nan()
            || self.lo > self.hi
            || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    pub fn length(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    /// True when the interval contains `(x, x + ε)` for some ε > 0.
    fn covers_right_of(&self, x: f64) -> bool {
        x >= self.lo && x < self.hi
    }

    /// True when the interval contains `(x − ε, x)` for some ε > 0.
    fn covers_left_of(&self, x: f64) -> bool {
        x > self.lo && x <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A finite union of intervals, stored sorted and pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn real_line() -> Self {
        IntervalSet {
            parts: vec![Interval::real_line()],
        }
    }

    pub fn from_interval(iv: Interval) -> Self {
        Self::from_intervals(vec![iv])
    }

    /// Normalizes an arbitrary list: drops empties, sorts, merges overlaps
    /// and touching pieces whose shared endpoint is covered.
    pub fn from_intervals(mut ivs: Vec<Interval>) -> Self {
        ivs.retain(|iv| !iv.is_empty());
        ivs.sort_by(|a, b| {
            a.lo.partial_cmp(&b.lo)
                .unwrap()
                .then_with(|| b.lo_closed.cmp(&a.lo_closed))
        });
        let mut parts: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            if let Some(last) = parts.last_mut() {
                let joins = iv.lo < last.hi
                    || (iv.lo == last.hi && (iv.lo_closed || last.hi_closed));
                if joins {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                        last.hi_closed = iv.hi_closed;
                    } else if iv.hi == last.hi {
                        last.hi_closed |= iv.hi_closed;
                    }
                    continue;
                }
            }
            parts.push(iv);
        }
        IntervalSet { parts }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|iv| iv.contains(x))
    }

    pub fn covers_right_of(&self, x: f64) -> bool {
        self.parts.iter().any(|iv| iv.covers_right_of(x))
    }

    pub fn covers_left_of(&self, x: f64) -> bool {
        self.parts.iter().any(|iv| iv.covers_left_of(x))
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut lo = f64::NEG_INFINITY;
        let mut lo_closed = false;
        for iv in &self.parts {
            out.push(Interval::new(lo, iv.lo, lo_closed, !iv.lo_closed));
            lo = iv.hi;
            lo_closed = !iv.hi_closed;
        }
        out.push(Interval::new(lo, f64::INFINITY, lo_closed, false));
        IntervalSet::from_intervals(out)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.parts.clone();
        all.extend_from_slice(&other.parts);
        IntervalSet::from_intervals(all)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let c = a.intersect(b);
                if !c.is_empty() {
                    out.push(c);
                }
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.intersect(&other.complement()).is_empty()
    }

    pub fn intersects(&self, other: &IntervalSet) -> bool {
        !self.intersect(other).is_empty()
    }

    /// Total length; infinite for unbounded sets.
    pub fn measure(&self) -> f64 {
        self.parts.iter().map(Interval::length).sum()
    }

    /// Smallest and largest endpoint.
    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((self.parts.first()?.lo, self.parts.last()?.hi))
    }

    /// All finite endpoints, sorted.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .parts
            .iter()
            .flat_map(|iv| [iv.lo, iv.hi])
            .filter(|x| x.is_finite())
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, iv) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

type PredicateFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// An assertion "θ ∈ A".
#[derive(Clone)]
pub enum Assertion {
    /// Scalar union of intervals.
    Intervals(IntervalSet),
    /// `{ϑ : normal·ϑ ≤ offset}`, or `<` when `strict`.
    HalfSpace {
        normal: Vec<f64>,
        offset: f64,
        strict: bool,
    },
    /// Arbitrary membership test; suprema always go through a grid.
    Predicate { dim: usize, test: Arc<PredicateFn> },
    /// The whole space of the given dimension.
    Full(usize),
    /// The empty set of the given dimension.
    Empty(usize),
}

impl fmt::Debug for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Intervals(s) => write!(f, "Intervals({s})"),
            Assertion::HalfSpace {
                normal,
                offset,
                strict,
            } => write!(
                f,
                "HalfSpace({normal:?}·θ {} {offset})",
                if *strict { "<" } else { "≤" }
            ),
            Assertion::Predicate { dim, .. } => write!(f, "Predicate(dim={dim})"),
            Assertion::Full(d) => write!(f, "Full({d})"),
            Assertion::Empty(d) => write!(f, "Empty({d})"),
        }
    }
}

impl Assertion {
    pub fn interval(iv: Interval) -> Self {
        Assertion::Intervals(IntervalSet::from_interval(iv))
    }

    /// Open interval `(lo, hi)`; either end may be infinite.
    pub fn open(lo: f64, hi: f64) -> Self {
        Self::interval(Interval::open(lo, hi))
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::interval(Interval::closed(lo, hi))
    }

    pub fn singleton(x: f64) -> Self {
        Self::interval(Interval::point(x))
    }

    pub fn predicate(dim: usize, test: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        Assertion::Predicate {
            dim,
            test: Arc::new(test),
        }
    }

    pub fn half_space(normal: Vec<f64>, offset: f64) -> Result<Self> {
        if normal.is_empty() || normal.iter().all(|v| *v == 0.0) {
            return Err(Error::invalid("half-space normal must be non-zero"));
        }
        Ok(Assertion::HalfSpace {
            normal,
            offset,
            strict: false,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Assertion::Intervals(_) => 1,
            Assertion::HalfSpace { normal, .. } => normal.len(),
            Assertion::Predicate { dim, .. } => *dim,
            Assertion::Full(d) | Assertion::Empty(d) => *d,
        }
    }

    /// Structural emptiness; predicates are never known to be empty.
    pub fn is_empty(&self) -> bool {
        match self {
            Assertion::Intervals(s) => s.is_empty(),
            Assertion::Empty(_) => true,
            _ => false,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Assertion::Intervals(s) => s.contains(p[0]),
            Assertion::HalfSpace {
                normal,
                offset,
                strict,
            } => {
                let dot: f64 = normal.iter().zip(p).map(|(a, b)| a * b).sum();
                if *strict {
                    dot < *offset
                } else {
                    dot <= *offset
                }
            }
            Assertion::Predicate { test, .. } => test(p),
            Assertion::Full(_) => true,
            Assertion::Empty(_) => false,
        }
    }

    pub fn complement(&self) -> Assertion {
        match self {
            Assertion::Intervals(s) => Assertion::Intervals(s.complement()),
            Assertion::HalfSpace {
                normal,
                offset,
                strict,
            } => Assertion::HalfSpace {
                normal: normal.iter().map(|v| -v).collect(),
                offset: -offset,
                strict: !strict,
            },
            Assertion::Predicate { dim, test } => {
                let test = Arc::clone(test);
                Assertion::Predicate {
                    dim: *dim,
                    test: Arc::new(move |p| !test(p)),
                }
            }
            Assertion::Full(d) => Assertion::Empty(*d),
            Assertion::Empty(d) => Assertion::Full(*d),
        }
    }

    /// Scalar view: `Full(1)`/`Empty(1)` are mapped onto interval sets.
    pub fn as_interval_set(&self) -> Option<IntervalSet> {
        match self {
            Assertion::Intervals(s) => Some(s.clone()),
            Assertion::Full(1) => Some(IntervalSet::real_line()),
            Assertion::Empty(1) => Some(IntervalSet::empty()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_point_is_two_open_rays() {
        let s = IntervalSet::from_interval(Interval::point(1.5));
        let c = s.complement();
        assert_eq!(c.parts().len(), 2);
        assert!(!c.contains(1.5));
        assert!(c.contains(1.4999) && c.contains(1.5001));
        assert_eq!(c.parts()[0], Interval::open(f64::NEG_INFINITY, 1.5));
    }

    #[test]
    fn complement_round_trips() {
        let s = IntervalSet::from_intervals(vec![
            Interval::new(0.0, 1.0, true, false),
            Interval::open(2.0, 3.0),
            Interval::point(5.0),
        ]);
        assert_eq!(s.complement().complement(), s);
    }

    #[test]
    fn touching_pieces_merge_when_covered() {
        let s = IntervalSet::from_intervals(vec![Interval::closed(1.0, 2.0), Interval::open(2.0, 3.0)]);
        assert_eq!(s.parts(), &[Interval::new(1.0, 3.0, true, false)]);
        let gap = IntervalSet::from_intervals(vec![
            Interval::new(1.0, 2.0, true, false),
            Interval::open(2.0, 3.0),
        ]);
        assert_eq!(gap.parts().len(), 2);
    }

    #[test]
    fn subset_and_intersection() {
        let ab = IntervalSet::from_interval(Interval::closed(1.0, 2.0));
        let inner = IntervalSet::from_interval(Interval::open(1.2, 1.4));
        assert!(inner.is_subset_of(&ab));
        assert!(ab.is_subset_of(&IntervalSet::real_line()));
        assert!(!IntervalSet::real_line().is_subset_of(&ab));
        assert!(!ab.intersects(&IntervalSet::from_interval(Interval::open(3.0, 4.0))));
        assert!(ab.covers_left_of(2.0) && !ab.covers_right_of(2.0));
    }

    #[test]
    fn half_space_complement_is_strict() {
        let h = Assertion::half_space(vec![1.0, 0.0], 0.5).unwrap();
        let c = h.complement();
        assert!(h.contains(&[0.5, 3.0]));
        assert!(!c.contains(&[0.5, 3.0]));
        assert!(c.contains(&[0.6, 0.0]));
    }
}
