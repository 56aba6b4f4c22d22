//! Finitely supported fuzzy subsets.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::fmt::Write as _;

use crate::frame::{Frame, FrameElt};

/// A map from points to frame elements where absent points read as bottom.
///
/// Bottom values are never stored, so the key set is exactly the support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuzzySubset<P: Ord> {
    bottom: FrameElt,
    entries: BTreeMap<P, FrameElt>,
}

impl<P: Ord + Clone> FuzzySubset<P> {
    pub fn empty(frame: &Frame) -> Self {
        FuzzySubset { bottom: frame.bottom(), entries: BTreeMap::new() }
    }

    pub fn from_pairs(frame: &Frame, pairs: impl IntoIterator<Item = (P, FrameElt)>) -> Self {
        let mut s = Self::empty(frame);
        for (p, v) in pairs {
            s.raise(frame, p, v);
        }
        s
    }

    /// Characteristic map of a crisp set.
    pub fn crisp(frame: &Frame, points: impl IntoIterator<Item = P>) -> Self {
        Self::from_pairs(frame, points.into_iter().map(|p| (p, frame.top())))
    }

    pub fn singleton(frame: &Frame, p: P, v: FrameElt) -> Self {
        Self::from_pairs(frame, [(p, v)])
    }

    pub fn get(&self, p: &P) -> FrameElt {
        self.entries.get(p).copied().unwrap_or(self.bottom)
    }

    pub fn set(&mut self, p: P, v: FrameElt) {
        if v == self.bottom {
            self.entries.remove(&p);
        } else {
            self.entries.insert(p, v);
        }
    }

    /// Joins `v` into the value at `p`.
    pub fn raise(&mut self, frame: &Frame, p: P, v: FrameElt) {
        let cur = self.get(&p);
        self.set(p, frame.join(cur, v));
    }

    pub fn support(&self) -> impl Iterator<Item = &P> + Clone {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, FrameElt)> + Clone {
        self.entries.iter().map(|(p, v)| (p, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `∨_y S(y)`.
    pub fn height(&self, frame: &Frame) -> FrameElt {
        frame.join_all(self.entries.values().copied())
    }

    /// Pointwise join.
    pub fn union(&self, frame: &Frame, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, v) in other.iter() {
            out.raise(frame, p.clone(), v);
        }
        out
    }

    /// Pointwise meet.
    pub fn intersection(&self, frame: &Frame, other: &Self) -> Self {
        Self::from_pairs(
            frame,
            self.iter().map(|(p, v)| (p.clone(), frame.meet(v, other.get(p)))),
        )
    }

    /// Zadeh image: `f(S)(q) = ∨_{f(p)=q} S(p)`.
    pub fn image<Q: Ord + Clone>(&self, frame: &Frame, f: impl Fn(&P) -> Q) -> FuzzySubset<Q> {
        let mut out = FuzzySubset::empty(frame);
        for (p, v) in self.iter() {
            out.raise(frame, f(p), v);
        }
        out
    }

    /// Restriction to the points satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&P) -> bool) -> Self {
        FuzzySubset {
            bottom: self.bottom,
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, v)| (p.clone(), *v))
                .collect(),
        }
    }

    /// Pointwise order `self ≤ other`.
    pub fn is_below(&self, frame: &Frame, other: &Self) -> bool {
        self.iter().all(|(p, v)| frame.leq(v, other.get(p)))
    }

    /// Renders as `{p:v, ...}` using the frame's element names.
    pub fn describe(&self, frame: &Frame, point: impl Fn(&P) -> String) -> String {
        let mut out = String::from("{");
        for (i, (p, v)) in self.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}:{}", point(p), frame.name(v));
        }
        out.push('}');
        out
    }
}

impl<P: Ord + fmt::Debug> fmt::Display for FuzzySubset<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(p, v)| (p, v.0))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn bottom_is_never_stored() {
        let f = Frame::chain(3).unwrap();
        let m = f.parse("m").unwrap();
        let mut s = FuzzySubset::from_pairs(&f, [(1usize, m), (2, f.bottom())]);
        assert_eq!(s.support().copied().collect::<vec::Vec<_>>(), vec![1]);
        s.set(1, f.bottom());
        assert!(s.is_empty());
    }

    #[test]
    fn union_and_intersection() {
        let f = Frame::chain(3).unwrap();
        let m = f.parse("m").unwrap();
        let s = FuzzySubset::from_pairs(&f, [(0usize, m), (1, f.top())]);
        let t = FuzzySubset::from_pairs(&f, [(1usize, m), (2, f.top())]);
        assert_eq!(s.union(&f, &s), s);
        let u = s.union(&f, &t);
        assert_eq!(u.support().copied().collect::<vec::Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(u.get(&1), f.top());
        let i = s.intersection(&f, &t);
        assert_eq!(i.support().copied().collect::<vec::Vec<_>>(), vec![1]);
        assert_eq!(i.get(&1), m);
    }

    #[test]
    fn image_joins_fibres() {
        let f = Frame::chain(3).unwrap();
        let m = f.parse("m").unwrap();
        let s = FuzzySubset::from_pairs(&f, [(0usize, m), (1, f.top()), (2, m)]);
        assert_eq!(s.image(&f, |p| *p), s);
        let c = s.image(&f, |_| 7usize);
        assert_eq!(c.get(&7), f.top());
        let two_to_one = s.image(&f, |p| p / 2);
        assert_eq!(two_to_one.get(&0), f.top());
        assert_eq!(two_to_one.get(&1), m);
    }
}
