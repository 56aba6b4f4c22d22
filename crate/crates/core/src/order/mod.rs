//! L-ordered sets over a finite frame: axioms, the induced crisp order,
//! fuzzy closures, and joins/meets of fuzzy subsets.
//!
//! Joins and meets are found by scanning the whole carrier for the element
//! whose row of `e` matches the certificate
//! `e(x0, x) = ∧_y (S(y) → e(y, x))` (dually for meets) at every point.
//! [`LOrderedSet::join_oracle`] re-derives the same answer from the raw
//! defining inequalities and exists to cross-check the certificate route.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::frame::{Frame, FrameElt};
use crate::report::{CertStatus, CheckReport};
use crate::subset::FuzzySubset;

pub mod lattice;
pub mod maps;

pub use lattice::{
    check_distributive, is_complete, is_l_lattice, lattice_laws, normalized_meet_law, DistributivityReport, LatticeCheck,
    LatticeLaw,
};
pub use maps::{has_right_adjoint, is_galois, is_monotone, monotone_violation, AdjointReport};

/// A fuzzy subset of a carrier indexed `0..size`.
pub type Subset = FuzzySubset<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderError {
    ShapeMismatch { row: usize, len: usize, expected: usize },
    /// A table entry is not an element of the frame.
    FrameMismatch { x: usize, y: usize },
    AxiomsViolated(CheckReport),
    /// Two distinct elements certify the same join or meet; impossible
    /// when E3 holds.
    MultipleCertifiers { first: usize, second: usize },
    PointOutOfRange { point: usize, size: usize },
    /// A crisp binary bound needed by the operation does not exist.
    NotALattice { a: usize, b: usize },
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::ShapeMismatch { row, len, expected } => {
                write!(f, "relation row {row} has {len} entries, expected {expected}")
            }
            OrderError::FrameMismatch { x, y } => {
                write!(f, "e({x},{y}) is not an element of the frame")
            }
            OrderError::AxiomsViolated(r) => match r.first() {
                Some(v) => write!(f, "{} violated at {}", v.clause, v.witness),
                None => write!(f, "axioms violated"),
            },
            OrderError::MultipleCertifiers { first, second } => {
                write!(f, "both {first} and {second} certify the same bound")
            }
            OrderError::PointOutOfRange { point, size } => {
                write!(f, "point {point} outside carrier of size {size}")
            }
            OrderError::NotALattice { a, b } => {
                write!(f, "crisp bound of {a} and {b} does not exist")
            }
        }
    }
}

/// Outcome of a join or meet search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOpResult {
    /// The certified element, if any.
    pub element: Option<usize>,
    /// Right-hand side of the certificate equality at every carrier point.
    pub certificate: Vec<FrameElt>,
}

impl LatticeOpResult {
    pub fn exists(&self) -> bool {
        self.element.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Join,
    Meet,
}

/// A finite carrier with an L-valued relation.
///
/// [`LOrderedSet::new`] enforces E1–E3; [`LOrderedSet::from_table`] only
/// checks shape, so relations that break the axioms can still be studied.
#[derive(Clone, Debug)]
pub struct LOrderedSet {
    frame: Arc<Frame>,
    size: usize,
    e: Vec<FrameElt>,
}

impl PartialEq for LOrderedSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.e == other.e && *self.frame == *other.frame
    }
}

impl LOrderedSet {
    /// Builds from a square table without checking the axioms.
    pub fn from_table(frame: Arc<Frame>, rows: &[Vec<FrameElt>]) -> Result<Self, OrderError> {
        let n = rows.len();
        let mut e = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(OrderError::ShapeMismatch { row: x, len: row.len(), expected: n });
            }
            for (y, &v) in row.iter().enumerate() {
                if !frame.contains(v) {
                    return Err(OrderError::FrameMismatch { x, y });
                }
                e.push(v);
            }
        }
        Ok(LOrderedSet { frame, size: n, e })
    }

    /// Flat row-major table; caller guarantees shape and frame membership.
    pub(crate) fn from_flat(frame: Arc<Frame>, size: usize, e: Vec<FrameElt>) -> Self {
        debug_assert_eq!(e.len(), size * size);
        LOrderedSet { frame, size, e }
    }

    /// Builds and requires E1–E3.
    pub fn new(frame: Arc<Frame>, rows: &[Vec<FrameElt>]) -> Result<Self, OrderError> {
        let p = Self::from_table(frame, rows)?;
        let report = p.check_axioms();
        if report.holds() {
            Ok(p)
        } else {
            Err(OrderError::AxiomsViolated(report))
        }
    }

    /// `χ_≤` of a crisp relation.
    pub fn crisp(frame: Arc<Frame>, leq: &[Vec<bool>]) -> Result<Self, OrderError> {
        let (top, bot) = (frame.top(), frame.bottom());
        let rows: Vec<Vec<FrameElt>> = leq
            .iter()
            .map(|r| r.iter().map(|&b| if b { top } else { bot }).collect())
            .collect();
        Self::new(frame, &rows)
    }

    /// The crisp chain `0 < 1 < ... < n-1`.
    pub fn crisp_chain(frame: Arc<Frame>, n: usize) -> Self {
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Self::crisp(frame, &leq).expect("chains are partial orders")
    }

    /// `χ_=`: the antichain.
    pub fn discrete(frame: Arc<Frame>, n: usize) -> Self {
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
        Self::crisp(frame, &leq).expect("equality is a partial order")
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_arc(&self) -> &Arc<Frame> {
        &self.frame
    }

    #[inline]
    pub fn e(&self, x: usize, y: usize) -> FrameElt {
        self.e[x * self.size + y]
    }

    pub fn table(&self) -> Vec<Vec<FrameElt>> {
        self.e.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn points(&self) -> core::ops::Range<usize> {
        0..self.size
    }

    /// E1–E3 with witnesses.
    pub fn check_axioms(&self) -> CheckReport {
        self.check_axioms_named(|x| format!("{x}"))
    }

    /// [`check_axioms`](Self::check_axioms) with points shown by `name`.
    pub fn check_axioms_named(&self, name: impl Fn(usize) -> String) -> CheckReport {
        let f = &*self.frame;
        let mut r = CheckReport::new(CertStatus::Certified);
        for x in self.points() {
            r.expect(self.e(x, x) == f.top(), "E1", || format!("x={}", name(x)));
        }
        for x in self.points() {
            for y in self.points() {
                let xy = self.e(x, y);
                for z in self.points() {
                    r.expect(f.leq(f.meet(xy, self.e(y, z)), self.e(x, z)), "E2", || {
                        format!("x={} y={} z={}", name(x), name(y), name(z))
                    });
                }
                if x < y {
                    let sym = xy == f.top() && self.e(y, x) == f.top();
                    r.expect(!sym, "E3", || format!("x={} y={}", name(x), name(y)));
                }
            }
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.satisfies_axioms(true)
    }

    /// E1, E2 and optionally E3, stopping at the first failure.
    pub fn satisfies_axioms(&self, require_e3: bool) -> bool {
        let f = &*self.frame;
        let pts = self.points();
        pts.clone().all(|x| self.e(x, x) == f.top())
            && pts.clone().all(|x| {
                pts.clone().all(|y| {
                    let xy = self.e(x, y);
                    (!require_e3 || x == y || xy != f.top() || self.e(y, x) != f.top())
                        && pts.clone().all(|z| f.leq(f.meet(xy, self.e(y, z)), self.e(x, z)))
                })
            })
    }

    #[inline]
    pub fn crisp_leq(&self, x: usize, y: usize) -> bool {
        self.e(x, y) == self.frame.top()
    }

    /// `≤_e` as a boolean table.
    pub fn induced_crisp_order(&self) -> Vec<Vec<bool>> {
        self.points()
            .map(|x| self.points().map(|y| self.crisp_leq(x, y)).collect())
            .collect()
    }

    fn check_subset(&self, s: &Subset) -> Result<(), OrderError> {
        match s.support().find(|&&p| p >= self.size) {
            Some(&point) => Err(OrderError::PointOutOfRange { point, size: self.size }),
            None => Ok(()),
        }
    }

    /// `↓φ(x) = ∨_{x'} φ(x') ∧ e(x, x')`.
    pub fn down_closure(&self, phi: &Subset) -> Subset {
        let f = &*self.frame;
        FuzzySubset::from_pairs(
            f,
            self.points().map(|x| {
                (x, f.join_all(phi.iter().map(|(&x2, v)| f.meet(v, self.e(x, x2)))))
            }),
        )
    }

    /// `↑φ(x) = ∨_{x'} φ(x') ∧ e(x', x)`.
    pub fn up_closure(&self, phi: &Subset) -> Subset {
        let f = &*self.frame;
        FuzzySubset::from_pairs(
            f,
            self.points().map(|x| {
                (x, f.join_all(phi.iter().map(|(&x2, v)| f.meet(v, self.e(x2, x)))))
            }),
        )
    }

    /// Certificate right-hand side at every point: `∧_y S(y) → e(y,x)` for
    /// joins, `∧_y S(y) → e(x,y)` for meets. Only the support contributes.
    fn certificate(&self, s: &Subset, bound: Bound) -> Vec<FrameElt> {
        let f = &*self.frame;
        self.points()
            .map(|x| {
                f.meet_all(s.iter().map(|(&y, v)| {
                    let rel = match bound {
                        Bound::Join => self.e(y, x),
                        Bound::Meet => self.e(x, y),
                    };
                    f.imp(v, rel)
                }))
            })
            .collect()
    }

    /// Every carrier element satisfying the certificate equality.
    pub fn certifiers(&self, s: &Subset, bound: Bound) -> Vec<usize> {
        let cert = self.certificate(s, bound);
        self.points()
            .filter(|&x0| {
                self.points().all(|x| {
                    let rel = match bound {
                        Bound::Join => self.e(x0, x),
                        Bound::Meet => self.e(x, x0),
                    };
                    rel == cert[x]
                })
            })
            .collect()
    }

    fn certified(&self, s: &Subset, bound: Bound) -> Result<LatticeOpResult, OrderError> {
        self.check_subset(s)?;
        let found = self.certifiers(s, bound);
        if let [first, second, ..] = found[..] {
            return Err(OrderError::MultipleCertifiers { first, second });
        }
        Ok(LatticeOpResult { element: found.first().copied(), certificate: self.certificate(s, bound) })
    }

    /// `⊔S` via the certificate equality.
    pub fn join(&self, s: &Subset) -> Result<LatticeOpResult, OrderError> {
        self.certified(s, Bound::Join)
    }

    /// `⊓S` via the certificate equality.
    pub fn meet(&self, s: &Subset) -> Result<LatticeOpResult, OrderError> {
        self.certified(s, Bound::Meet)
    }

    pub fn bound(&self, s: &Subset, bound: Bound) -> Result<LatticeOpResult, OrderError> {
        self.certified(s, bound)
    }

    /// Candidates satisfying the defining inequalities directly, quantifying
    /// over the whole carrier rather than the support.
    pub fn oracle_candidates(&self, s: &Subset, bound: Bound) -> Vec<usize> {
        let f = &*self.frame;
        let n = self.size;
        // (J2)/(M2) left-hand side, one value per x
        let lower: Vec<FrameElt> = (0..n)
            .map(|x| {
                let mut acc = f.top();
                for y in 0..n {
                    let rel = match bound {
                        Bound::Join => self.e(y, x),
                        Bound::Meet => self.e(x, y),
                    };
                    acc = f.meet(acc, f.imp(s.get(&y), rel));
                }
                acc
            })
            .collect();
        (0..n)
            .filter(|&x0| {
                (0..n).all(|x| {
                    let (first, second) = match bound {
                        Bound::Join => (self.e(x, x0), self.e(x0, x)),
                        Bound::Meet => (self.e(x0, x), self.e(x, x0)),
                    };
                    f.leq(s.get(&x), first) && f.leq(lower[x], second)
                })
            })
            .collect()
    }

    pub fn join_oracle(&self, s: &Subset) -> Result<LatticeOpResult, OrderError> {
        self.oracle(s, Bound::Join)
    }

    pub fn meet_oracle(&self, s: &Subset) -> Result<LatticeOpResult, OrderError> {
        self.oracle(s, Bound::Meet)
    }

    fn oracle(&self, s: &Subset, bound: Bound) -> Result<LatticeOpResult, OrderError> {
        self.check_subset(s)?;
        let found = self.oracle_candidates(s, bound);
        if let [first, second, ..] = found[..] {
            return Err(OrderError::MultipleCertifiers { first, second });
        }
        Ok(LatticeOpResult { element: found.first().copied(), certificate: Vec::new() })
    }

    /// Least upper bound of `{a, b}` in `≤_e`.
    pub fn crisp_join(&self, a: usize, b: usize) -> Option<usize> {
        self.least(|c| self.crisp_leq(a, c) && self.crisp_leq(b, c))
    }

    /// Greatest lower bound of `{a, b}` in `≤_e`.
    pub fn crisp_meet(&self, a: usize, b: usize) -> Option<usize> {
        self.greatest(|c| self.crisp_leq(c, a) && self.crisp_leq(c, b))
    }

    /// Join of a crisp set; the empty set gives the least element.
    pub fn crisp_join_all(&self, pts: impl IntoIterator<Item = usize>) -> Option<usize> {
        let pts: Vec<usize> = pts.into_iter().collect();
        self.least(|c| pts.iter().all(|&p| self.crisp_leq(p, c)))
    }

    /// Meet of a crisp set; the empty set gives the greatest element.
    pub fn crisp_meet_all(&self, pts: impl IntoIterator<Item = usize>) -> Option<usize> {
        let pts: Vec<usize> = pts.into_iter().collect();
        self.greatest(|c| pts.iter().all(|&p| self.crisp_leq(c, p)))
    }

    /// Least element of `{c | pred(c)}` in one pass plus a verification pass.
    fn least(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for c in self.points().filter(|&c| pred(c)) {
            best = match best {
                Some(b) if !self.crisp_leq(c, b) => Some(b),
                _ => Some(c),
            };
        }
        let b = best?;
        self.points()
            .filter(|&c| pred(c))
            .all(|c| self.crisp_leq(b, c))
            .then_some(b)
    }

    fn greatest(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for c in self.points().filter(|&c| pred(c)) {
            best = match best {
                Some(b) if !self.crisp_leq(b, c) => Some(b),
                _ => Some(c),
            };
        }
        let b = best?;
        self.points()
            .filter(|&c| pred(c))
            .all(|c| self.crisp_leq(c, b))
            .then_some(b)
    }

    pub fn describe(&self, s: &Subset) -> String {
        s.describe(&self.frame, |p| format!("{p}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn chain3() -> Arc<Frame> {
        Arc::new(Frame::chain(3).unwrap())
    }

    /// Two points `p`, `q` with `e(p,q) = e(q,p) = m`.
    pub(crate) fn m_symmetric() -> LOrderedSet {
        let f = chain3();
        let (m, one) = (f.parse("m").unwrap(), f.top());
        LOrderedSet::new(f, &[vec![one, m], vec![m, one]]).unwrap()
    }

    #[test]
    fn axioms() {
        let p = m_symmetric();
        assert!(p.is_valid());
        let f = chain3();
        let one = f.top();
        let bad = LOrderedSet::from_table(f.clone(), &[vec![one, one], vec![one, one]]).unwrap();
        let r = bad.check_axioms();
        assert!(!r.clause_holds("E3"));
        assert_eq!(r.violations[0].witness, "x=0 y=1");
        assert!(matches!(
            LOrderedSet::from_table(f.clone(), &[vec![FrameElt(9)]]),
            Err(OrderError::FrameMismatch { x: 0, y: 0 })
        ));
        assert!(matches!(
            LOrderedSet::from_table(f, &[vec![one, one], vec![one]]),
            Err(OrderError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn induced_order() {
        let f = chain3();
        let c = LOrderedSet::crisp_chain(f.clone(), 3);
        let leq: Vec<Vec<bool>> = (0..3).map(|a| (0..3).map(|b| a <= b).collect()).collect();
        assert_eq!(c.induced_crisp_order(), leq);
        let d = m_symmetric().induced_crisp_order();
        assert_eq!(d, vec![vec![true, false], vec![false, true]]);
    }

    #[test]
    fn closures() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let c = LOrderedSet::crisp_chain(f.clone(), 3);
        let top_pt = Subset::crisp(&f, [2usize]);
        assert_eq!(c.down_closure(&top_pt), Subset::crisp(&f, [0usize, 1, 2]));
        assert!(c.down_closure(&Subset::empty(&f)).is_empty());

        let p = m_symmetric();
        let phi = Subset::singleton(&f, 0, m);
        let down = p.down_closure(&phi);
        assert_eq!(down.get(&0), m);
        assert_eq!(down.get(&1), m);
        assert_eq!(p.up_closure(&phi), down);
    }

    #[test]
    fn joins_and_meets() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        // crisp diamond 0 < 1, 2 < 3
        let leq = vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ];
        let d = LOrderedSet::crisp(f.clone(), &leq).unwrap();
        let pair = Subset::crisp(&f, [1usize, 2]);
        assert_eq!(d.join(&pair).unwrap().element, Some(3));
        assert_eq!(d.meet(&pair).unwrap().element, Some(0));
        for x in 0..4 {
            let s = Subset::crisp(&f, [x]);
            assert_eq!(d.join(&s).unwrap().element, Some(x));
            assert_eq!(d.meet(&s).unwrap().element, Some(x));
        }

        let p = m_symmetric();
        let s = Subset::singleton(&f, 0, m);
        assert_eq!(p.join(&s).unwrap().element, None);
        assert_eq!(p.join_oracle(&s).unwrap().element, None);
        // empty subset: least element of ≤_e, which the antichain lacks
        assert_eq!(p.join(&Subset::empty(&f)).unwrap().element, None);
        assert_eq!(d.join(&Subset::empty(&f)).unwrap().element, Some(0));
        assert_eq!(d.meet(&Subset::empty(&f)).unwrap().element, Some(3));
        assert!(matches!(
            d.join(&Subset::crisp(&f, [7usize])),
            Err(OrderError::PointOutOfRange { point: 7, .. })
        ));
    }

    #[test]
    fn crisp_bounds() {
        let f = chain3();
        let c = LOrderedSet::crisp_chain(f.clone(), 4);
        assert_eq!(c.crisp_join(1, 3), Some(3));
        assert_eq!(c.crisp_meet(1, 3), Some(1));
        assert_eq!(c.crisp_join_all([]), Some(0));
        assert_eq!(c.crisp_meet_all([]), Some(3));
        let a = LOrderedSet::discrete(f, 2);
        assert_eq!(a.crisp_join(0, 1), None);
        assert_eq!(a.crisp_meet(0, 0), Some(0));
    }

    #[test]
    fn duplicate_certifiers_without_e3() {
        let f = chain3();
        let one = f.top();
        let bad = LOrderedSet::from_table(f.clone(), &[vec![one, one], vec![one, one]]).unwrap();
        let s = Subset::crisp(&f, [0usize]);
        assert_eq!(bad.certifiers(&s, Bound::Join), vec![0, 1]);
        assert!(matches!(bad.join(&s), Err(OrderError::MultipleCertifiers { first: 0, second: 1 })));
    }
}
