//! Group backends: finite groups given by Cayley tables and free abelian
//! groups `ℤⁿ`, plus the finite quantification domains ([`Domain`]) every
//! group-level check runs over.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::report::CertStatus;

mod map;

pub use map::{CmpOp, Constraint, FnMap, PointMap, RegionMap, Rule, ValueMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupError {
    Empty,
    NotSquare { row: usize, len: usize },
    EntryOutOfRange { row: usize, col: usize },
    NoIdentity,
    NoInverse(usize),
    NotAssociative(usize, usize, usize),
    RankTooLarge(usize),
    WindowMissing,
    BadWindow(String),
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::Empty => write!(f, "empty Cayley table"),
            GroupError::NotSquare { row, len } => write!(f, "Cayley row {row} has {len} entries"),
            GroupError::EntryOutOfRange { row, col } => {
                write!(f, "Cayley entry ({row},{col}) is not an element")
            }
            GroupError::NoIdentity => write!(f, "no identity element"),
            GroupError::NoInverse(x) => write!(f, "element {x} has no inverse"),
            GroupError::NotAssociative(a, b, c) => write!(f, "({a}+{b})+{c} ≠ {a}+({b}+{c})"),
            GroupError::RankTooLarge(r) => write!(f, "rank {r} exceeds the maximum {MAX_RANK}"),
            GroupError::WindowMissing => write!(f, "a window is required for infinite groups"),
            GroupError::BadWindow(msg) => write!(f, "bad window: {msg}"),
        }
    }
}

/// A group written additively.
pub trait GroupBackend: Clone + Send + Sync + 'static {
    type Elem: Copy + Ord + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn is_abelian(&self) -> bool;

    /// The quantification domain: all elements for finite groups, the
    /// window's points for infinite ones.
    fn domain(&self, window: Option<&Window>) -> Result<Domain<Self::Elem>, GroupError>;

    /// Human-readable rendering, also accepted back by [`GroupBackend::parse`].
    fn show(&self, a: Self::Elem) -> String;
    fn parse(&self, s: &str) -> Option<Self::Elem>;

    /// Position in a finite carrier, for table-backed relations.
    fn index_of(&self, _a: Self::Elem) -> Option<usize> {
        None
    }

    /// `a - b`, i.e. `a + (-b)`.
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    /// `x + y - x`.
    fn conj(&self, x: Self::Elem, y: Self::Elem) -> Self::Elem {
        self.add(self.add(x, y), self.neg(x))
    }

    /// `n·a`, with `0·a = 0`.
    fn times(&self, n: usize, a: Self::Elem) -> Self::Elem {
        (0..n).fold(self.zero(), |acc, _| self.add(acc, a))
    }

    /// Preference for coset representatives, smaller first; ties go to
    /// the smaller element.
    fn rep_weight(&self, _a: Self::Elem) -> u64 {
        0
    }
}

/// A finite group on `0..order` given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    abelian: bool,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_cayley(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut table = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare { row, len: r.len() });
            }
            for (col, &v) in r.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::EntryOutOfRange { row, col });
                }
                table.push(v);
            }
        }
        let op = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| op(e, x) == x && op(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv = vec![0; n];
        for x in 0..n {
            inv[x] = (0..n)
                .find(|&y| op(x, y) == identity && op(y, x) == identity)
                .ok_or(GroupError::NoInverse(x))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if op(op(a, b), c) != op(a, op(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let abelian = (0..n).all(|a| (0..n).all(|b| op(a, b) == op(b, a)));
        Ok(FiniteGroup { n, table, inv, identity, abelian })
    }

    /// `ℤ_n` with element `k` the residue `k`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_cayley(&rows)
    }

    /// Direct product; pair `(i, j)` gets index `i * |h| + j`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self, GroupError> {
        let n = g.n * h.n;
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let x = g.table[(a / h.n) * g.n + b / h.n];
                        let y = h.table[(a % h.n) * h.n + b % h.n];
                        x * h.n + y
                    })
                    .collect()
            })
            .collect();
        Self::from_cayley(&rows)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn cayley(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.n
    }
}

impl GroupBackend for FiniteGroup {
    type Elem = usize;

    fn zero(&self) -> usize {
        self.identity
    }

    #[inline]
    fn add(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    fn neg(&self, a: usize) -> usize {
        self.inv[a]
    }

    fn is_abelian(&self) -> bool {
        self.abelian
    }

    fn domain(&self, _window: Option<&Window>) -> Result<Domain<usize>, GroupError> {
        Ok(Domain::finite(self))
    }

    fn show(&self, a: usize) -> String {
        format!("{a}")
    }

    fn parse(&self, s: &str) -> Option<usize> {
        s.trim().parse().ok().filter(|&a| a < self.n)
    }

    fn index_of(&self, a: usize) -> Option<usize> {
        (a < self.n).then_some(a)
    }
}

pub const MAX_RANK: usize = 4;

/// An integer vector of length at most [`MAX_RANK`]. Ordering is
/// lexicographic among vectors of equal rank.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZVec {
    rank: u8,
    c: [i64; MAX_RANK],
}

impl ZVec {
    pub fn new(coords: &[i64]) -> Self {
        assert!(coords.len() <= MAX_RANK, "rank exceeds MAX_RANK");
        let mut c = [0; MAX_RANK];
        c[..coords.len()].copy_from_slice(coords);
        ZVec { rank: coords.len() as u8, c }
    }

    pub fn zero(rank: usize) -> Self {
        assert!(rank <= MAX_RANK, "rank exceeds MAX_RANK");
        ZVec { rank: rank as u8, c: [0; MAX_RANK] }
    }

    pub fn coords(&self) -> &[i64] {
        &self.c[..self.rank as usize]
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }
}

impl fmt::Debug for ZVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ZVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank == 1 {
            return write!(f, "{}", self.c[0]);
        }
        write!(f, "(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `ℤ^rank` under componentwise addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeAbelian {
    rank: usize,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Result<Self, GroupError> {
        if rank > MAX_RANK {
            return Err(GroupError::RankTooLarge(rank));
        }
        Ok(FreeAbelian { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elem(&self, coords: &[i64]) -> ZVec {
        debug_assert_eq!(coords.len(), self.rank);
        ZVec::new(coords)
    }
}

impl GroupBackend for FreeAbelian {
    type Elem = ZVec;

    /// Twice the ℓ¹ norm, plus one when the first nonzero coordinate is negative.
    fn rep_weight(&self, a: ZVec) -> u64 {
        let c = a.coords();
        let norm: u64 = c.iter().map(|x| x.unsigned_abs()).sum();
        2 * norm + u64::from(c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0))
    }

    fn zero(&self) -> ZVec {
        ZVec::zero(self.rank)
    }

    #[inline]
    fn add(&self, a: ZVec, b: ZVec) -> ZVec {
        let mut out = a;
        for i in 0..self.rank {
            out.c[i] += b.c[i];
        }
        out
    }

    #[inline]
    fn neg(&self, a: ZVec) -> ZVec {
        let mut out = a;
        for i in 0..self.rank {
            out.c[i] = -a.c[i];
        }
        out
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn domain(&self, window: Option<&Window>) -> Result<Domain<ZVec>, GroupError> {
        let w = window.ok_or(GroupError::WindowMissing)?;
        if w.rank() != self.rank {
            return Err(GroupError::BadWindow(format!(
                "window rank {} does not match group rank {}",
                w.rank(),
                self.rank
            )));
        }
        Ok(Domain::of_window(w))
    }

    fn show(&self, a: ZVec) -> String {
        let coords: Vec<String> = a.coords().iter().map(|x| format!("{x}")).collect();
        coords.join(",")
    }

    fn parse(&self, s: &str) -> Option<ZVec> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords: Option<Vec<i64>> = s.split(',').map(|t| t.trim().parse().ok()).collect();
        coords.filter(|c| c.len() == self.rank).map(|c| ZVec::new(&c))
    }
}

/// A box `lo ≤ x ≤ hi` in `ℤⁿ` containing 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, GroupError> {
        if lo.len() != hi.len() {
            return Err(GroupError::BadWindow("bounds have different lengths".into()));
        }
        if lo.len() > MAX_RANK {
            return Err(GroupError::RankTooLarge(lo.len()));
        }
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if !(*l <= 0 && 0 <= *h) {
                return Err(GroupError::BadWindow(format!(
                    "coordinate {i}: [{l},{h}] does not contain 0"
                )));
            }
        }
        Ok(Window { lo, hi })
    }

    /// `[-r, r]^rank`.
    pub fn cube(rank: usize, r: i64) -> Self {
        Window::new(vec![-r.abs(); rank], vec![r.abs(); rank]).expect("cube contains 0")
    }

    /// The box with every bound multiplied by `k ≥ 1`.
    pub fn scaled(&self, k: i64) -> Window {
        Window { lo: self.lo.iter().map(|x| x * k).collect(), hi: self.hi.iter().map(|x| x * k).collect() }
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn contains(&self, x: &ZVec) -> bool {
        x.rank() == self.rank()
            && x.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (l, h))| l <= c && c <= h)
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> Vec<ZVec> {
        if self.rank() == 0 {
            return vec![ZVec::new(&[])];
        }
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self.lo.clone();
        loop {
            out.push(ZVec::new(&cur));
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = self.lo[i];
            }
        }
    }

    pub fn len(&self) -> usize {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l + 1) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, h)) in self.lo.iter().zip(&self.hi).enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "[{l},{h}]")?;
        }
        Ok(())
    }
}

/// The finite set of group elements a check quantifies over, in a fixed
/// order. Its status says whether verdicts over it are exhaustive for the
/// whole group or only for a window.
#[derive(Clone, Debug)]
pub struct Domain<E: Ord> {
    points: Vec<E>,
    index: BTreeMap<E, usize>,
    window: Option<Window>,
    edge: Vec<bool>,
}

impl<E: Copy + Ord> Domain<E> {
    fn from_points(points: Vec<E>, window: Option<Window>, edge: Vec<bool>) -> Self {
        let index = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        Domain { points, index, window, edge }
    }

    pub fn points(&self) -> &[E] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.index.get(x).copied()
    }

    #[inline]
    pub fn contains(&self, x: &E) -> bool {
        self.index.contains_key(x)
    }

    pub fn window(&self) -> Option<&Window> {
        self.window.as_ref()
    }

    pub fn is_finite_group(&self) -> bool {
        self.window.is_none()
    }

    /// Whether the `i`-th point lies on the boundary of the window.
    #[inline]
    pub fn on_edge(&self, i: usize) -> bool {
        self.edge.get(i).copied().unwrap_or(false)
    }

    /// Status of an exhaustive scan over this domain.
    pub fn status(&self) -> CertStatus {
        match &self.window {
            None => CertStatus::Certified,
            Some(w) => CertStatus::WindowCertified(w.clone()),
        }
    }

    /// Status of a search over this domain that came up empty.
    pub fn not_found(&self) -> CertStatus {
        match &self.window {
            None => CertStatus::Certified,
            Some(w) => CertStatus::NotFoundInWindow(w.clone()),
        }
    }
}

impl Domain<usize> {
    pub fn finite(g: &FiniteGroup) -> Self {
        Domain::from_points(g.elements().collect(), None, Vec::new())
    }
}

impl Domain<ZVec> {
    pub fn of_window(w: &Window) -> Self {
        let points = w.points();
        let edge = points
            .iter()
            .map(|p| p.coords().iter().zip(w.lo().iter().zip(w.hi())).any(|(c, (l, h))| c == l || c == h))
            .collect();
        Domain::from_points(points, Some(w.clone()), edge)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        let z5 = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(z5.add(3, 4), 2);
        assert_eq!(z5.neg(2), 3);
        assert_eq!(z5.sub(1, 3), 3);
        assert!(z5.is_abelian());
        assert_eq!(z5.times(3, 4), 2);
        let k4 = FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(k4.order(), 4);
        assert!((0..4).all(|x| k4.add(x, x) == 0));
    }

    #[test]
    fn bad_cayley_tables() {
        assert_eq!(FiniteGroup::from_cayley(&[]), Err(GroupError::Empty));
        assert!(matches!(
            FiniteGroup::from_cayley(&[vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse(1))
        ));
        assert!(matches!(
            FiniteGroup::from_cayley(&[vec![0, 2], vec![1, 0]]),
            Err(GroupError::EntryOutOfRange { .. })
        ));
        // a quasigroup that is not associative
        let rows = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 2, 0]];
        assert!(FiniteGroup::from_cayley(&rows).is_err());
    }

    #[test]
    fn windows() {
        let w = Window::cube(2, 1);
        let pts = w.points();
        assert_eq!(pts.len(), 9);
        assert_eq!(w.len(), 9);
        assert_eq!(pts[0], ZVec::new(&[-1, -1]));
        assert_eq!(pts[1], ZVec::new(&[-1, 0]));
        assert!(pts.windows(2).all(|p| p[0] < p[1]));
        assert!(w.contains(&ZVec::new(&[1, 0])));
        assert!(!w.contains(&ZVec::new(&[2, 0])));
        assert!(Window::new(vec![1], vec![3]).is_err());
        assert_eq!(format!("{w}"), "[-1,1]x[-1,1]");
        let z = FreeAbelian::new(2).unwrap();
        assert_eq!(z.domain(None).unwrap_err(), GroupError::WindowMissing);
        assert!(z.domain(Some(&Window::cube(1, 3))).is_err());
        assert_eq!(z.parse("(1,-2)"), Some(ZVec::new(&[1, -2])));
        assert_eq!(z.show(ZVec::new(&[1, -2])), "1,-2");
    }
}
