//! Finite frames: finite distributive lattices read as complete Heyting
//! algebras, with every operation tabulated at construction.
//!
//! Elements are ordinals into the carrier. Canonical numberings:
//!
//! * [`FrameBuilder::chain`] numbers bottom-up, `0 < 1 < ... < n-1`;
//! * [`FrameBuilder::boolean`] numbers subsets of the atoms by bitmask;
//! * [`FrameBuilder::product`] numbers pairs row-major, `i * |g| + j`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default limit on carrier size. Tables are quadratic in the size.
pub const DEFAULT_CAP: usize = 64;

/// An element of a [`Frame`], identified by its position in the carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameElt(pub u16);

impl FrameElt {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FrameElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderProperty {
    Reflexive,
    Antisymmetric,
    Transitive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Meet,
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameError {
    Empty,
    NotSquare { row: usize, len: usize, expected: usize },
    SizeLimitExceeded { size: usize, cap: usize },
    NotAPartialOrder { property: OrderProperty, witness: Vec<usize> },
    NotALattice { a: usize, b: usize, missing: BoundKind },
    NotDistributive { a: usize, b: usize, c: usize },
    BadNames(String),
}

impl fmt::Display for FrameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameError::Empty => write!(f, "frame carrier is empty"),
            FrameError::NotSquare { row, len, expected } => {
                write!(f, "order table row {row} has {len} entries, expected {expected}")
            }
            FrameError::SizeLimitExceeded { size, cap } => {
                write!(f, "frame of size {size} exceeds the carrier cap {cap}")
            }
            FrameError::NotAPartialOrder { property, witness } => {
                write!(f, "relation is not {property:?} (witness {witness:?})")
            }
            FrameError::NotALattice { a, b, missing } => {
                write!(f, "elements {a} and {b} have no {missing:?}")
            }
            FrameError::NotDistributive { a, b, c } => write!(
                f,
                "lattice is not distributive: a∧(b∨c) ≠ (a∧b)∨(a∧c) at ({a}, {b}, {c})"
            ),
            FrameError::BadNames(msg) => write!(f, "bad element names: {msg}"),
        }
    }
}

/// A finite frame with precomputed order, meet, join and residuum tables.
///
/// Immutable once built; every accepted frame satisfies the distributive
/// law and the residuation adjunction `a∧x ≤ b ⟺ x ≤ a→b`.
#[derive(Clone, Debug)]
pub struct Frame {
    size: usize,
    names: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<FrameElt>,
    join: Vec<FrameElt>,
    imp: Vec<FrameElt>,
    bottom: FrameElt,
    top: FrameElt,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.leq == other.leq
    }
}

impl Eq for Frame {}

/// Builds frames under a configurable carrier cap.
#[derive(Clone, Copy, Debug)]
pub struct FrameBuilder {
    pub cap: usize,
}

impl Default for FrameBuilder {
    fn default() -> Self {
        FrameBuilder { cap: DEFAULT_CAP }
    }
}

impl FrameBuilder {
    pub fn new(cap: usize) -> Self {
        FrameBuilder { cap }
    }

    /// Validates `leq` and tabulates the frame. Names default to decimal
    /// indices.
    pub fn from_leq(&self, leq: &[Vec<bool>]) -> Result<Frame, FrameError> {
        let names = (0..leq.len()).map(|i| i.to_string()).collect();
        self.from_leq_named(leq, names)
    }

    pub fn from_leq_named(&self, leq: &[Vec<bool>], names: Vec<String>) -> Result<Frame, FrameError> {
        let n = leq.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        if n > self.cap {
            return Err(FrameError::SizeLimitExceeded { size: n, cap: self.cap });
        }
        for (row, r) in leq.iter().enumerate() {
            if r.len() != n {
                return Err(FrameError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        if names.len() != n {
            return Err(FrameError::BadNames(format!("{} names for {} elements", names.len(), n)));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(FrameError::BadNames(format!("element {i} has an empty name")));
            }
            if names[..i].contains(a) {
                return Err(FrameError::BadNames(format!("duplicate name {a:?}")));
            }
        }
        let flat: Vec<bool> = leq.iter().flat_map(|r| r.iter().copied()).collect();
        let at = |a: usize, b: usize| flat[a * n + b];

        for a in 0..n {
            if !at(a, a) {
                return Err(FrameError::NotAPartialOrder {
                    property: OrderProperty::Reflexive,
                    witness: vec![a],
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && at(a, b) && at(b, a) {
                    return Err(FrameError::NotAPartialOrder {
                        property: OrderProperty::Antisymmetric,
                        witness: vec![a, b],
                    });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !at(a, b) {
                    continue;
                }
                for c in 0..n {
                    if at(b, c) && !at(a, c) {
                        return Err(FrameError::NotAPartialOrder {
                            property: OrderProperty::Transitive,
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }

        let mut meet = vec![FrameElt(0); n * n];
        let mut join = vec![FrameElt(0); n * n];
        for a in 0..n {
            for b in a..n {
                let glb = extremal_bound(n, &at, |x| at(x, a) && at(x, b), true)
                    .ok_or(FrameError::NotALattice { a, b, missing: BoundKind::Meet })?;
                let lub = extremal_bound(n, &at, |x| at(a, x) && at(b, x), false)
                    .ok_or(FrameError::NotALattice { a, b, missing: BoundKind::Join })?;
                meet[a * n + b] = elt(glb);
                meet[b * n + a] = elt(glb);
                join[a * n + b] = elt(lub);
                join[b * n + a] = elt(lub);
            }
        }
        let bottom = (0..n).find(|&x| (0..n).all(|y| at(x, y))).ok_or(FrameError::NotALattice {
            a: 0,
            b: 0,
            missing: BoundKind::Meet,
        })?;
        let top = (0..n).find(|&x| (0..n).all(|y| at(y, x))).ok_or(FrameError::NotALattice {
            a: 0,
            b: 0,
            missing: BoundKind::Join,
        })?;

        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = meet[a * n + join[b * n + c].index()];
                    let ab = meet[a * n + b].index();
                    let ac = meet[a * n + c].index();
                    if lhs != join[ab * n + ac] {
                        return Err(FrameError::NotDistributive { a, b, c });
                    }
                }
            }
        }

        let mut imp = vec![FrameElt(0); n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = bottom;
                for x in 0..n {
                    if at(meet[a * n + x].index(), b) {
                        acc = join[acc * n + x].index();
                    }
                }
                imp[a * n + b] = elt(acc);
            }
        }

        Ok(Frame {
            size: n,
            names,
            leq: flat,
            meet,
            join,
            imp,
            bottom: elt(bottom),
            top: elt(top),
        })
    }

    /// The `n`-element chain. Names: `0`, `m` (or `m1`, `m2`, ...), `1`.
    pub fn chain(&self, n: usize) -> Result<Frame, FrameError> {
        if n == 0 {
            return Err(FrameError::Empty);
        }
        if n > self.cap {
            return Err(FrameError::SizeLimitExceeded { size: n, cap: self.cap });
        }
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        let names = (0..n)
            .map(|i| match (i, n) {
                (0, _) => "0".to_string(),
                (i, n) if i == n - 1 => "1".to_string(),
                (_, 3) => "m".to_string(),
                (i, _) => format!("m{i}"),
            })
            .collect();
        self.from_leq_named(&leq, names)
    }

    /// The powerset of `k` atoms. Atoms are named `a`, `b`, ...; other
    /// elements by their letters, with `0` and `1` for the extremes.
    pub fn boolean(&self, k: usize) -> Result<Frame, FrameError> {
        if k >= usize::BITS as usize || (1usize << k) > self.cap {
            return Err(FrameError::SizeLimitExceeded {
                size: 1usize.checked_shl(k as u32).unwrap_or(usize::MAX),
                cap: self.cap,
            });
        }
        let n = 1usize << k;
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a & b == a).collect()).collect();
        let names = (0..n)
            .map(|mask| {
                if mask == 0 {
                    "0".to_string()
                } else if mask == n - 1 {
                    "1".to_string()
                } else {
                    (0..k)
                        .filter(|bit| mask & (1 << bit) != 0)
                        .map(|bit| (b'a' + bit as u8) as char)
                        .collect()
                }
            })
            .collect();
        self.from_leq_named(&leq, names)
    }

    /// Componentwise product. Pair `(i, j)` gets index `i * |g| + j`.
    pub fn product(&self, f: &Frame, g: &Frame) -> Result<Frame, FrameError> {
        let n = f.size * g.size;
        if n > self.cap {
            return Err(FrameError::SizeLimitExceeded { size: n, cap: self.cap });
        }
        let split = |i: usize| (elt(i / g.size), elt(i % g.size));
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                let (a1, a2) = split(a);
                (0..n)
                    .map(|b| {
                        let (b1, b2) = split(b);
                        f.leq(a1, b1) && g.leq(a2, b2)
                    })
                    .collect()
            })
            .collect();
        let names = (0..n)
            .map(|i| {
                let (x, y) = split(i);
                format!("({},{})", f.name(x), g.name(y))
            })
            .collect();
        self.from_leq_named(&leq, names)
    }
}

fn elt(i: usize) -> FrameElt {
    FrameElt(i as u16)
}

/// Greatest (`greatest = true`) or least element of `{x | pred(x)}`.
fn extremal_bound(
    n: usize,
    at: &impl Fn(usize, usize) -> bool,
    pred: impl Fn(usize) -> bool,
    greatest: bool,
) -> Option<usize> {
    let bounds: Vec<usize> = (0..n).filter(|&x| pred(x)).collect();
    bounds.iter().copied().find(|&c| {
        bounds
            .iter()
            .all(|&d| if greatest { at(d, c) } else { at(c, d) })
    })
}

impl Frame {
    pub fn chain(n: usize) -> Result<Frame, FrameError> {
        FrameBuilder::default().chain(n)
    }

    pub fn boolean(k: usize) -> Result<Frame, FrameError> {
        FrameBuilder::default().boolean(k)
    }

    pub fn product(f: &Frame, g: &Frame) -> Result<Frame, FrameError> {
        FrameBuilder::default().product(f, g)
    }

    pub fn from_leq(leq: &[Vec<bool>]) -> Result<Frame, FrameError> {
        FrameBuilder::default().from_leq(leq)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn top(&self) -> FrameElt {
        self.top
    }

    #[inline]
    pub fn bottom(&self) -> FrameElt {
        self.bottom
    }

    pub fn elements(&self) -> impl Iterator<Item = FrameElt> + Clone {
        (0..self.size).map(elt)
    }

    #[inline]
    pub fn leq(&self, a: FrameElt, b: FrameElt) -> bool {
        self.leq[a.index() * self.size + b.index()]
    }

    #[inline]
    pub fn meet(&self, a: FrameElt, b: FrameElt) -> FrameElt {
        self.meet[a.index() * self.size + b.index()]
    }

    #[inline]
    pub fn join(&self, a: FrameElt, b: FrameElt) -> FrameElt {
        self.join[a.index() * self.size + b.index()]
    }

    /// Residuum `a → b`, the largest `x` with `a ∧ x ≤ b`.
    #[inline]
    pub fn imp(&self, a: FrameElt, b: FrameElt) -> FrameElt {
        self.imp[a.index() * self.size + b.index()]
    }

    /// Meet of a set; the empty meet is top.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = FrameElt>) -> FrameElt {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a set; the empty join is bottom.
    pub fn join_all(&self, xs: impl IntoIterator<Item = FrameElt>) -> FrameElt {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn contains(&self, a: FrameElt) -> bool {
        a.index() < self.size
    }

    pub fn name(&self, a: FrameElt) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Looks an element up by name, falling back to a decimal index.
    pub fn parse(&self, s: &str) -> Option<FrameElt> {
        let s = s.trim();
        if let Some(i) = self.names.iter().position(|n| n == s) {
            return Some(elt(i));
        }
        s.strip_prefix('#')
            .unwrap_or(s)
            .parse::<usize>()
            .ok()
            .filter(|&i| i < self.size)
            .map(elt)
    }

    pub fn leq_table(&self) -> Vec<Vec<bool>> {
        self.leq.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    /// Length of the longest strictly increasing chain, counted in steps.
    pub fn height(&self) -> usize {
        // elements sorted by number of elements below them form a linear extension
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&a| (0..self.size).filter(|&b| self.leq[b * self.size + a]).count());
        let mut depth = vec![0usize; self.size];
        for (pos, &a) in order.iter().enumerate() {
            for &b in &order[..pos] {
                if b != a && self.leq[b * self.size + a] {
                    depth[a] = depth[a].max(depth[b] + 1);
                }
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }
}

/// Identities and laws checked exhaustively by [`verify_frame_laws`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameLaw {
    /// `(x∧y)→z = x→(y→z)`
    HeytingCurry,
    /// `x→(y∧z) = (x→y)∧(x→z)`
    HeytingImpMeet,
    /// `(x∨y)→z = (x→z)∧(y→z)`
    HeytingJoinImp,
    /// `a∧x ≤ b ⟺ x ≤ a→b`
    Residuation,
    /// `a→b = 1 ⟺ a ≤ b`
    ImpTop,
    Commutative,
    Associative,
    Idempotent,
    Absorptive,
}

impl FrameLaw {
    pub fn id(self) -> &'static str {
        match self {
            FrameLaw::HeytingCurry => "heyting-i",
            FrameLaw::HeytingImpMeet => "heyting-ii",
            FrameLaw::HeytingJoinImp => "heyting-iii",
            FrameLaw::Residuation => "residuation",
            FrameLaw::ImpTop => "imp-top",
            FrameLaw::Commutative => "commutative",
            FrameLaw::Associative => "associative",
            FrameLaw::Idempotent => "idempotent",
            FrameLaw::Absorptive => "absorptive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: FrameLaw,
    pub witness: Vec<FrameElt>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrameReport {
    pub checked: u64,
    pub violations: Vec<LawViolation>,
}

impl FrameReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three Heyting identities over every triple.
pub fn verify_heyting_identities(f: &Frame) -> FrameReport {
    let mut report = FrameReport::default();
    for x in f.elements() {
        for y in f.elements() {
            for z in f.elements() {
                report.checked += 1;
                let w = || vec![x, y, z];
                if f.imp(f.meet(x, y), z) != f.imp(x, f.imp(y, z)) {
                    report.violations.push(LawViolation { law: FrameLaw::HeytingCurry, witness: w() });
                }
                if f.imp(x, f.meet(y, z)) != f.meet(f.imp(x, y), f.imp(x, z)) {
                    report.violations.push(LawViolation { law: FrameLaw::HeytingImpMeet, witness: w() });
                }
                if f.imp(f.join(x, y), z) != f.meet(f.imp(x, z), f.imp(y, z)) {
                    report.violations.push(LawViolation { law: FrameLaw::HeytingJoinImp, witness: w() });
                }
            }
        }
    }
    report
}

/// Heyting identities plus residuation and the lattice laws of the tables.
pub fn verify_frame_laws(f: &Frame) -> FrameReport {
    let mut report = verify_heyting_identities(f);
    let mut push = |law, witness: Vec<FrameElt>| report.violations.push(LawViolation { law, witness });
    for a in f.elements() {
        if f.meet(a, a) != a || f.join(a, a) != a {
            push(FrameLaw::Idempotent, vec![a]);
        }
        for b in f.elements() {
            if (f.imp(a, b) == f.top()) != f.leq(a, b) {
                push(FrameLaw::ImpTop, vec![a, b]);
            }
            if f.meet(a, b) != f.meet(b, a) || f.join(a, b) != f.join(b, a) {
                push(FrameLaw::Commutative, vec![a, b]);
            }
            if f.meet(a, f.join(a, b)) != a || f.join(a, f.meet(a, b)) != a {
                push(FrameLaw::Absorptive, vec![a, b]);
            }
            for x in f.elements() {
                if f.leq(f.meet(a, x), b) != f.leq(x, f.imp(a, b)) {
                    push(FrameLaw::Residuation, vec![a, b, x]);
                }
                if f.meet(f.meet(a, b), x) != f.meet(a, f.meet(b, x))
                    || f.join(f.join(a, b), x) != f.join(a, f.join(b, x))
                {
                    push(FrameLaw::Associative, vec![a, b, x]);
                }
            }
        }
    }
    let n = f.size() as u64;
    report.checked += n + n * n + n * n * n;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_scan(f: &Frame, a: FrameElt, b: FrameElt) -> FrameElt {
        f.join_all(f.elements().filter(|&x| f.leq(f.meet(a, x), b)))
    }

    #[test]
    fn three_chain_residuum() {
        let f = Frame::chain(3).unwrap();
        let (zero, m, one) = (FrameElt(0), FrameElt(1), FrameElt(2));
        assert_eq!(f.imp(one, m), m);
        assert_eq!(f.imp(m, zero), zero);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.imp(a, b), by_scan(&f, a, b));
            }
        }
        assert_eq!(f.parse("m"), Some(m));
        assert_eq!(f.name(one), "1");
    }

    #[test]
    fn bottom_implies_everything() {
        for f in [Frame::chain(4).unwrap(), Frame::boolean(2).unwrap()] {
            for x in f.elements() {
                assert_eq!(f.imp(f.bottom(), x), f.top());
            }
        }
    }

    #[test]
    fn m3_and_n5_rejected() {
        // 0 < a, b, c < 1
        let mut m3 = vec![vec![false; 5]; 5];
        for i in 0..5 {
            m3[i][i] = true;
            m3[0][i] = true;
            m3[i][4] = true;
        }
        assert!(matches!(Frame::from_leq(&m3), Err(FrameError::NotDistributive { .. })));

        // 0 < a < b < 1, 0 < c < 1
        let pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)];
        let mut n5 = vec![vec![false; 5]; 5];
        for i in 0..5 {
            n5[i][i] = true;
        }
        for (a, b) in pairs {
            n5[a][b] = true;
        }
        assert!(matches!(Frame::from_leq(&n5), Err(FrameError::NotDistributive { .. })));
    }

    #[test]
    fn malformed_tables() {
        assert_eq!(Frame::from_leq(&[]), Err(FrameError::Empty));
        let r = Frame::from_leq(&[vec![true, true], vec![true]]);
        assert!(matches!(r, Err(FrameError::NotSquare { row: 1, .. })));
        let r = Frame::from_leq(&[vec![true, true], vec![true, true]]);
        assert!(matches!(
            r,
            Err(FrameError::NotAPartialOrder { property: OrderProperty::Antisymmetric, .. })
        ));
        // two incomparable points: no join
        let r = Frame::from_leq(&[vec![true, false], vec![false, true]]);
        assert!(matches!(r, Err(FrameError::NotALattice { .. })));
    }

    #[test]
    fn constructors() {
        let two = Frame::chain(2).unwrap();
        assert_eq!(two, Frame::boolean(1).unwrap());
        let d = Frame::boolean(2).unwrap();
        assert_eq!(d.size(), 4);
        let (a, b) = (d.parse("a").unwrap(), d.parse("b").unwrap());
        assert_eq!(d.meet(a, b), d.bottom());
        assert_eq!(d.meet_all([a, b]), d.bottom());
        assert_eq!(d.imp(a, d.bottom()), b);
        let p = Frame::product(&two, &Frame::chain(3).unwrap()).unwrap();
        assert_eq!(p.size(), 6);
        assert_eq!(p.name(p.top()), "(1,1)");
        assert_eq!(p.top(), FrameElt(5));
        assert!(matches!(
            FrameBuilder::new(8).chain(9),
            Err(FrameError::SizeLimitExceeded { size: 9, cap: 8 })
        ));
        assert!(FrameBuilder::default().boolean(7).is_err());
    }

    #[test]
    fn subset_joins() {
        let f = Frame::chain(3).unwrap();
        assert_eq!(f.join_all([]), f.bottom());
        assert_eq!(f.meet_all([]), f.top());
        assert_eq!(f.join_all(f.elements()), f.top());
        assert_eq!(f.height(), 2);
        assert_eq!(Frame::boolean(3).unwrap().height(), 3);
    }

    #[test]
    fn zoo_satisfies_laws() {
        let mut zoo = Vec::new();
        for n in 1..=8 {
            zoo.push(Frame::chain(n).unwrap());
        }
        for k in 0..=3 {
            zoo.push(Frame::boolean(k).unwrap());
        }
        zoo.push(Frame::product(&zoo[1], &zoo[2]).unwrap());
        for f in &zoo {
            let r = verify_frame_laws(f);
            assert!(r.valid(), "{:?}", r.violations);
        }
    }
}
