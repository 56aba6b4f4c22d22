//! L-ordered groups: a group backend with an L-order compatible with
//! translations (FOG), window views for joins and meets, fuzzy subset
//! arithmetic, and the automorphism group of a finite L-ordered set.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::enumerate::for_each_assignment;
use crate::frame::{Frame, FrameElt};
use crate::group::{Domain, FiniteGroup, GroupBackend, GroupError, ValueMap};
use crate::order::{is_monotone, Bound, LOrderedSet, OrderError, Subset};
use crate::report::{CertStatus, CheckReport, SearchConfig};
use crate::subset::FuzzySubset;

mod cone;
mod riesz;

pub use cone::{
    cone_extension, cone_closure, cone_of_group, monotone_hom_equivalence, order_from_cone, positive_cone,
    validate_cone_axioms, ClosureResult, ExtensionResult, HomEquivalence,
};
pub use riesz::{
    distributivity_criterion, power_identity, power_identity_pair, riesz_decompose, riesz_meet_inequality,
    riesz_oracle, CriterionReport, RieszOracle,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OgroupError {
    Group(GroupError),
    Order(OrderError),
    /// The relation has no value at a pair the operation needs.
    RelationUndefined(String),
    SupportOutsideWindow(String),
    PreconditionUnmet(String),
    ConeAxiomsFailed(CheckReport),
    /// Some nonzero element has cone value 1, or no bound below 1 exists.
    BoundViolation(String),
    ASetInvalid(String),
    NotAHomomorphism(String),
    /// A crisp binary bound is not certifiable inside the window.
    LatticeOpMissing(String),
    HypothesisFailed { conjunct: &'static str, index: Option<usize> },
    DecompositionUnverified(String),
    SizeLimitExceeded { size: usize, cap: usize },
    TableShape(String),
}

impl fmt::Display for OgroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OgroupError::Group(e) => write!(f, "{e}"),
            OgroupError::Order(e) => write!(f, "{e}"),
            OgroupError::RelationUndefined(w) => write!(f, "relation undefined at {w}"),
            OgroupError::SupportOutsideWindow(w) => write!(f, "support point {w} outside the window"),
            OgroupError::PreconditionUnmet(w) => write!(f, "precondition unmet: {w}"),
            OgroupError::ConeAxiomsFailed(r) => match r.first() {
                Some(v) => write!(f, "cone axiom {} fails at {}", v.clause, v.witness),
                None => write!(f, "cone axioms fail"),
            },
            OgroupError::BoundViolation(w) => write!(f, "bound violation: {w}"),
            OgroupError::ASetInvalid(w) => write!(f, "invalid A-set: {w}"),
            OgroupError::NotAHomomorphism(w) => write!(f, "not a homomorphism: {w}"),
            OgroupError::LatticeOpMissing(w) => write!(f, "lattice operation missing: {w}"),
            OgroupError::HypothesisFailed { conjunct, index } => match index {
                Some(i) => write!(f, "hypothesis {conjunct} fails for i={}", i + 1),
                None => write!(f, "hypothesis {conjunct} fails"),
            },
            OgroupError::DecompositionUnverified(w) => write!(f, "decomposition failed its postcondition: {w}"),
            OgroupError::SizeLimitExceeded { size, cap } => write!(f, "size {size} exceeds cap {cap}"),
            OgroupError::TableShape(w) => write!(f, "bad relation table: {w}"),
        }
    }
}

impl From<GroupError> for OgroupError {
    fn from(e: GroupError) -> Self {
        OgroupError::Group(e)
    }
}

impl From<OrderError> for OgroupError {
    fn from(e: OrderError) -> Self {
        OgroupError::Order(e)
    }
}

type PairFn<E> = Arc<dyn Fn(E, E) -> Option<FrameElt> + Send + Sync>;

/// How `e` is evaluated.
pub enum Relation<E> {
    /// Row-major over the backend's element indices.
    Table { n: usize, e: Vec<FrameElt> },
    /// `e(a, b) = S(b - a)`.
    Cone(Arc<dyn ValueMap<E>>),
    Custom(PairFn<E>),
}

impl<E> Clone for Relation<E> {
    fn clone(&self) -> Self {
        match self {
            Relation::Table { n, e } => Relation::Table { n: *n, e: e.clone() },
            Relation::Cone(s) => Relation::Cone(s.clone()),
            Relation::Custom(f) => Relation::Custom(f.clone()),
        }
    }
}

/// A group with an L-valued relation. Construction does not check the
/// axioms; see [`check_fog`] and [`order_from_cone`].
#[derive(Clone)]
pub struct LOrderedGroup<B: GroupBackend> {
    frame: Arc<Frame>,
    backend: B,
    relation: Relation<B::Elem>,
}

impl<B: GroupBackend> fmt::Debug for LOrderedGroup<B>
where
    B: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.relation {
            Relation::Table { .. } => "table",
            Relation::Cone(_) => "cone",
            Relation::Custom(_) => "custom",
        };
        f.debug_struct("LOrderedGroup").field("backend", &self.backend).field("relation", &kind).finish()
    }
}

impl LOrderedGroup<FiniteGroup> {
    /// `e` given as a table over the group's elements.
    pub fn from_table(frame: Arc<Frame>, group: FiniteGroup, rows: &[Vec<FrameElt>]) -> Result<Self, OgroupError> {
        let n = group.order();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(OgroupError::TableShape(format!("expected {n}x{n}")));
        }
        if let Some((x, y)) = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| !frame.contains(rows[x][y]))
        {
            return Err(OgroupError::Order(OrderError::FrameMismatch { x, y }));
        }
        let e = rows.iter().flatten().copied().collect();
        Ok(LOrderedGroup { frame, backend: group, relation: Relation::Table { n, e } })
    }
}

impl<B: GroupBackend> LOrderedGroup<B> {
    /// `e(a, b) = S(b - a)` without validating the cone axioms.
    pub fn from_cone_unchecked(frame: Arc<Frame>, backend: B, cone: Arc<dyn ValueMap<B::Elem>>) -> Self {
        LOrderedGroup { frame, backend, relation: Relation::Cone(cone) }
    }

    pub fn from_fn(
        frame: Arc<Frame>,
        backend: B,
        f: impl Fn(B::Elem, B::Elem) -> Option<FrameElt> + Send + Sync + 'static,
    ) -> Self {
        LOrderedGroup { frame, backend, relation: Relation::Custom(Arc::new(f)) }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_arc(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn relation(&self) -> &Relation<B::Elem> {
        &self.relation
    }

    #[inline]
    pub fn e(&self, a: B::Elem, b: B::Elem) -> Option<FrameElt> {
        match &self.relation {
            Relation::Table { n, e } => {
                let (i, j) = (self.backend.index_of(a)?, self.backend.index_of(b)?);
                e.get(i * n + j).copied()
            }
            Relation::Cone(s) => s.value(&self.backend.sub(b, a)),
            Relation::Custom(f) => f(a, b),
        }
    }

    /// `e`, failing loudly where it is undefined.
    pub fn e_req(&self, a: B::Elem, b: B::Elem) -> Result<FrameElt, OgroupError> {
        self.e(a, b).ok_or_else(|| {
            OgroupError::RelationUndefined(format!("({}, {})", self.backend.show(a), self.backend.show(b)))
        })
    }

    /// `e(0, x)`.
    pub fn cone_value(&self, x: B::Elem) -> Option<FrameElt> {
        self.e(self.backend.zero(), x)
    }

    pub fn show(&self, a: B::Elem) -> String {
        self.backend.show(a)
    }

    pub fn describe(&self, s: &FuzzySubset<B::Elem>) -> String {
        s.describe(&self.frame, |p| self.backend.show(*p))
    }

    /// Tabulates `e` over the domain as an L-ordered set.
    pub fn view(&self, domain: &Domain<B::Elem>) -> Result<GroupView<B>, OgroupError> {
        let pts = domain.points();
        let mut e = Vec::with_capacity(pts.len() * pts.len());
        for &a in pts {
            for &b in pts {
                e.push(self.e_req(a, b)?);
            }
        }
        let set = LOrderedSet::from_flat(self.frame.clone(), pts.len(), e);
        Ok(GroupView { group: self.clone(), domain: domain.clone(), set })
    }
}

/// Result of a join or meet search in a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupOpResult<E> {
    pub element: Option<E>,
    pub status: CertStatus,
}

/// A group together with its relation tabulated over a domain. Joins,
/// meets and crisp bounds are searched for inside the domain only.
#[derive(Clone)]
pub struct GroupView<B: GroupBackend> {
    group: LOrderedGroup<B>,
    domain: Domain<B::Elem>,
    set: LOrderedSet,
}

impl<B: GroupBackend> GroupView<B> {
    pub fn group(&self) -> &LOrderedGroup<B> {
        &self.group
    }

    pub fn domain(&self) -> &Domain<B::Elem> {
        &self.domain
    }

    pub fn set(&self) -> &LOrderedSet {
        &self.set
    }

    pub fn status(&self) -> CertStatus {
        self.domain.status()
    }

    #[inline]
    pub fn idx(&self, x: B::Elem) -> Option<usize> {
        self.domain.index_of(&x)
    }

    #[inline]
    pub fn point(&self, i: usize) -> B::Elem {
        self.domain.points()[i]
    }

    /// `e` from the table when both points are in the domain, directly
    /// otherwise.
    #[inline]
    pub fn e(&self, a: B::Elem, b: B::Elem) -> Option<FrameElt> {
        match (self.idx(a), self.idx(b)) {
            (Some(i), Some(j)) => Some(self.set.e(i, j)),
            _ => self.group.e(a, b),
        }
    }

    pub fn e_req(&self, a: B::Elem, b: B::Elem) -> Result<FrameElt, OgroupError> {
        match (self.idx(a), self.idx(b)) {
            (Some(i), Some(j)) => Ok(self.set.e(i, j)),
            _ => self.group.e_req(a, b),
        }
    }

    pub fn crisp_leq(&self, a: B::Elem, b: B::Elem) -> Option<bool> {
        self.e(a, b).map(|v| v == self.group.frame.top())
    }

    /// Least upper bound of `{a, b}` among domain points.
    pub fn crisp_join(&self, a: B::Elem, b: B::Elem) -> Option<B::Elem> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        self.set.crisp_join(i, j).map(|k| self.point(k))
    }

    pub fn crisp_meet(&self, a: B::Elem, b: B::Elem) -> Option<B::Elem> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        self.set.crisp_meet(i, j).map(|k| self.point(k))
    }

    pub fn crisp_join_req(&self, a: B::Elem, b: B::Elem) -> Result<B::Elem, OgroupError> {
        self.crisp_join(a, b).ok_or_else(|| {
            OgroupError::LatticeOpMissing(format!("{} ∨ {}", self.group.show(a), self.group.show(b)))
        })
    }

    pub fn crisp_meet_req(&self, a: B::Elem, b: B::Elem) -> Result<B::Elem, OgroupError> {
        self.crisp_meet(a, b).ok_or_else(|| {
            OgroupError::LatticeOpMissing(format!("{} ∧ {}", self.group.show(a), self.group.show(b)))
        })
    }

    /// Re-indexes a group subset over the domain.
    pub fn to_indexed(&self, s: &FuzzySubset<B::Elem>) -> Result<Subset, OgroupError> {
        let mut out = Subset::empty(self.group.frame());
        for (p, v) in s.iter() {
            let i = self.idx(*p).ok_or_else(|| OgroupError::SupportOutsideWindow(self.group.show(*p)))?;
            out.set(i, v);
        }
        Ok(out)
    }

    pub fn bound(&self, s: &FuzzySubset<B::Elem>, bound: Bound) -> Result<GroupOpResult<B::Elem>, OgroupError> {
        let idx = self.to_indexed(s)?;
        let found = self.set.certifiers(&idx, bound);
        if let [first, second, ..] = found[..] {
            return Err(OgroupError::Order(OrderError::MultipleCertifiers { first, second }));
        }
        // a certifier on the window boundary may be an artifact of truncation
        Ok(match found.first() {
            Some(&i) if !self.domain.on_edge(i) => GroupOpResult { element: Some(self.point(i)), status: self.domain.status() },
            _ => GroupOpResult { element: None, status: self.domain.not_found() },
        })
    }

    pub fn join(&self, s: &FuzzySubset<B::Elem>) -> Result<GroupOpResult<B::Elem>, OgroupError> {
        self.bound(s, Bound::Join)
    }

    pub fn meet(&self, s: &FuzzySubset<B::Elem>) -> Result<GroupOpResult<B::Elem>, OgroupError> {
        self.bound(s, Bound::Meet)
    }
}

pub fn group_join<B: GroupBackend>(
    view: &GroupView<B>,
    s: &FuzzySubset<B::Elem>,
) -> Result<GroupOpResult<B::Elem>, OgroupError> {
    view.join(s)
}

pub fn group_meet<B: GroupBackend>(
    view: &GroupView<B>,
    s: &FuzzySubset<B::Elem>,
) -> Result<GroupOpResult<B::Elem>, OgroupError> {
    view.meet(s)
}

/// E1–E3 over the domain, FOG for left and right translations, and the
/// equality `e(x,y) = e(b+x+a, b+y+a)`.
///
/// Quantifying over one-sided translations is equivalent to FOG's
/// two-sided form and costs `n³` instead of `n⁴`. Translated points may
/// leave the window; they are evaluated directly, and pairs where `e` is
/// unknown are skipped.
pub fn check_fog<B: GroupBackend>(g: &LOrderedGroup<B>, domain: &Domain<B::Elem>) -> Result<CheckReport, OgroupError> {
    let view = g.view(domain)?;
    let f = g.frame();
    let be = g.backend();
    let pts = domain.points();
    let mut r = view.set.check_axioms_named(|i| be.show(pts[i]));
    r.status = domain.status();
    let show = |x: B::Elem| be.show(x);
    for (i, &x) in pts.iter().enumerate() {
        for (j, &y) in pts.iter().enumerate() {
            let exy = view.set.e(i, j);
            for &a in pts {
                if let Some(v) = g.e(be.add(a, x), be.add(a, y)) {
                    r.expect(f.leq(exy, v), "FOG-left", || format!("x={} y={} a={}", show(x), show(y), show(a)));
                    r.expect(exy == v, "translation-equality", || {
                        format!("x={} y={} a={} (left)", show(x), show(y), show(a))
                    });
                }
                if !be.is_abelian() {
                    if let Some(v) = g.e(be.add(x, a), be.add(y, a)) {
                        r.expect(f.leq(exy, v), "FOG-right", || {
                            format!("x={} y={} a={}", show(x), show(y), show(a))
                        });
                        r.expect(exy == v, "translation-equality", || {
                            format!("x={} y={} a={} (right)", show(x), show(y), show(a))
                        });
                    }
                }
            }
        }
    }
    Ok(r)
}

/// `e(x,y) = e(-y,-x)`, and `x ≤_e y ⟹ e(y,a) ≤ e(x,a)`.
pub fn negation_identity<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    domain: &Domain<B::Elem>,
) -> Result<CheckReport, OgroupError> {
    let view = g.view(domain)?;
    let f = g.frame();
    let be = g.backend();
    let pts = domain.points();
    let mut r = CheckReport::new(domain.status());
    for (i, &x) in pts.iter().enumerate() {
        for (j, &y) in pts.iter().enumerate() {
            let exy = view.set.e(i, j);
            if let Some(v) = view.e(be.neg(y), be.neg(x)) {
                r.expect(exy == v, "negation", || format!("x={} y={}", be.show(x), be.show(y)));
            }
            if exy == f.top() {
                for k in 0..pts.len() {
                    r.expect(f.leq(view.set.e(j, k), view.set.e(i, k)), "antitone", || {
                        format!("x={} y={} a={}", be.show(x), be.show(y), be.show(pts[k]))
                    });
                }
            }
        }
    }
    Ok(r)
}

/// `a∧−` and `a∨−` are monotone: `e(x,y) ≤ e(a∧x, a∧y)` and
/// `e(x,y) ≤ e(a∨x, a∨y)` wherever the crisp bounds exist in the domain.
/// Clauses `"meet-monotone"` and `"join-monotone"`.
pub fn bound_maps_monotone<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    domain: &Domain<B::Elem>,
) -> Result<CheckReport, OgroupError> {
    let view = g.view(domain)?;
    let f = g.frame();
    let be = g.backend();
    let p = &view.set;
    let n = p.size();
    let mut r = CheckReport::new(domain.status());
    for a in 0..n {
        let meets: Vec<Option<usize>> = (0..n).map(|x| p.crisp_meet(a, x)).collect();
        let joins: Vec<Option<usize>> = (0..n).map(|x| p.crisp_join(a, x)).collect();
        for x in 0..n {
            for y in 0..n {
                let exy = p.e(x, y);
                let w = || format!("a={} x={} y={}", be.show(view.point(a)), be.show(view.point(x)), be.show(view.point(y)));
                if let (Some(u), Some(v)) = (meets[x], meets[y]) {
                    r.expect(f.leq(exy, p.e(u, v)), "meet-monotone", w);
                }
                if let (Some(u), Some(v)) = (joins[x], joins[y]) {
                    r.expect(f.leq(exy, p.e(u, v)), "join-monotone", w);
                }
            }
        }
    }
    Ok(r)
}

/// `(a+S)(y) = S(-a+y)`.
pub fn translate_subset<B: GroupBackend>(
    g: &B,
    frame: &Frame,
    a: B::Elem,
    s: &FuzzySubset<B::Elem>,
) -> FuzzySubset<B::Elem> {
    s.image(frame, |&x| g.add(a, x))
}

/// `(S+a)(y) = S(y-a)`.
pub fn translate_subset_right<B: GroupBackend>(
    g: &B,
    frame: &Frame,
    s: &FuzzySubset<B::Elem>,
    a: B::Elem,
) -> FuzzySubset<B::Elem> {
    s.image(frame, |&x| g.add(x, a))
}

/// `(-S)(y) = S(-y)`.
pub fn negate_subset<B: GroupBackend>(g: &B, frame: &Frame, s: &FuzzySubset<B::Elem>) -> FuzzySubset<B::Elem> {
    s.image(frame, |&x| g.neg(x))
}

/// `(S+T)(y) = ∨_{y₁+y₂=y} S(y₁) ∧ T(y₂)`.
pub fn sum_subsets<B: GroupBackend>(
    g: &B,
    frame: &Frame,
    s: &FuzzySubset<B::Elem>,
    t: &FuzzySubset<B::Elem>,
) -> FuzzySubset<B::Elem> {
    let mut out = FuzzySubset::empty(frame);
    for (x, u) in s.iter() {
        for (y, v) in t.iter() {
            out.raise(frame, g.add(*x, *y), frame.meet(u, v));
        }
    }
    out
}

/// Translation and negation laws for joins and meets, as paired runs: for
/// every fuzzy subset supported on `support` and every shift `a`,
/// `a+⊔S = ⊔(a+S)`, `⊔S+a = ⊔(S+a)`, the meet versions, and
/// `-⊔S = ⊓(-S)`, `-⊓S = ⊔(-S)`. Comparisons whose points leave the
/// domain or sit on the window edge are skipped, as is the empty subset on
/// a window, whose bounds there are the window's corners. Also records
/// whether joins and meets of the enumerated subsets exist together
/// (clause `"join-meet-duality"`).
pub fn translation_laws<B: GroupBackend>(
    view: &GroupView<B>,
    support: &[B::Elem],
    shifts: &[B::Elem],
    cfg: &SearchConfig,
) -> Result<CheckReport, OgroupError> {
    let g = view.group();
    let f = g.frame();
    let be = g.backend();
    for p in support {
        view.idx(*p).ok_or_else(|| OgroupError::SupportOutsideWindow(be.show(*p)))?;
    }
    let in_domain = |s: &FuzzySubset<B::Elem>| s.support().all(|p| view.idx(*p).is_some());
    let interior = |x: B::Elem| view.idx(x).is_some_and(|i| !view.domain().on_edge(i));
    let bound = |s: &FuzzySubset<B::Elem>, b: Bound| -> Option<B::Elem> {
        if !in_domain(s) {
            return None;
        }
        view.bound(s, b).ok().and_then(|r| r.element)
    };
    let mut r = CheckReport::new(view.status());
    let status = for_each_assignment(support.len(), f, cfg, |vals| {
        let s = FuzzySubset::from_pairs(f, support.iter().copied().zip(vals.iter().copied()));
        if s.is_empty() && !view.domain().is_finite_group() {
            return ControlFlow::Continue(());
        }
        let show = || g.describe(&s);
        let j = bound(&s, Bound::Join);
        let m = bound(&s, Bound::Meet);
        let neg = negate_subset(be, f, &s);
        if in_domain(&neg) {
            r.expect(j.is_some() == bound(&neg, Bound::Meet).is_some(), "join-meet-duality", || {
                format!("S={}", show())
            });
        }
        if let Some(j) = j {
            if in_domain(&neg) && interior(be.neg(j)) {
                r.expect(bound(&neg, Bound::Meet) == Some(be.neg(j)), "prop-4.3-v", || format!("S={}", show()));
            }
        }
        if let Some(m) = m {
            if in_domain(&neg) && interior(be.neg(m)) {
                r.expect(bound(&neg, Bound::Join) == Some(be.neg(m)), "prop-4.3-v", || format!("S={}", show()));
            }
        }
        for &a in shifts {
            let left = translate_subset(be, f, a, &s);
            let right = translate_subset_right(be, f, &s, a);
            for (shifted, x) in [(&left, j.map(|j| be.add(a, j))), (&right, j.map(|j| be.add(j, a)))] {
                if let Some(x) = x {
                    if in_domain(shifted) && interior(x) {
                        r.expect(bound(shifted, Bound::Join) == Some(x), "prop-4.3-iii", || {
                            format!("S={} a={}", show(), be.show(a))
                        });
                    }
                }
            }
            for (shifted, x) in [(&left, m.map(|m| be.add(a, m))), (&right, m.map(|m| be.add(m, a)))] {
                if let Some(x) = x {
                    if in_domain(shifted) && interior(x) {
                        r.expect(bound(shifted, Bound::Meet) == Some(x), "prop-4.3-iv", || {
                            format!("S={} a={}", show(), be.show(a))
                        });
                    }
                }
            }
        }
        ControlFlow::Continue(())
    });
    r.status = r.status.combine(&status);
    Ok(r)
}

/// `⊔(S+T) = ⊔S + ⊔T` and `⊓(S+T) = ⊓S + ⊓T`. A side is skipped when
/// the predicted bound is outside the domain or on the window edge.
pub fn verify_sum_law<B: GroupBackend>(
    view: &GroupView<B>,
    s: &FuzzySubset<B::Elem>,
    t: &FuzzySubset<B::Elem>,
) -> Result<CheckReport, OgroupError> {
    let g = view.group();
    let be = g.backend();
    let need = |x: &FuzzySubset<B::Elem>, b: Bound, what: &str| -> Result<B::Elem, OgroupError> {
        view.bound(x, b)?
            .element
            .ok_or_else(|| OgroupError::PreconditionUnmet(format!("{what} of {} missing", g.describe(x))))
    };
    let (js, jt) = (need(s, Bound::Join, "join")?, need(t, Bound::Join, "join")?);
    let (ms, mt) = (need(s, Bound::Meet, "meet")?, need(t, Bound::Meet, "meet")?);
    let st = sum_subsets(be, g.frame(), s, t);
    let mut r = CheckReport::new(view.status());
    let j = view.join(&st)?;
    let m = view.meet(&st)?;
    r.status = r.status.combine(&j.status).combine(&m.status);
    let interior = |x: B::Elem| view.idx(x).is_some_and(|i| !view.domain().on_edge(i));
    let (jsum, msum) = (be.add(js, jt), be.add(ms, mt));
    if interior(jsum) {
        r.expect(j.element == Some(jsum), "sum-join", || {
            format!("⊔(S+T)={:?} ⊔S+⊔T={}", j.element.map(|x| be.show(x)), be.show(jsum))
        });
    }
    if interior(msum) {
        r.expect(m.element == Some(msum), "sum-meet", || {
            format!("⊓(S+T)={:?} ⊓S+⊓T={}", m.element.map(|x| be.show(x)), be.show(msum))
        });
    }
    Ok(r)
}

/// Default cap on `|P|` for [`automorphism_group`].
pub const AUTOMORPHISM_CAP: usize = 7;

/// The automorphism group of a finite L-ordered set: bijections `f` with
/// `f` and `f⁻¹` monotone, under composition `f + g = f ∘ g`, ordered by
/// `ê(f,g) = ∧_x e(f x, g x)`. Element `k` is the `k`-th automorphism in
/// lexicographic order of permutation tables, so 0 is the identity.
pub fn automorphism_group(
    p: &LOrderedSet,
    cap: usize,
) -> Result<(LOrderedGroup<FiniteGroup>, Vec<Vec<usize>>), OgroupError> {
    let n = p.size();
    if n > cap {
        return Err(OgroupError::SizeLimitExceeded { size: n, cap });
    }
    let mut autos = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut inv = vec![0; n];
        for (i, &v) in perm.iter().enumerate() {
            inv[v] = i;
        }
        if is_monotone(p, p, &perm) && is_monotone(p, p, &inv) {
            autos.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let k = autos.len();
    let pos = |f: &Vec<usize>| autos.iter().position(|g| g == f).expect("closed under composition");
    let cayley: Vec<Vec<usize>> = autos
        .iter()
        .map(|f| autos.iter().map(|g| pos(&g.iter().map(|&x| f[x]).collect())).collect())
        .collect();
    let group = FiniteGroup::from_cayley(&cayley)?;
    let l = p.frame();
    let rows: Vec<Vec<FrameElt>> = autos
        .iter()
        .map(|f| autos.iter().map(|g| l.meet_all((0..n).map(|x| p.e(f[x], g[x])))).collect())
        .collect();
    debug_assert_eq!(rows.len(), k);
    let g = LOrderedGroup::from_table(p.frame_arc().clone(), group, &rows)?;
    Ok((g, autos))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::{FreeAbelian, RegionMap, Window, ZVec};

    pub(crate) fn chain3() -> Arc<Frame> {
        Arc::new(Frame::chain(3).unwrap())
    }

    /// `(ℤⁿ, componentwise ≤)` over `frame`.
    pub(crate) fn crisp_z(frame: Arc<Frame>, rank: usize) -> LOrderedGroup<FreeAbelian> {
        let (top, bot) = (frame.top(), frame.bottom());
        let s = crate::group::FnMap::new(move |x: &ZVec| {
            Some(if x.coords().iter().all(|&c| c >= 0) { top } else { bot })
        });
        LOrderedGroup::from_cone_unchecked(frame, FreeAbelian::new(rank).unwrap(), Arc::new(s))
    }

    /// The 3-chain cone on ℤ: 1 at 0, m on positives, 0 on negatives.
    pub(crate) fn fuzzy_z() -> LOrderedGroup<FreeAbelian> {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let s = RegionMap::signs(f.top(), m, f.bottom());
        LOrderedGroup::from_cone_unchecked(f, FreeAbelian::new(1).unwrap(), Arc::new(s))
    }

    pub(crate) fn z(x: i64) -> ZVec {
        ZVec::new(&[x])
    }

    #[test]
    fn fog_on_integers() {
        let w = Window::cube(1, 8);
        let d = FreeAbelian::new(1).unwrap().domain(Some(&w)).unwrap();
        let r = check_fog(&crisp_z(chain3(), 1), &d).unwrap();
        assert!(r.holds(), "{:?}", r.first());
        assert_eq!(r.status, CertStatus::WindowCertified(w.clone()));
        assert!(check_fog(&fuzzy_z(), &d).unwrap().holds());
        assert!(negation_identity(&fuzzy_z(), &d).unwrap().holds());
        assert!(bound_maps_monotone(&fuzzy_z(), &d).unwrap().holds());
        let d2 = FreeAbelian::new(2).unwrap().domain(Some(&Window::cube(2, 2))).unwrap();
        let r = bound_maps_monotone(&crisp_z(chain3(), 2), &d2).unwrap();
        assert!(r.holds() && r.checked > 0);

        // e(a,b) = S(a+b) is not translation invariant and breaks E1
        let f = chain3();
        let m = f.parse("m").unwrap();
        let s = RegionMap::signs(f.top(), m, f.bottom());
        let be = FreeAbelian::new(1).unwrap();
        let bad = LOrderedGroup::from_fn(f, be, move |a, b| Some(s.eval(&be.add(a, b))));
        let r = check_fog(&bad, &d).unwrap();
        assert!(!r.holds());
        assert!(!r.clause_holds("E1"));
    }

    #[test]
    fn missing_window() {
        let be = FreeAbelian::new(1).unwrap();
        assert_eq!(be.domain(None).unwrap_err(), GroupError::WindowMissing);
    }

    #[test]
    fn joins_in_windows() {
        let w = Window::cube(1, 8);
        let g = crisp_z(chain3(), 1);
        let f = g.frame_arc().clone();
        let view = g.view(&g.backend().domain(Some(&w)).unwrap()).unwrap();
        let s = FuzzySubset::crisp(&f, [z(2), z(5)]);
        let j = view.join(&s).unwrap();
        assert_eq!(j.element, Some(z(5)));
        assert_eq!(j.status, CertStatus::WindowCertified(w.clone()));
        assert_eq!(view.meet(&s).unwrap().element, Some(z(2)));
        assert!(matches!(
            view.join(&FuzzySubset::crisp(&f, [z(9)])),
            Err(OgroupError::SupportOutsideWindow(_))
        ));

        let fz = fuzzy_z();
        let fview = fz.view(view.domain()).unwrap();
        let r = fview.join(&FuzzySubset::crisp(&f, [z(1), z(2)])).unwrap();
        assert_eq!(r.element, None);
        assert_eq!(r.status, CertStatus::NotFoundInWindow(w));
    }

    #[test]
    fn subset_arithmetic() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let be = FreeAbelian::new(1).unwrap();
        let s = FuzzySubset::singleton(&f, z(1), m);
        let t = FuzzySubset::singleton(&f, z(2), m);
        assert_eq!(sum_subsets(&be, &f, &s, &t), FuzzySubset::singleton(&f, z(3), m));
        assert_eq!(translate_subset(&be, &f, z(0), &s), s);
        assert_eq!(negate_subset(&be, &f, &s), FuzzySubset::singleton(&f, z(-1), m));
        let pt = FuzzySubset::crisp(&f, [z(4)]);
        assert_eq!(sum_subsets(&be, &f, &pt, &t), translate_subset(&be, &f, z(4), &t));
    }

    #[test]
    fn sum_law_on_crisp_z() {
        let g = crisp_z(chain3(), 1);
        let f = g.frame_arc().clone();
        let view = g.view(&g.backend().domain(Some(&Window::cube(1, 8))).unwrap()).unwrap();
        let s = FuzzySubset::crisp(&f, [z(1), z(2)]);
        let t = FuzzySubset::crisp(&f, [z(5)]);
        let r = verify_sum_law(&view, &s, &t).unwrap();
        assert!(r.holds());
        let st = sum_subsets(g.backend(), &f, &s, &t);
        assert_eq!(view.join(&st).unwrap().element, Some(z(7)));
        let laws = translation_laws(&view, &[z(-1), z(0), z(2)], &[z(-2), z(3)], &SearchConfig::default()).unwrap();
        assert!(laws.holds(), "{:?}", laws.first());
    }

    #[test]
    fn automorphisms() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let chain = LOrderedSet::crisp_chain(f.clone(), 2);
        assert_eq!(automorphism_group(&chain, 7).unwrap().1.len(), 1);
        let anti = LOrderedSet::discrete(f.clone(), 2);
        assert_eq!(automorphism_group(&anti, 7).unwrap().1.len(), 2);
        let p = crate::order::LOrderedSet::new(f.clone(), &[vec![f.top(), m], vec![m, f.top()]]).unwrap();
        let (g, autos) = automorphism_group(&p, 7).unwrap();
        assert_eq!(autos, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(g.e(0, 1), Some(m));
        let d = g.backend().domain(None).unwrap();
        let r = check_fog(&g, &d).unwrap();
        assert!(r.holds());
        assert_eq!(r.status, CertStatus::Certified);
        assert!(matches!(
            automorphism_group(&LOrderedSet::discrete(f, 8), 7),
            Err(OgroupError::SizeLimitExceeded { .. })
        ));
    }
}
