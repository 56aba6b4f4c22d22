//! L-subgroups of L-ordered groups: normality, convexity, convex hulls,
//! level subgroups and the positive-cone identity. Quotients and kernels
//! live in [`quotient`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::enumerate::for_each_assignment;
use crate::frame::{Frame, FrameElt};
use crate::group::{Domain, GroupBackend, GroupError, PointMap, ValueMap};
use crate::ogroup::{LOrderedGroup, OgroupError};
use crate::order::Subset;
use crate::report::{CertStatus, CheckReport, SearchConfig};

pub mod quotient;

pub use quotient::{
    build_quotient, build_quotient_unchecked, induced_embedding, kernel_filter, natural_projection, EmbeddingReport, KernelFilter,
    QuotientStructure,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupError {
    NotAFilter { clause: &'static str, witness: String },
    InfiniteIndex(String),
    NotNormal(String),
    NotMonotone(String),
    NotAHomomorphism(String),
    Undefined(String),
    Ogroup(OgroupError),
}

impl fmt::Display for SubgroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupError::NotAFilter { clause, witness } => write!(f, "not an L-filter: {clause} fails at {witness}"),
            SubgroupError::InfiniteIndex(w) => write!(f, "level subgroup has no finite index in the window: {w}"),
            SubgroupError::NotNormal(w) => write!(f, "not a normal L-subgroup: {w}"),
            SubgroupError::NotMonotone(w) => write!(f, "map is not monotone at {w}"),
            SubgroupError::NotAHomomorphism(w) => write!(f, "not a homomorphism: {w}"),
            SubgroupError::Undefined(w) => write!(f, "value undefined at {w}"),
            SubgroupError::Ogroup(e) => write!(f, "{e}"),
        }
    }
}

impl From<OgroupError> for SubgroupError {
    fn from(e: OgroupError) -> Self {
        SubgroupError::Ogroup(e)
    }
}

impl From<GroupError> for SubgroupError {
    fn from(e: GroupError) -> Self {
        SubgroupError::Ogroup(OgroupError::Group(e))
    }
}

/// Values of `s` on the domain, failing at the first unknown point.
pub(crate) fn values<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    backend: &B,
    s: &M,
    domain: &Domain<B::Elem>,
) -> Result<Vec<FrameElt>, SubgroupError> {
    domain
        .points()
        .iter()
        .map(|x| s.value(x).ok_or_else(|| SubgroupError::Undefined(backend.show(*x))))
        .collect()
}

/// `"sub-i"`: `S(x) ∧ S(y) ≤ S(x+y)`; `"sub-ii"`: `S(x) = S(-x)`. Sums
/// leaving the domain are evaluated directly and skipped when unknown.
pub fn is_l_subgroup<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    backend: &B,
    frame: &Frame,
    s: &M,
    domain: &Domain<B::Elem>,
) -> CheckReport {
    let mut r = CheckReport::new(domain.status());
    let pts = domain.points();
    for &x in pts {
        let Some(sx) = s.value(&x) else { continue };
        if let Some(v) = s.value(&backend.neg(x)) {
            r.expect(sx == v, "sub-ii", || format!("x={}", backend.show(x)));
        }
        for &y in pts {
            let (Some(sy), Some(sxy)) = (s.value(&y), s.value(&backend.add(x, y))) else { continue };
            r.expect(frame.leq(frame.meet(sx, sy), sxy), "sub-i", || {
                format!("x={} y={}", backend.show(x), backend.show(y))
            });
        }
    }
    r
}

/// `"normal"`: `S(y) ≤ S(x+y-x)`, with the consequences `"quo-i"`:
/// `S(x) ≤ S(0)` and `"quo-ii"`: `S(x+y) = S(y+x)`.
pub fn is_normal<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    backend: &B,
    frame: &Frame,
    s: &M,
    domain: &Domain<B::Elem>,
) -> CheckReport {
    let mut r = CheckReport::new(domain.status());
    let pts = domain.points();
    let s0 = s.value(&backend.zero());
    for &x in pts {
        let Some(sx) = s.value(&x) else { continue };
        if let Some(s0) = s0 {
            r.expect(frame.leq(sx, s0), "quo-i", || format!("x={}", backend.show(x)));
        }
        for &y in pts {
            let w = || format!("x={} y={}", backend.show(x), backend.show(y));
            if let (Some(sy), Some(c)) = (s.value(&y), s.value(&backend.conj(x, y))) {
                r.expect(frame.leq(sy, c), "normal", w);
            }
            if let (Some(a), Some(b)) = (s.value(&backend.add(x, y)), s.value(&backend.add(y, x))) {
                r.expect(a == b, "quo-ii", w);
            }
        }
    }
    r
}

/// Convexity by definition and, for normal L-subgroups, by the simplified
/// criterion `S(a) ≥ S(x) ∧ e(0,a) ∧ e(a,x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexVerdict {
    pub definition: CheckReport,
    pub criterion: Option<CheckReport>,
}

impl ConvexVerdict {
    pub fn holds(&self) -> bool {
        self.definition.holds()
    }

    /// Whether the two verdicts agree (trivially when the criterion was not
    /// applicable).
    pub fn agree(&self) -> bool {
        self.criterion.as_ref().map_or(true, |c| c.holds() == self.definition.holds())
    }
}

fn e_matrix<B: GroupBackend>(g: &LOrderedGroup<B>, domain: &Domain<B::Elem>) -> Result<Vec<FrameElt>, SubgroupError> {
    let pts = domain.points();
    let mut out = Vec::with_capacity(pts.len() * pts.len());
    for &a in pts {
        for &b in pts {
            out.push(g.e_req(a, b)?);
        }
    }
    Ok(out)
}

fn definition_report<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    sv: &[FrameElt],
    e: &[FrameElt],
    domain: &Domain<B::Elem>,
) -> CheckReport {
    let f = g.frame();
    let pts = domain.points();
    let n = pts.len();
    let mut r = CheckReport::new(domain.status());
    for a in 0..n {
        for x in 0..n {
            let lo = f.meet(sv[x], e[x * n + a]);
            if lo == f.bottom() {
                r.checked += n as u64;
                continue;
            }
            for y in 0..n {
                let v = f.meet(lo, f.meet(sv[y], e[a * n + y]));
                r.expect(f.leq(v, sv[a]), "convex", || {
                    format!("x={} y={} a={}", g.show(pts[x]), g.show(pts[y]), g.show(pts[a]))
                });
            }
        }
    }
    r
}

/// Checks convexity over the domain.
pub fn is_convex<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    g: &LOrderedGroup<B>,
    s: &M,
    domain: &Domain<B::Elem>,
) -> Result<ConvexVerdict, SubgroupError> {
    let be = g.backend();
    let f = g.frame();
    let sv = values(be, s, domain)?;
    let e = e_matrix(g, domain)?;
    let definition = definition_report(g, &sv, &e, domain);
    let normal_sub = is_l_subgroup(be, f, s, domain).holds() && is_normal(be, f, s, domain).holds();
    let criterion = if normal_sub {
        let pts = domain.points();
        let n = pts.len();
        let zero = be.zero();
        let mut r = CheckReport::new(domain.status());
        for a in 0..n {
            let e0a = g.e_req(zero, pts[a])?;
            for x in 0..n {
                let v = f.meet(sv[x], f.meet(e0a, e[a * n + x]));
                r.expect(f.leq(v, sv[a]), "convex-criterion", || {
                    format!("x={} a={}", g.show(pts[x]), g.show(pts[a]))
                });
            }
        }
        Some(r)
    } else {
        None
    };
    Ok(ConvexVerdict { definition, criterion })
}

/// Output of [`convex_hull`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullResult<E: Ord> {
    pub hull: PointMap<E>,
    pub convex: CheckReport,
    /// `S̄ ≤ T` for every convex `T ≥ S` examined.
    pub minimality: CheckReport,
    /// Present when `S` is a normal L-subgroup: the hull is a normal convex
    /// L-subgroup.
    pub normal_convex: Option<CheckReport>,
}

/// `S̄(a) = ∨_{x,y} S(x) ∧ S(y) ∧ e(x,a) ∧ e(a,y)`, computed as
/// `(∨_x S(x) ∧ e(x,a)) ∧ (∨_y S(y) ∧ e(a,y))`.
pub fn convex_hull<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    g: &LOrderedGroup<B>,
    s: &M,
    domain: &Domain<B::Elem>,
    cfg: &SearchConfig,
) -> Result<HullResult<B::Elem>, SubgroupError> {
    let be = g.backend();
    let f = g.frame();
    let pts = domain.points();
    let n = pts.len();
    let sv = values(be, s, domain)?;
    let e = e_matrix(g, domain)?;
    let hv: Vec<FrameElt> = (0..n)
        .map(|a| {
            let below = f.join_all((0..n).map(|x| f.meet(sv[x], e[x * n + a])));
            let above = f.join_all((0..n).map(|y| f.meet(sv[y], e[a * n + y])));
            f.meet(below, above)
        })
        .collect();
    let hull = PointMap::from_fn(pts, |x| hv[domain.index_of(x).expect("domain point")]);
    let convex = definition_report(g, &hv, &e, domain);

    let mut minimality = CheckReport::new(CertStatus::Certified);
    let status = for_each_assignment(n, f, cfg, |t| {
        if (0..n).all(|i| f.leq(sv[i], t[i])) && definition_report(g, t, &e, domain).holds() {
            minimality.expect((0..n).all(|i| f.leq(hv[i], t[i])), "hull-minimal", || {
                let pairs: Vec<String> = (0..n).map(|i| format!("{}:{}", g.show(pts[i]), f.name(t[i]))).collect();
                format!("T={{{}}}", pairs.join(", "))
            });
        }
        ControlFlow::Continue(())
    });
    minimality.status = status.combine(&domain.status());

    // hull values on the window edge miss support beyond it
    let mut interior = PointMap::new(Default::default(), None);
    for (i, &x) in pts.iter().enumerate().filter(|&(i, _)| !domain.on_edge(i)) {
        interior.set(x, hv[i]);
    }
    let normal_convex = (is_l_subgroup(be, f, s, domain).holds() && is_normal(be, f, s, domain).holds()).then(|| {
        let mut r = is_l_subgroup(be, f, &interior, domain);
        r.merge(is_normal(be, f, &interior, domain));
        r.merge(convex.clone());
        r
    });
    Ok(HullResult { hull, convex, minimality, normal_convex })
}

/// The crisp subgroup `S⁻¹(α)` with `α = S(0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSet<E> {
    pub alpha: FrameElt,
    /// Level points inside the domain.
    pub points: Vec<E>,
    /// Closure under `+`, inverses and conjugation.
    pub report: CheckReport,
}

pub fn level_subgroup<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    backend: &B,
    frame: &Frame,
    s: &M,
    domain: &Domain<B::Elem>,
) -> Result<LevelSet<B::Elem>, SubgroupError> {
    let mut pre = is_l_subgroup(backend, frame, s, domain);
    pre.merge(is_normal(backend, frame, s, domain));
    if let Some(v) = pre.first() {
        return Err(SubgroupError::NotNormal(format!("{} at {}", v.clause, v.witness)));
    }
    let alpha = s.value(&backend.zero()).ok_or_else(|| SubgroupError::Undefined(String::from("0")))?;
    let level = |x: &B::Elem| s.value(x) == Some(alpha);
    let points: Vec<B::Elem> = domain.points().iter().copied().filter(|x| level(x)).collect();
    let mut report = CheckReport::new(domain.status());
    for &x in &points {
        report.expect(level(&backend.neg(x)), "level-inverse", || backend.show(x));
        for &y in &points {
            report.expect(level(&backend.add(x, y)), "level-sum", || {
                format!("x={} y={}", backend.show(x), backend.show(y))
            });
        }
        for &a in domain.points() {
            report.expect(level(&backend.conj(a, x)), "level-normal", || {
                format!("a={} x={}", backend.show(a), backend.show(x))
            });
        }
    }
    Ok(LevelSet { alpha, points, report })
}

/// `(↓S)⁺ = S⁺` checked pointwise, next to the convexity verdict it is
/// equivalent to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownConeReport {
    pub identity: CheckReport,
    pub convex: bool,
}

impl DownConeReport {
    pub fn agree(&self) -> bool {
        self.identity.holds() == self.convex
    }
}

pub fn down_cone_identity<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    g: &LOrderedGroup<B>,
    s: &M,
    domain: &Domain<B::Elem>,
) -> Result<DownConeReport, SubgroupError> {
    let be = g.backend();
    let f = g.frame();
    let view = g.view(domain)?;
    let sv = values(be, s, domain)?;
    let mut idx = Subset::empty(f);
    for (i, &v) in sv.iter().enumerate() {
        idx.set(i, v);
    }
    let down = view.set().down_closure(&idx);
    let zero = be.zero();
    let mut identity = CheckReport::new(domain.status());
    for (i, &a) in domain.points().iter().enumerate() {
        let e0a = g.e_req(zero, a)?;
        identity.expect(f.meet(down.get(&i), e0a) == f.meet(sv[i], e0a), "down-cone", || {
            format!("a={}", be.show(a))
        });
    }
    let convex = is_convex(g, s, domain)?.holds();
    Ok(DownConeReport { identity, convex })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::{CmpOp, Constraint, FiniteGroup, FnMap, RegionMap, Rule, Window, ZVec};
    use crate::ogroup::tests::{chain3, crisp_z, fuzzy_z, z};
    use alloc::vec;

    /// `value` on even integers, `odd` on odd ones.
    pub(crate) fn parity(even: FrameElt, odd: FrameElt) -> RegionMap {
        RegionMap::new(
            1,
            vec![Rule { constraints: vec![Constraint::new(vec![1], 0, CmpOp::Mod(2))], value: even }],
            odd,
        )
    }

    fn dom(r: i64) -> Domain<ZVec> {
        Domain::of_window(&Window::cube(1, r))
    }

    #[test]
    fn subgroup_flags() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let be = crate::group::FreeAbelian::new(1).unwrap();
        let d = dom(8);
        let p = parity(f.top(), m);
        assert!(is_l_subgroup(&be, &f, &p, &d).holds());
        assert!(is_normal(&be, &f, &p, &d).holds());
        let odd = parity(f.bottom(), f.top());
        let r = is_l_subgroup(&be, &f, &odd, &d);
        assert!(!r.clause_holds("sub-i"));
        let one = FnMap::new(|_: &ZVec| Some(FrameElt(2)));
        assert!(is_l_subgroup(&be, &f, &one, &d).holds() && is_normal(&be, &f, &one, &d).holds());
    }

    #[test]
    fn convexity() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let d = dom(6);
        let crisp = crisp_z(f.clone(), 1);
        let evens = parity(f.top(), f.bottom());
        let v = is_convex(&crisp, &evens, &d).unwrap();
        assert!(!v.holds());
        assert!(v.agree());
        assert!(v.definition.violations.iter().any(|w| w.witness == "x=0 y=2 a=1"));

        let fz = fuzzy_z();
        let v = is_convex(&fz, &parity(f.top(), m), &d).unwrap();
        assert!(v.holds() && v.criterion.as_ref().unwrap().holds());

        let d2 = down_cone_identity(&crisp, &evens, &d).unwrap();
        assert!(!d2.identity.holds());
        assert_eq!(d2.identity.first().unwrap().witness, "a=1");
        assert!(d2.agree());
        assert!(down_cone_identity(&fz, &parity(f.top(), m), &d).unwrap().identity.holds());
    }

    #[test]
    fn hulls() {
        let f = chain3();
        let d = dom(4);
        let crisp = crisp_z(f.clone(), 1);
        let evens = parity(f.top(), f.bottom());
        let cfg = SearchConfig { guard: 1, ..SearchConfig::default() };
        let h = convex_hull(&crisp, &evens, &d, &cfg).unwrap();
        assert!(h.convex.holds());
        for k in -4..=4 {
            assert_eq!(h.hull.value(&z(k)), Some(f.top()));
        }
        assert!(h.normal_convex.unwrap().holds());

        // only 0 is in S and ≤_e is discrete
        let fz = fuzzy_z();
        let zero_only = FnMap::new(move |x: &ZVec| Some(if x.coords()[0] == 0 { FrameElt(2) } else { FrameElt(0) }));
        let h = convex_hull(&fz, &zero_only, &dom(2), &SearchConfig::default()).unwrap();
        assert_eq!(h.hull.value(&z(0)), Some(f.top()));
        assert_eq!(h.hull.value(&z(1)), Some(f.bottom()));
        assert_eq!(h.minimality.status, CertStatus::WindowCertified(Window::cube(1, 2)));
        assert!(h.minimality.holds() && h.minimality.checked > 0);
    }

    #[test]
    fn hull_on_z4_is_minimal() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let d = Domain::finite(&z4);
        let cone = PointMap::table(vec![f.top(), m, m, m]);
        let g = crate::ogroup::order_from_cone(f.clone(), z4, alloc::sync::Arc::new(cone), &d).unwrap();
        let s = PointMap::table(vec![f.top(), f.bottom(), m, f.bottom()]);
        let h = convex_hull(&g, &s, &d, &SearchConfig::default()).unwrap();
        assert!(h.convex.holds());
        assert!(h.minimality.holds());
        assert_eq!(h.minimality.status, CertStatus::Certified);
        let again = convex_hull(&g, &h.hull, &d, &SearchConfig::default()).unwrap();
        assert_eq!(again.hull, h.hull);
    }

    #[test]
    fn level_sets() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let be = crate::group::FreeAbelian::new(1).unwrap();
        let d = dom(4);
        let l = level_subgroup(&be, &f, &parity(f.top(), m), &d).unwrap();
        assert_eq!(l.points, vec![z(-4), z(-2), z(0), z(2), z(4)]);
        assert!(l.report.holds());
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let s = PointMap::table(vec![f.top(), m, m, m]);
        assert_eq!(level_subgroup(&z4, &f, &s, &Domain::finite(&z4)).unwrap().points, vec![0]);
        let odd = parity(f.bottom(), f.top());
        assert!(matches!(level_subgroup(&be, &f, &odd, &d), Err(SubgroupError::NotNormal(_))));
    }
}
