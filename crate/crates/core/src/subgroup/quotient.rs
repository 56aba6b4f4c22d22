//! Quotients by L-filters, the natural projection, kernel filters of
//! monotone homomorphisms and the induced embedding.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{is_convex, is_l_subgroup, is_normal, SubgroupError};
use crate::frame::FrameElt;
use crate::group::{Domain, FiniteGroup, FnMap, GroupBackend, PointMap, ValueMap};
use crate::ogroup::{check_fog, LOrderedGroup};
use crate::report::{CertStatus, CheckReport};

/// The quotient `(G+S; ẽ, ⊕, S̃)` of an L-ordered group by an L-filter.
///
/// Coset `i` is represented by `reps[i]`, its member of least
/// [`rep_weight`](GroupBackend::rep_weight), and cosets are sorted by
/// representative. `group` carries `⊕` and `ẽ` on the indices `0..order`.
#[derive(Clone)]
pub struct QuotientStructure<B: GroupBackend> {
    backend: B,
    s: Arc<dyn ValueMap<B::Elem>>,
    pub alpha: FrameElt,
    pub reps: Vec<B::Elem>,
    /// Domain members of each coset.
    pub classes: Vec<Vec<B::Elem>>,
    pub group: LOrderedGroup<FiniteGroup>,
    /// `S̃(a+S) = S(a)`.
    pub s_tilde: PointMap<usize>,
    /// Clauses: `"e-well-defined"`, `"s-well-defined"`, `"identity-coset"`,
    /// the quotient's E1–E3/FOG clauses, its L-filter clauses,
    /// `"singleton-level"` and `"correspondence"`.
    pub report: CheckReport,
    pub status: CertStatus,
}

impl<B: GroupBackend> fmt::Debug for QuotientStructure<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuotientStructure")
            .field("alpha", &self.alpha)
            .field("reps", &self.reps)
            .field("report", &self.report)
            .finish()
    }
}

impl<B: GroupBackend> QuotientStructure<B> {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// The coset of any group element, found through `S(x - rᵢ) = α`.
    pub fn class_of(&self, x: B::Elem) -> Option<usize> {
        self.reps
            .iter()
            .position(|&r| self.s.value(&self.backend.sub(x, r)) == Some(self.alpha))
    }

    /// `ẽ` as a table over coset indices.
    pub fn e_table(&self) -> Vec<Vec<FrameElt>> {
        let n = self.order();
        (0..n).map(|i| (0..n).map(|j| self.group.e(i, j).expect("table")).collect()).collect()
    }
}

/// Level-set elements used for joins defining `ẽ`: the whole group when it
/// is finite, the window doubled otherwise, so that differences of window
/// points are covered.
fn level_points<B: GroupBackend>(
    backend: &B,
    s: &dyn ValueMap<B::Elem>,
    alpha: FrameElt,
    domain: &Domain<B::Elem>,
) -> Result<Vec<B::Elem>, SubgroupError> {
    let wide = match domain.window() {
        Some(w) => backend.domain(Some(&w.scaled(2)))?,
        None => domain.clone(),
    };
    Ok(wide.points().iter().copied().filter(|x| s.value(x) == Some(alpha)).collect())
}

fn e_tilde<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    level: &[B::Elem],
    a: B::Elem,
    b: B::Elem,
) -> Result<FrameElt, SubgroupError> {
    let be = g.backend();
    let d = be.sub(a, b);
    let mut acc = g.frame().bottom();
    for &x in level {
        acc = g.frame().join(acc, g.e_req(d, x)?);
    }
    Ok(acc)
}

fn require_filter<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    s: &dyn ValueMap<B::Elem>,
    domain: &Domain<B::Elem>,
    require_convex: bool,
) -> Result<CheckReport, SubgroupError> {
    let (be, f) = (g.backend(), g.frame());
    let mut r = is_l_subgroup(be, f, s, domain);
    r.merge(is_normal(be, f, s, domain));
    if require_convex {
        r.merge(is_convex(g, s, domain)?.definition);
    }
    if let Some(v) = r.first() {
        return Err(SubgroupError::NotAFilter { clause: v.clause, witness: v.witness.clone() });
    }
    Ok(r)
}

/// Builds the quotient by an L-filter and verifies it.
///
/// On a window, cosets are the classes of `a ~ b ⟺ S(a-b) = α` among
/// window points; the operation refuses with `InfiniteIndex` when some
/// sum of representatives falls in no class.
pub fn build_quotient<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    s: Arc<dyn ValueMap<B::Elem>>,
    domain: &Domain<B::Elem>,
) -> Result<QuotientStructure<B>, SubgroupError> {
    build(g, s, domain, true)
}

/// [`build_quotient`] for normal L-subgroups that need not be convex. The
/// construction goes through; the report records which claims fail.
pub fn build_quotient_unchecked<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    s: Arc<dyn ValueMap<B::Elem>>,
    domain: &Domain<B::Elem>,
) -> Result<QuotientStructure<B>, SubgroupError> {
    build(g, s, domain, false)
}

fn build<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    s: Arc<dyn ValueMap<B::Elem>>,
    domain: &Domain<B::Elem>,
    require_convex: bool,
) -> Result<QuotientStructure<B>, SubgroupError> {
    let be = g.backend().clone();
    let f = g.frame_arc().clone();
    let mut report = require_filter(g, &*s, domain, require_convex)?;
    let alpha = s.value(&be.zero()).ok_or_else(|| SubgroupError::Undefined(String::from("0")))?;
    let same = |a: B::Elem, b: B::Elem| s.value(&be.sub(a, b)) == Some(alpha);

    let mut reps: Vec<B::Elem> = Vec::new();
    let mut classes: Vec<Vec<B::Elem>> = Vec::new();
    for &p in domain.points() {
        match reps.iter().position(|&r| same(p, r)) {
            Some(c) => classes[c].push(p),
            None => {
                reps.push(p);
                classes.push(vec![p]);
            }
        }
    }
    let key = |x: &B::Elem| (be.rep_weight(*x), *x);
    for (r, members) in reps.iter_mut().zip(&classes) {
        *r = *members.iter().min_by_key(|x| key(x)).expect("nonempty class");
    }
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by_key(|&i| key(&reps[i]));
    let reps: Vec<B::Elem> = order.iter().map(|&i| reps[i]).collect();
    let classes: Vec<Vec<B::Elem>> = order.iter().map(|&i| classes[i].clone()).collect();
    let k = reps.len();
    let mut cayley = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let sum = be.add(reps[i], reps[j]);
            cayley[i][j] = reps.iter().position(|&r| same(sum, r)).ok_or_else(|| {
                SubgroupError::InfiniteIndex(format!("{} + {} is in no coset", be.show(reps[i]), be.show(reps[j])))
            })?;
        }
    }
    let fg = FiniteGroup::from_cayley(&cayley)
        .map_err(|e| SubgroupError::InfiniteIndex(format!("coset table is not a group: {e}")))?;
    let zero_class = reps.iter().position(|&r| same(be.zero(), r));
    report.expect(zero_class == Some(fg.identity()), "identity-coset", || format!("{zero_class:?}"));

    let level = level_points(&be, &*s, alpha, domain)?;
    let mut rows = vec![vec![f.bottom(); k]; k];
    for i in 0..k {
        for j in 0..k {
            rows[i][j] = e_tilde(g, &level, reps[i], reps[j])?;
        }
    }
    for i in 0..k {
        for j in 0..k {
            for &a in &classes[i] {
                // differences beyond the domain would need level points past the doubled window
                for &b in classes[j].iter().filter(|&&b| domain.contains(&be.sub(a, b))) {
                    let v = e_tilde(g, &level, a, b)?;
                    report.expect(v == rows[i][j], "e-well-defined", || {
                        format!("a={} b={}", be.show(a), be.show(b))
                    });
                }
            }
        }
    }
    let mut s_vals = Vec::with_capacity(k);
    for (i, members) in classes.iter().enumerate() {
        let v = s.value(&reps[i]).ok_or_else(|| SubgroupError::Undefined(be.show(reps[i])))?;
        for &a in members {
            report.expect(s.value(&a) == Some(v), "s-well-defined", || be.show(a));
        }
        s_vals.push(v);
    }
    let group = LOrderedGroup::from_table(f.clone(), fg.clone(), &rows)?;
    let qd = Domain::finite(&fg);
    let mut q = check_fog(&group, &qd)?;
    let s_tilde = PointMap::table(s_vals.clone());
    q.merge(is_l_subgroup(&fg, &f, &s_tilde, &qd));
    q.merge(is_normal(&fg, &f, &s_tilde, &qd));
    q.merge(is_convex(&group, &s_tilde, &qd)?.definition);
    q.status = CertStatus::Certified;
    report.merge(q);
    let level_count = s_vals.iter().filter(|&&v| v == alpha).count();
    report.expect(level_count == 1, "singleton-level", || format!("{level_count} cosets at level α"));

    let pts = domain.points();
    for &a in pts {
        for &b in pts {
            let same_coset = same(a, b);
            let same_shift = pts.iter().all(|&x| s.value(&be.sub(x, a)) == s.value(&be.sub(x, b)));
            report.expect(same_coset == same_shift, "correspondence", || {
                format!("a={} b={}", be.show(a), be.show(b))
            });
        }
    }
    report.status = domain.status();
    Ok(QuotientStructure {
        backend: be,
        s,
        alpha,
        reps,
        classes,
        group,
        s_tilde,
        report,
        status: domain.status(),
    })
}

/// `π(g) = g + S` is a homomorphism (`"hom"`) and monotone
/// (`"monotone"`) on the domain.
pub fn natural_projection<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    q: &QuotientStructure<B>,
    domain: &Domain<B::Elem>,
) -> Result<CheckReport, SubgroupError> {
    let be = g.backend();
    let fr = g.frame();
    let qb = q.group.backend();
    let pts = domain.points();
    let classes: Vec<Option<usize>> = pts.iter().map(|&x| q.class_of(x)).collect();
    let mut r = CheckReport::new(domain.status());
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate() {
            let w = || format!("a={} b={}", be.show(a), be.show(b));
            let (Some(ca), Some(cb)) = (classes[i], classes[j]) else {
                r.fail("hom", w());
                continue;
            };
            r.expect(q.class_of(be.add(a, b)) == Some(qb.add(ca, cb)), "hom", w);
            let et = q.group.e(ca, cb).expect("table");
            r.expect(fr.leq(g.e_req(a, b)?, et), "monotone", w);
        }
    }
    Ok(r)
}

/// `K(f)(x) = e_H(0, f x) ∧ e_H(f x, 0)` and its verification.
#[derive(Clone)]
pub struct KernelFilter<E: Ord> {
    pub k: Arc<dyn ValueMap<E>>,
    pub table: PointMap<E>,
    /// Subgroup, normality and convexity clauses.
    pub filter: CheckReport,
    /// `"kernel-level"`: `K(f)(x) = 1 ⟺ f(x) = 0`.
    pub zero_level: CheckReport,
}

impl<E: Ord + fmt::Debug> fmt::Debug for KernelFilter<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelFilter")
            .field("table", &self.table)
            .field("filter", &self.filter)
            .field("zero_level", &self.zero_level)
            .finish()
    }
}

type Hom<B, C> = Arc<dyn Fn(<B as GroupBackend>::Elem) -> <C as GroupBackend>::Elem + Send + Sync>;

fn require_monotone_hom<B: GroupBackend, C: GroupBackend>(
    g: &LOrderedGroup<B>,
    h: &LOrderedGroup<C>,
    f: &Hom<B, C>,
    domain: &Domain<B::Elem>,
) -> Result<(), SubgroupError> {
    let (gb, hb) = (g.backend(), h.backend());
    let pts = domain.points();
    for &x in pts {
        for &y in pts {
            let w = || format!("x={} y={}", gb.show(x), gb.show(y));
            if f(gb.add(x, y)) != hb.add(f(x), f(y)) {
                return Err(SubgroupError::NotAHomomorphism(w()));
            }
            if !g.frame().leq(g.e_req(x, y)?, h.e_req(f(x), f(y))?) {
                return Err(SubgroupError::NotMonotone(w()));
            }
        }
    }
    Ok(())
}

pub fn kernel_filter<B: GroupBackend, C: GroupBackend>(
    g: &LOrderedGroup<B>,
    h: &LOrderedGroup<C>,
    f: Hom<B, C>,
    domain: &Domain<B::Elem>,
) -> Result<KernelFilter<B::Elem>, SubgroupError> {
    require_monotone_hom(g, h, &f, domain)?;
    let hh = h.clone();
    let ff = f.clone();
    let k: Arc<dyn ValueMap<B::Elem>> = Arc::new(FnMap::new(move |x: &B::Elem| {
        let zero = hh.backend().zero();
        let y = ff(*x);
        Some(hh.frame().meet(hh.e(zero, y)?, hh.e(y, zero)?))
    }));
    let table = PointMap::tabulate(domain.points(), &*k);
    let mut filter = is_l_subgroup(g.backend(), g.frame(), &*k, domain);
    filter.merge(is_normal(g.backend(), g.frame(), &*k, domain));
    filter.merge(is_convex(g, &*k, domain)?.definition);
    let mut zero_level = CheckReport::new(domain.status());
    let hz = h.backend().zero();
    for &x in domain.points() {
        let one = k.value(&x) == Some(g.frame().top());
        zero_level.expect(one == (f(x) == hz), "kernel-level", || g.show(x));
    }
    Ok(KernelFilter { k, table, filter, zero_level })
}

/// The induced map `a + K(f) ↦ f(a)`.
#[derive(Clone, Debug)]
pub struct EmbeddingReport<B: GroupBackend> {
    pub kernel: KernelFilter<B::Elem>,
    /// `None` when the kernel has infinite index; the checks then run on
    /// pairs of domain points directly.
    pub quotient: Option<QuotientStructure<B>>,
    /// Clauses `"well-defined"`, `"injective"`, `"hom"`, `"monotone"`.
    pub report: CheckReport,
}

pub fn induced_embedding<B: GroupBackend, C: GroupBackend>(
    g: &LOrderedGroup<B>,
    h: &LOrderedGroup<C>,
    f: Hom<B, C>,
    domain: &Domain<B::Elem>,
) -> Result<EmbeddingReport<B>, SubgroupError> {
    let kernel = kernel_filter(g, h, f.clone(), domain)?;
    let quotient = match build_quotient(g, kernel.k.clone(), domain) {
        Ok(q) => Some(q),
        Err(SubgroupError::InfiniteIndex(_)) => None,
        Err(e) => return Err(e),
    };
    let (gb, hb) = (g.backend(), h.backend());
    let fr = g.frame();
    let top = fr.top();
    let level = level_points(gb, &*kernel.k, top, domain)?;
    let pts = domain.points();
    let mut r = CheckReport::new(domain.status());
    for &a in pts {
        for &b in pts {
            let w = || format!("a={} b={}", gb.show(a), gb.show(b));
            let same = kernel.k.value(&gb.sub(a, b)) == Some(top);
            let (fa, fb) = (f(a), f(b));
            if same {
                r.expect(fa == fb, "well-defined", w);
            } else {
                r.expect(fa != fb, "injective", w);
            }
            r.expect(f(gb.add(a, b)) == hb.add(fa, fb), "hom", w);
            let et = e_tilde(g, &level, a, b)?;
            r.expect(fr.leq(et, h.e_req(fa, fb)?), "monotone", w);
        }
    }
    if let Some(q) = &quotient {
        let images: Vec<C::Elem> = q.reps.iter().map(|&x| f(x)).collect();
        let qb = q.group.backend();
        let n = q.order();
        for i in 0..n {
            for j in 0..n {
                let w = || format!("cosets {i} {j}");
                if i != j {
                    r.expect(images[i] != images[j], "injective", w);
                }
                r.expect(images[qb.add(i, j)] == hb.add(images[i], images[j]), "hom", w);
                let et = q.group.e(i, j).expect("table");
                r.expect(fr.leq(et, h.e_req(images[i], images[j])?), "monotone", w);
            }
        }
    }
    Ok(EmbeddingReport { kernel, quotient, report: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FreeAbelian, Window};
    use crate::ogroup::tests::{chain3, crisp_z, fuzzy_z, z};
    use crate::ogroup::order_from_cone;
    use crate::subgroup::tests::parity;

    #[test]
    fn parity_quotient() {
        let g = fuzzy_z();
        let f = g.frame_arc().clone();
        let m = f.parse("m").unwrap();
        let d = g.backend().domain(Some(&Window::cube(1, 8))).unwrap();
        let q = build_quotient(&g, Arc::new(parity(f.top(), m)), &d).unwrap();
        assert!(q.report.holds(), "{:?}", q.report.first());
        assert_eq!(q.order(), 2);
        assert_eq!(q.reps, vec![z(0), z(1)]);
        assert_eq!(q.e_table(), vec![vec![f.top(), m], vec![m, f.top()]]);
        assert_eq!(q.s_tilde.to_vec(2), Some(vec![f.top(), m]));
        assert_eq!(q.class_of(z(101)), Some(1));
        let p = natural_projection(&g, &q, &d).unwrap();
        assert!(p.holds());
    }

    #[test]
    fn trivial_and_refused_quotients() {
        let g = fuzzy_z();
        let f = g.frame_arc().clone();
        let d = g.backend().domain(Some(&Window::cube(1, 4))).unwrap();
        let one = FnMap::new(|_: &crate::group::ZVec| Some(FrameElt(2)));
        let q = build_quotient(&g, Arc::new(one), &d).unwrap();
        assert_eq!(q.order(), 1);
        assert!(q.report.holds());

        let zero_only = FnMap::new(|x: &crate::group::ZVec| Some(FrameElt(if x.coords()[0] == 0 { 2 } else { 0 })));
        assert!(matches!(build_quotient(&g, Arc::new(zero_only), &d), Err(SubgroupError::InfiniteIndex(_))));

        let crisp = crisp_z(f.clone(), 1);
        let evens = parity(f.top(), f.bottom());
        assert!(matches!(
            build_quotient(&crisp, Arc::new(evens), &d),
            Err(SubgroupError::NotAFilter { clause: "convex", .. })
        ));
    }

    #[test]
    fn kernels() {
        let f = chain3();
        let m = f.parse("m").unwrap();
        let z5 = FiniteGroup::cyclic(5).unwrap();
        let d = Domain::finite(&z5);
        let cone = PointMap::table(vec![f.top(), m, m, m, m]);
        let g = order_from_cone(f.clone(), z5, Arc::new(cone), &d).unwrap();
        let id: Hom<FiniteGroup, FiniteGroup> = Arc::new(|x| x);
        let k = kernel_filter(&g, &g, id.clone(), &d).unwrap();
        assert_eq!(k.table.to_vec(5), Some(vec![f.top(), m, m, m, m]));
        assert!(k.filter.holds() && k.zero_level.holds());
        let emb = induced_embedding(&g, &g, id, &d).unwrap();
        assert_eq!(emb.quotient.as_ref().unwrap().order(), 5);
        assert!(emb.report.holds());

        let zz = crisp_z(f, 1);
        let be = FreeAbelian::new(1).unwrap();
        let dz = be.domain(Some(&Window::cube(1, 6))).unwrap();
        let double: Hom<FreeAbelian, FreeAbelian> = Arc::new(move |x| be.add(x, x));
        let emb = induced_embedding(&zz, &zz, double, &dz).unwrap();
        assert!(emb.quotient.is_none());
        assert!(emb.report.holds(), "{:?}", emb.report.first());
        assert_eq!(emb.kernel.table.value(&z(0)), Some(FrameElt(2)));
        assert_eq!(emb.kernel.table.value(&z(3)), Some(FrameElt(0)));

        let neg: Hom<FreeAbelian, FreeAbelian> = Arc::new(move |x| be.neg(x));
        assert!(matches!(kernel_filter(&zz, &zz, neg, &dz), Err(SubgroupError::NotMonotone(_))));
    }
}
