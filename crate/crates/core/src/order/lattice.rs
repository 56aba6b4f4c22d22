//! L-lattice checks: existence of all joins and meets, distributivity, and
//! the law battery every L-lattice satisfies.

use alloc::format;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::{Bound, LOrderedSet, OrderError, Subset};
use crate::enumerate::for_each_assignment;
use crate::frame::FrameElt;
use crate::report::{CertStatus, CheckReport, SearchConfig};

/// Whether every fuzzy subset examined has both a join and a meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCheck {
    pub holds: bool,
    /// First subset lacking a bound, with the missing bound.
    pub witness: Option<(Subset, Bound)>,
    pub checked: u64,
    pub status: CertStatus,
}

pub(crate) fn subset_from(values: &[FrameElt], p: &LOrderedSet) -> Subset {
    Subset::from_pairs(p.frame(), values.iter().copied().enumerate())
}

/// Every `S ∈ L^P` has a join and a meet. Exhaustive under the guard,
/// sampled otherwise.
pub fn is_l_lattice(p: &LOrderedSet, cfg: &SearchConfig) -> LatticeCheck {
    let mut witness = None;
    let mut checked = 0;
    let status = for_each_assignment(p.size(), p.frame(), cfg, |vals| {
        checked += 1;
        let s = subset_from(vals, p);
        for bound in [Bound::Join, Bound::Meet] {
            if p.certifiers(&s, bound).is_empty() {
                witness = Some((s, bound));
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    LatticeCheck { holds: witness.is_none(), witness, checked, status }
}

/// On a finite carrier every fuzzy subset is finitely supported, so
/// completeness and being an L-lattice coincide.
pub fn is_complete(p: &LOrderedSet, cfg: &SearchConfig) -> LatticeCheck {
    is_l_lattice(p, cfg)
}

/// Binary meet and join tables of `(P; ≤_e)`.
#[derive(Clone, Debug)]
pub(crate) struct CrispOps {
    n: usize,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl CrispOps {
    pub(crate) fn new(p: &LOrderedSet) -> Result<Self, OrderError> {
        let n = p.size();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                meet.push(p.crisp_meet(a, b).ok_or(OrderError::NotALattice { a, b })?);
                join.push(p.crisp_join(a, b).ok_or(OrderError::NotALattice { a, b })?);
            }
        }
        Ok(CrispOps { n, meet, join })
    }

    #[inline]
    pub(crate) fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    #[inline]
    pub(crate) fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    /// `a ∧ S`, or `a ∨ S` for `Bound::Join`.
    pub(crate) fn shift(&self, p: &LOrderedSet, a: usize, s: &Subset, op: Bound) -> Subset {
        s.image(p.frame(), |&x| match op {
            Bound::Meet => self.meet(a, x),
            Bound::Join => self.join(a, x),
        })
    }

    fn is_distributive(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))
            })
        })
    }
}

/// Both equalities of the distributivity definition, each checked on its
/// own, plus the restricted forms for subsets of height 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributivityReport {
    /// `a ∧ ⊔S = ⊔(a ∧ S)`.
    pub join_form: CheckReport,
    /// `a ∨ ⊓S = ⊓(a ∨ S)`.
    pub meet_form: CheckReport,
    /// `a ∧ ⊓S = ⊓(a ∧ S)` when `∨S = 1`.
    pub normalized_meet: CheckReport,
    /// `a ∨ ⊔S = ⊔(a ∨ S)` when `∨S = 1`.
    pub normalized_join: CheckReport,
    /// Distributivity of the crisp reduct `(P; ≤_e)`.
    pub crisp_distributive: bool,
}

impl DistributivityReport {
    pub fn distributive(&self) -> bool {
        self.join_form.holds() && self.meet_form.holds()
    }

    /// Each form holds exactly when the other does.
    pub fn forms_agree(&self) -> bool {
        self.join_form.holds() == self.meet_form.holds()
    }
}

fn bound_of(p: &LOrderedSet, s: &Subset, b: Bound) -> Option<usize> {
    p.certifiers(s, b).first().copied()
}

/// Checks distributivity of an L-lattice over all `a` and all `S ∈ L^P`.
pub fn check_distributive(p: &LOrderedSet, cfg: &SearchConfig) -> Result<DistributivityReport, OrderError> {
    let ops = CrispOps::new(p)?;
    let f = p.frame();
    let top = f.top();
    let mut join_form = CheckReport::new(CertStatus::Certified);
    let mut meet_form = CheckReport::new(CertStatus::Certified);
    let mut normalized_meet = CheckReport::new(CertStatus::Certified);
    let mut normalized_join = CheckReport::new(CertStatus::Certified);
    let status = for_each_assignment(p.size(), f, cfg, |vals| {
        let s = subset_from(vals, p);
        let (j, m) = (bound_of(p, &s, Bound::Join), bound_of(p, &s, Bound::Meet));
        let normalized = s.height(f) == top;
        for a in p.points() {
            let a_meet_s = ops.shift(p, a, &s, Bound::Meet);
            let a_join_s = ops.shift(p, a, &s, Bound::Join);
            let lhs = j.map(|j| ops.meet(a, j));
            let rhs = bound_of(p, &a_meet_s, Bound::Join);
            join_form.expect(lhs == rhs, "join-form", || format!("a={a} S={}", p.describe(&s)));
            let lhs = m.map(|m| ops.join(a, m));
            let rhs = bound_of(p, &a_join_s, Bound::Meet);
            meet_form.expect(lhs == rhs, "meet-form", || format!("a={a} S={}", p.describe(&s)));
            if normalized {
                let lhs = m.map(|m| ops.meet(a, m));
                let rhs = bound_of(p, &a_meet_s, Bound::Meet);
                normalized_meet.expect(lhs == rhs, "normalized-meet", || format!("a={a} S={}", p.describe(&s)));
                let lhs = j.map(|j| ops.join(a, j));
                let rhs = bound_of(p, &a_join_s, Bound::Join);
                normalized_join.expect(lhs == rhs, "normalized-join", || format!("a={a} S={}", p.describe(&s)));
            }
        }
        ControlFlow::Continue(())
    });
    for r in [&mut join_form, &mut meet_form, &mut normalized_meet, &mut normalized_join] {
        r.status = status.clone();
    }
    Ok(DistributivityReport {
        join_form,
        meet_form,
        normalized_meet,
        normalized_join,
        crisp_distributive: ops.is_distributive(),
    })
}

/// Laws that hold in every L-lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LatticeLaw {
    /// `(P; ≤_e)` is a lattice whose binary bounds are `⊔χ_{x,y}`, `⊓χ_{x,y}`.
    CrispLattice,
    /// `e(a, x∧y) = e(a,x) ∧ e(a,y)`.
    MeetHom,
    /// `e(x∨y, a) = e(x,a) ∧ e(y,a)`.
    JoinHom,
    /// `∨S = 1 ⟹ a ∧ ⊓S = ⊓(a ∧ S)`.
    NormalizedMeet,
    /// `∨S = 1 ⟹ a ∨ ⊔S = ⊔(a ∨ S)`.
    NormalizedJoin,
    /// `∨S = 1 ⟹ a ∧ ⊔(a ∨ S) = a` and `a ∨ ⊓(a ∧ S) = a`.
    Absorption,
    /// `∧supp(S) ≤_e ⊓S` and `⊔S ≤_e ∨supp(S)`.
    SupportBounds,
    /// Bounds split along one support point and the rest.
    Splitting,
    /// `⊔(S∪T) = ⊔S ∨ ⊔T` and `⊓(S∪T) = ⊓S ∧ ⊓T`.
    Semilattice,
}

impl LatticeLaw {
    pub const ALL: [LatticeLaw; 9] = [
        LatticeLaw::CrispLattice,
        LatticeLaw::MeetHom,
        LatticeLaw::JoinHom,
        LatticeLaw::NormalizedMeet,
        LatticeLaw::NormalizedJoin,
        LatticeLaw::Absorption,
        LatticeLaw::SupportBounds,
        LatticeLaw::Splitting,
        LatticeLaw::Semilattice,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LatticeLaw::CrispLattice => "prop-3.2",
            LatticeLaw::MeetHom => "prop-3.4.2-i",
            LatticeLaw::JoinHom => "prop-3.4.2-ii",
            LatticeLaw::NormalizedMeet => "prop-3.4.2-iii",
            LatticeLaw::NormalizedJoin => "prop-3.4.2-iv",
            LatticeLaw::Absorption => "cor-3.4.2",
            LatticeLaw::SupportBounds => "rmk-3.4-ii",
            LatticeLaw::Splitting => "rmk-3.4-iii",
            LatticeLaw::Semilattice => "prop-semilattice",
        }
    }
}

/// `a ∧ ⊓S = ⊓(a ∧ S)` for every `a` and every `S` examined, restricted to
/// `∨S = 1` when `normalized` is set. Missing meets count as violations.
pub fn normalized_meet_law(p: &LOrderedSet, cfg: &SearchConfig, normalized: bool) -> Result<CheckReport, OrderError> {
    let ops = CrispOps::new(p)?;
    let f = p.frame();
    let mut r = CheckReport::new(CertStatus::Certified);
    let status = for_each_assignment(p.size(), f, cfg, |vals| {
        let s = subset_from(vals, p);
        if normalized && s.height(f) != f.top() {
            return ControlFlow::Continue(());
        }
        let m = bound_of(p, &s, Bound::Meet);
        for a in p.points() {
            let mm = bound_of(p, &ops.shift(p, a, &s, Bound::Meet), Bound::Meet);
            r.expect(m.is_some() && m.map(|m| ops.meet(a, m)) == mm, "normalized-meet", || {
                format!("a={a} S={}", p.describe(&s))
            });
        }
        ControlFlow::Continue(())
    });
    r.status = status;
    Ok(r)
}

/// Checks every [`LatticeLaw`] on an L-lattice. Fails with
/// [`OrderError::NotALattice`] when `(P; ≤_e)` lacks a binary bound.
pub fn lattice_laws(p: &LOrderedSet, cfg: &SearchConfig) -> Result<Vec<(LatticeLaw, CheckReport)>, OrderError> {
    let ops = CrispOps::new(p)?;
    let f = p.frame();
    let top = f.top();
    let n = p.size();
    let mut out = Vec::new();

    let mut r = CheckReport::new(CertStatus::Certified);
    for x in 0..n {
        for y in 0..n {
            let pair = Subset::crisp(f, [x, y]);
            let (j, m) = (bound_of(p, &pair, Bound::Join), bound_of(p, &pair, Bound::Meet));
            r.expect(j == Some(ops.join(x, y)), "crisp-join", || format!("x={x} y={y}"));
            r.expect(m == Some(ops.meet(x, y)), "crisp-meet", || format!("x={x} y={y}"));
        }
    }
    out.push((LatticeLaw::CrispLattice, r));

    let mut mh = CheckReport::new(CertStatus::Certified);
    let mut jh = CheckReport::new(CertStatus::Certified);
    for a in 0..n {
        for x in 0..n {
            for y in 0..n {
                mh.expect(p.e(a, ops.meet(x, y)) == f.meet(p.e(a, x), p.e(a, y)), "meet-hom", || {
                    format!("a={a} x={x} y={y}")
                });
                jh.expect(p.e(ops.join(x, y), a) == f.meet(p.e(x, a), p.e(y, a)), "join-hom", || {
                    format!("a={a} x={x} y={y}")
                });
            }
        }
    }
    out.push((LatticeLaw::MeetHom, mh));
    out.push((LatticeLaw::JoinHom, jh));

    let mut nm = CheckReport::new(CertStatus::Certified);
    let mut nj = CheckReport::new(CertStatus::Certified);
    let mut ab = CheckReport::new(CertStatus::Certified);
    let mut sb = CheckReport::new(CertStatus::Certified);
    let mut sp = CheckReport::new(CertStatus::Certified);
    let status = for_each_assignment(n, f, cfg, |vals| {
        let s = subset_from(vals, p);
        let show = || p.describe(&s);
        let (j, m) = (bound_of(p, &s, Bound::Join), bound_of(p, &s, Bound::Meet));
        if s.height(f) == top {
            for a in 0..n {
                let a_meet_s = ops.shift(p, a, &s, Bound::Meet);
                let a_join_s = ops.shift(p, a, &s, Bound::Join);
                let mm = bound_of(p, &a_meet_s, Bound::Meet);
                let jj = bound_of(p, &a_join_s, Bound::Join);
                nm.expect(m.map(|m| ops.meet(a, m)) == mm, "normalized-meet", || format!("a={a} S={}", show()));
                nj.expect(j.map(|j| ops.join(a, j)) == jj, "normalized-join", || format!("a={a} S={}", show()));
                ab.expect(jj.map(|jj| ops.meet(a, jj)) == Some(a), "absorb-join", || format!("a={a} S={}", show()));
                let mj = bound_of(p, &a_meet_s, Bound::Meet);
                ab.expect(mj.map(|mj| ops.join(a, mj)) == Some(a), "absorb-meet", || format!("a={a} S={}", show()));
            }
        }
        if let Some(&first) = s.support().next() {
            let lo = s.support().skip(1).fold(first, |acc, &x| ops.meet(acc, x));
            let hi = s.support().skip(1).fold(first, |acc, &x| ops.join(acc, x));
            sb.expect(m.map_or(false, |m| p.crisp_leq(lo, m)), "support-meet", || format!("S={}", show()));
            sb.expect(j.map_or(false, |j| p.crisp_leq(j, hi)), "support-join", || format!("S={}", show()));

            let s1 = s.filter(|&x| x == first);
            let rest = s.filter(|&x| x != first);
            let (j1, m1) = (bound_of(p, &s1, Bound::Join), bound_of(p, &s1, Bound::Meet));
            let (jr, mr) = (bound_of(p, &rest, Bound::Join), bound_of(p, &rest, Bound::Meet));
            let split_m = m1.zip(mr).map(|(a, b)| ops.meet(a, b));
            let split_j = j1.zip(jr).map(|(a, b)| ops.join(a, b));
            sp.expect(m.is_some() && m == split_m, "split-meet", || format!("S={}", show()));
            sp.expect(j.is_some() && j == split_j, "split-join", || format!("S={}", show()));
        }
        ControlFlow::Continue(())
    });
    for r in [&mut nm, &mut nj, &mut ab, &mut sb, &mut sp] {
        r.status = status.clone();
    }
    out.push((LatticeLaw::NormalizedMeet, nm));
    out.push((LatticeLaw::NormalizedJoin, nj));
    out.push((LatticeLaw::Absorption, ab));
    out.push((LatticeLaw::SupportBounds, sb));
    out.push((LatticeLaw::Splitting, sp));

    let mut sl = CheckReport::new(CertStatus::Certified);
    let status = for_each_assignment(2 * n, f, cfg, |vals| {
        let s = subset_from(&vals[..n], p);
        let t = subset_from(&vals[n..], p);
        let u = s.union(f, &t);
        let (js, jt, ju) = (bound_of(p, &s, Bound::Join), bound_of(p, &t, Bound::Join), bound_of(p, &u, Bound::Join));
        let (ms, mt, mu) = (bound_of(p, &s, Bound::Meet), bound_of(p, &t, Bound::Meet), bound_of(p, &u, Bound::Meet));
        if let (Some(js), Some(jt), Some(ms), Some(mt)) = (js, jt, ms, mt) {
            sl.expect(ju == Some(ops.join(js, jt)), "union-join", || {
                format!("S={} T={}", p.describe(&s), p.describe(&t))
            });
            sl.expect(mu == Some(ops.meet(ms, mt)), "union-meet", || {
                format!("S={} T={}", p.describe(&s), p.describe(&t))
            });
        }
        ControlFlow::Continue(())
    });
    sl.status = status;
    out.push((LatticeLaw::Semilattice, sl));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use crate::order::tests::{chain3, m_symmetric};
    use alloc::sync::Arc;
    use alloc::vec;

    fn n5() -> Vec<Vec<bool>> {
        // 0 < a < c < 1, 0 < b < 1
        let rel = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (3, 4), (2, 4)];
        (0..5).map(|x| (0..5).map(|y| x == y || rel.contains(&(x, y))).collect()).collect()
    }

    #[test]
    fn crisp_lattices_are_l_lattices() {
        let f = chain3();
        let c = LOrderedSet::crisp_chain(f.clone(), 3);
        let r = is_l_lattice(&c, &SearchConfig::default());
        assert!(r.holds);
        assert_eq!(r.status, CertStatus::Certified);
        assert_eq!(r.checked, 27);
        let single = LOrderedSet::crisp_chain(f, 1);
        assert!(is_complete(&single, &SearchConfig::default()).holds);
    }

    #[test]
    fn m_symmetric_is_not_an_l_lattice() {
        let p = m_symmetric();
        let r = is_l_lattice(&p, &SearchConfig::default());
        assert!(!r.holds);
        assert!(r.witness.is_some());
        let f = chain3();
        let pair = Subset::crisp(&f, [0usize, 1]);
        assert!(!p.meet(&pair).unwrap().exists());
    }

    #[test]
    fn distributivity() {
        let f = chain3();
        let cfg = SearchConfig::default();
        let chain = LOrderedSet::crisp_chain(f.clone(), 3);
        let d = check_distributive(&chain, &cfg).unwrap();
        assert!(d.distributive() && d.forms_agree() && d.crisp_distributive);

        let n5 = LOrderedSet::crisp(Arc::new(Frame::chain(2).unwrap()), &n5()).unwrap();
        let d = check_distributive(&n5, &cfg).unwrap();
        assert!(!d.crisp_distributive);
        assert!(!d.join_form.holds());
        assert!(!d.meet_form.holds());
        assert!(d.normalized_meet.holds());

        assert!(matches!(check_distributive(&m_symmetric(), &cfg), Err(OrderError::NotALattice { .. })));
    }

    #[test]
    fn laws_on_crisp_chain() {
        let c = LOrderedSet::crisp_chain(chain3(), 3);
        for (law, r) in lattice_laws(&c, &SearchConfig::default()).unwrap() {
            assert!(r.holds(), "{} {:?}", law.id(), r.first());
        }
    }

    #[test]
    fn fuzzy_chain_laws() {
        let f = chain3();
        let (m, one) = (f.parse("m").unwrap(), f.top());
        let p = LOrderedSet::new(f, &[vec![one, one], vec![m, one]]).unwrap();
        assert!(is_l_lattice(&p, &SearchConfig::default()).holds);
        for (law, r) in lattice_laws(&p, &SearchConfig::default()).unwrap() {
            assert!(r.holds(), "{} {:?}", law.id(), r.first());
        }
    }
}
