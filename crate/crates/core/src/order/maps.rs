//! Maps between L-ordered sets: monotonicity, fuzzy Galois connections and
//! the search for right adjoints.

use alloc::format;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::lattice::subset_from;
use super::{Bound, LOrderedSet};
use crate::enumerate::Assignments;
use crate::enumerate::for_each_assignment;
use crate::report::{CertStatus, CheckReport, SearchConfig};

/// First pair `(x, y)` with `e_P(x,y) ≰ e_Q(f x, f y)`.
pub fn monotone_violation(p: &LOrderedSet, q: &LOrderedSet, f: &[usize]) -> Option<(usize, usize)> {
    let l = p.frame();
    p.points()
        .flat_map(|x| p.points().map(move |y| (x, y)))
        .find(|&(x, y)| !l.leq(p.e(x, y), q.e(f[x], f[y])))
}

pub fn is_monotone(p: &LOrderedSet, q: &LOrderedSet, f: &[usize]) -> bool {
    monotone_violation(p, q, f).is_none()
}

/// `f: P → Q` and `g: Q → P` are monotone and `e_Q(f x, y) = e_P(x, g y)`.
pub fn is_galois(p: &LOrderedSet, q: &LOrderedSet, f: &[usize], g: &[usize]) -> bool {
    is_monotone(p, q, f)
        && is_monotone(q, p, g)
        && p.points().all(|x| q.points().all(|y| q.e(f[x], y) == p.e(x, g[y])))
}

/// Outcome of the right-adjoint search together with the join-preservation
/// test that characterizes its existence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointReport {
    /// First Galois partner in lexicographic order of `Q → P` tables.
    pub partner: Option<Vec<usize>>,
    /// False when `|P|^|Q|` exceeded the guard and no search was run.
    pub searched: bool,
    /// `f(⊔S) = ⊔ f→(S)` for every `S ∈ L^P` examined.
    pub preservation: CheckReport,
    /// Whether partner existence matches join preservation; `None` when
    /// the search was skipped or preservation was only sampled.
    pub consistent: Option<bool>,
}

/// Searches every `g: Q → P` for a Galois partner of `f` and cross-checks
/// the outcome against join preservation.
///
/// A missing `⊔S` in `P` is recorded under clause `"complete"`; the
/// characterization assumes `P` complete.
pub fn has_right_adjoint(p: &LOrderedSet, q: &LOrderedSet, f: &[usize], cfg: &SearchConfig) -> AdjointReport {
    let searched = cfg.exhaustive(p.size(), q.size());
    let partner = if searched {
        Assignments::new(q.size(), p.size())
            .map(|g| g.iter().map(|v| v.index()).collect::<Vec<usize>>())
            .find(|g| is_galois(p, q, f, g))
    } else {
        None
    };

    let mut preservation = CheckReport::new(CertStatus::Certified);
    let status = for_each_assignment(p.size(), p.frame(), cfg, |vals| {
        let s = subset_from(vals, p);
        let Some(&js) = p.certifiers(&s, Bound::Join).first() else {
            preservation.fail("complete", format!("S={}", p.describe(&s)));
            return ControlFlow::Continue(());
        };
        let image = s.image(p.frame(), |&x| f[x]);
        let jf = q.certifiers(&image, Bound::Join).first().copied();
        preservation.expect(jf == Some(f[js]), "preserve", || format!("S={}", p.describe(&s)));
        ControlFlow::Continue(())
    });
    preservation.status = status;
    let consistent = (searched && preservation.status == CertStatus::Certified)
        .then(|| partner.is_some() == preservation.holds());
    AdjointReport { partner, searched, preservation, consistent }
}
