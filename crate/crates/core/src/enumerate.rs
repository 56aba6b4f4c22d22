//! Deterministic enumeration of finite structures: value assignments
//! `X → L`, L-ordered sets, cones and L-filters on small finite groups.
//!
//! Every stream is lexicographic in the element indices of the frame, so
//! "the first structure passing the axioms" is reproducible.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::{Frame, FrameElt};
use crate::group::{Domain, FiniteGroup, PointMap, ValueMap};
use crate::ogroup::{validate_cone_axioms, LOrderedGroup};
use crate::order::LOrderedSet;
use crate::report::{CertStatus, SearchConfig};
use crate::subgroup::{is_convex, is_l_subgroup, is_normal};

/// Lexicographic odometer over `cells`-long vectors of frame elements.
#[derive(Clone, Debug)]
pub struct Assignments {
    digits: Vec<u16>,
    base: u16,
    done: bool,
}

impl Assignments {
    pub fn new(cells: usize, frame_size: usize) -> Self {
        Assignments { digits: vec![0; cells], base: frame_size as u16, done: frame_size == 0 }
    }
}

impl Iterator for Assignments {
    type Item = Vec<FrameElt>;

    fn next(&mut self) -> Option<Vec<FrameElt>> {
        if self.done {
            return None;
        }
        let out = self.digits.iter().map(|&d| FrameElt(d)).collect();
        // the last cell varies fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.base {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Visits every assignment of `cells` values when `|L|^cells` fits under
/// the guard, otherwise `cfg.samples` seeded random draws. Returns the
/// coverage actually achieved.
pub fn for_each_assignment(
    cells: usize,
    frame: &Frame,
    cfg: &SearchConfig,
    mut visit: impl FnMut(&[FrameElt]) -> ControlFlow<()>,
) -> CertStatus {
    if cfg.exhaustive(frame.size(), cells) {
        for a in Assignments::new(cells, frame.size()) {
            if visit(&a).is_break() {
                break;
            }
        }
        CertStatus::Certified
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut buf = vec![FrameElt(0); cells];
        for _ in 0..cfg.samples {
            for slot in buf.iter_mut() {
                *slot = FrameElt(rng.gen_range(0..frame.size()) as u16);
            }
            if visit(&buf).is_break() {
                break;
            }
        }
        CertStatus::Sampled { seed: cfg.seed, count: cfg.samples }
    }
}

/// All L-ordered sets on `n` points, in lexicographic order of the
/// off-diagonal entries. With `require_e3 = false` the stream also contains
/// relations that satisfy only E1 and E2.
pub fn lordered_sets(frame: Arc<Frame>, n: usize, require_e3: bool) -> impl Iterator<Item = LOrderedSet> {
    let off = n * n.saturating_sub(1);
    let top = frame.top();
    Assignments::new(off, frame.size()).filter_map(move |cells| {
        let mut table = Vec::with_capacity(n * n);
        let mut it = cells.into_iter();
        for x in 0..n {
            for y in 0..n {
                table.push(if x == y { top } else { it.next().expect("cell count") });
            }
        }
        let p = LOrderedSet::from_flat(frame.clone(), n, table);
        p.satisfies_axioms(require_e3).then_some(p)
    })
}

/// Every map `G → L` on a finite group, as a table, in lexicographic order.
pub fn group_maps(group: &FiniteGroup, frame: &Frame) -> impl Iterator<Item = PointMap<usize>> {
    let n = group.order();
    Assignments::new(n, frame.size()).map(move |vals| PointMap::table(vals))
}

/// All maps satisfying the positive-cone axioms, i.e. all L-orders making
/// `group` an L-ordered group.
pub fn cones(group: FiniteGroup, frame: Arc<Frame>) -> impl Iterator<Item = PointMap<usize>> {
    let domain = Domain::finite(&group);
    group_maps(&group, &frame).filter(move |s| {
        s.value(&group.identity()) == Some(frame.top()) && validate_cone_axioms(&group, &frame, s, &domain).holds()
    })
}

/// All L-filters (normal convex L-subgroups) of a finite L-ordered group.
pub fn l_filters(g: &LOrderedGroup<FiniteGroup>) -> impl Iterator<Item = PointMap<usize>> + '_ {
    let domain = Domain::finite(g.backend());
    group_maps(g.backend(), g.frame()).filter(move |s| {
        is_l_subgroup(g.backend(), g.frame(), s, &domain).holds()
            && is_normal(g.backend(), g.frame(), s, &domain).holds()
            && is_convex(g, s, &domain).map_or(false, |v| v.holds())
    })
}
