use std::sync::Arc;

use lfuzzord_core::enumerate::{cones, group_maps, l_filters};
use lfuzzord_core::group::{CmpOp, Constraint, FnMap, PointMap, RegionMap, Rule, ValueMap};
use lfuzzord_core::ogroup::order_from_cone;
use lfuzzord_core::subgroup::*;
use lfuzzord_core::{Domain, FiniteGroup, Frame, FrameElt, FreeAbelian, GroupBackend, LOrderedGroup, SearchConfig, Window, ZVec};

fn chain3() -> Arc<Frame> {
    Arc::new(Frame::chain(3).unwrap())
}

fn z(i: i64) -> ZVec {
    ZVec::new(&[i])
}

fn fuzzy_z() -> LOrderedGroup<FreeAbelian> {
    let f = chain3();
    let m = f.parse("m").unwrap();
    LOrderedGroup::from_cone_unchecked(f.clone(), FreeAbelian::new(1).unwrap(), Arc::new(RegionMap::signs(f.top(), m, f.bottom())))
}

fn crisp_z() -> LOrderedGroup<FreeAbelian> {
    let f = chain3();
    LOrderedGroup::from_cone_unchecked(f.clone(), FreeAbelian::new(1).unwrap(), Arc::new(RegionMap::signs(f.top(), f.top(), f.bottom())))
}

fn parity(even: FrameElt, odd: FrameElt) -> RegionMap {
    RegionMap::new(1, vec![Rule { constraints: vec![Constraint::new(vec![1], 0, CmpOp::Mod(2))], value: even }], odd)
}

/// Every L-ordered group on ℤ₂, ℤ₃, ℤ₄ over the 3-chain.
fn small_groups() -> Vec<LOrderedGroup<FiniteGroup>> {
    let f = chain3();
    let mut out = Vec::new();
    for n in 2..=4 {
        let g = FiniteGroup::cyclic(n).unwrap();
        let d = Domain::finite(&g);
        for s in cones(g.clone(), f.clone()) {
            out.push(order_from_cone(f.clone(), g.clone(), Arc::new(s), &d).unwrap());
        }
    }
    out
}

fn naive_hull(g: &LOrderedGroup<FiniteGroup>, s: &PointMap<usize>) -> Vec<FrameElt> {
    let f = g.frame();
    let n = g.backend().order();
    (0..n)
        .map(|a| {
            let mut acc = f.bottom();
            for x in 0..n {
                for y in 0..n {
                    let t = f.meet_all([s.value(&x).unwrap(), s.value(&y).unwrap(), g.e(x, a).unwrap(), g.e(a, y).unwrap()]);
                    acc = f.join(acc, t);
                }
            }
            acc
        })
        .collect()
}

#[test]
fn hull_matches_double_join_and_is_idempotent() {
    let cfg = SearchConfig { guard: 100, ..Default::default() };
    let mut seen = 0;
    for g in small_groups() {
        let d = Domain::finite(g.backend());
        let n = g.backend().order();
        for s in group_maps(g.backend(), g.frame()) {
            let h = convex_hull(&g, &s, &d, &cfg).unwrap();
            assert_eq!(h.hull.to_vec(n).unwrap(), naive_hull(&g, &s));
            assert!(h.convex.holds());
            let again = convex_hull(&g, &h.hull, &d, &cfg).unwrap();
            assert_eq!(again.hull, h.hull);
            if let Some(nc) = &h.normal_convex {
                assert!(nc.holds(), "{:?}", nc.first());
            }
            seen += 1;
        }
    }
    assert!(seen > 100);
}

#[test]
fn convexity_criteria_agree_on_l_subgroups() {
    for g in small_groups() {
        let d = Domain::finite(g.backend());
        for s in group_maps(g.backend(), g.frame()) {
            if !is_l_subgroup(g.backend(), g.frame(), &s, &d).holds() {
                continue;
            }
            let v = is_convex(&g, &s, &d).unwrap();
            assert!(v.agree());
            let dc = down_cone_identity(&g, &s, &d).unwrap();
            assert!(dc.agree(), "{:?}", dc);
        }
    }
}

#[test]
fn quotients_of_enumerated_filters() {
    let mut built = 0;
    for g in small_groups() {
        let d = Domain::finite(g.backend());
        for s in l_filters(&g).collect::<Vec<_>>() {
            let q = build_quotient(&g, Arc::new(s), &d).unwrap();
            assert!(q.report.holds(), "{:?}", q.report.first());
            assert_eq!(g.backend().order() % q.order(), 0);
            assert!(natural_projection(&g, &q, &d).unwrap().holds());
            built += 1;
        }
    }
    assert!(built > 0);
}

#[test]
fn first_nontrivial_filter_on_z4() {
    let f = chain3();
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let d = Domain::finite(&z4);
    let mut found = None;
    'outer: for cone in cones(z4.clone(), f.clone()) {
        let g = order_from_cone(f.clone(), z4.clone(), Arc::new(cone), &d).unwrap();
        for s in l_filters(&g) {
            let vals = s.to_vec(4).unwrap();
            if vals.iter().any(|&v| v != vals[0]) {
                found = Some((g.clone(), s));
                break 'outer;
            }
        }
    }
    let (g, s) = found.expect("a nontrivial filter");
    let q = build_quotient(&g, Arc::new(s), &d).unwrap();
    assert!(q.report.holds());
    assert!(q.order() > 1);
    assert!(natural_projection(&g, &q, &d).unwrap().holds());
}

#[test]
fn parity_quotient_on_window() {
    let g = fuzzy_z();
    let f = g.frame_arc().clone();
    let m = f.parse("m").unwrap();
    let d = Domain::of_window(&Window::cube(1, 8));
    let q = build_quotient(&g, Arc::new(parity(f.top(), m)), &d).unwrap();
    assert!(q.report.holds());
    let t = q.e_table();
    assert_eq!((t[0][0], t[1][1]), (f.top(), f.top()));
    assert_eq!(t[0][1], t[1][0]);
    // e(±1, even) on the fuzzy cone peaks at m
    assert_eq!(t[0][1], m);
    let lvl = level_subgroup(g.backend(), g.frame(), &parity(f.top(), m), &d).unwrap();
    assert!(lvl.points.iter().all(|x| x.coords()[0] % 2 == 0));
    assert_eq!(q.s_tilde.to_vec(2).unwrap().iter().filter(|&&v| v == q.alpha).count(), 1);
}

#[test]
fn sub_unit_alpha_quotient() {
    let f = chain3();
    let m = f.parse("m").unwrap();
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let d = Domain::finite(&z4);
    let discrete = PointMap::table(vec![f.top(), f.bottom(), f.bottom(), f.bottom()]);
    let g = order_from_cone(f.clone(), z4, Arc::new(discrete), &d).unwrap();
    let s = PointMap::table(vec![m, f.bottom(), m, f.bottom()]);
    let q = build_quotient(&g, Arc::new(s), &d).unwrap();
    assert!(q.report.holds(), "{:?}", q.report.first());
    assert_eq!(q.alpha, m);
    assert_eq!(q.order(), 2);
    assert_eq!(q.s_tilde.to_vec(2), Some(vec![m, f.bottom()]));

    let fz = fuzzy_z();
    let w = Domain::of_window(&Window::cube(1, 6));
    assert!(matches!(build_quotient(&fz, Arc::new(parity(m, f.bottom())), &w), Err(SubgroupError::NotAFilter { .. })));
}

#[test]
fn doubling_kernel_embeds() {
    let g = crisp_z();
    let d = Domain::of_window(&Window::cube(1, 8));
    let be = *g.backend();
    let double: Arc<dyn Fn(ZVec) -> ZVec + Send + Sync> = Arc::new(move |x| be.add(x, x));
    let r = induced_embedding(&g, &g, double, &d).unwrap();
    assert!(r.kernel.filter.holds());
    assert!(r.kernel.zero_level.holds());
    let ones: Vec<ZVec> = d.points().iter().copied().filter(|x| r.kernel.table.value(x) == Some(g.frame().top())).collect();
    assert_eq!(ones, vec![z(0)]);
    assert!(r.report.holds(), "{:?}", r.report.first());
}

#[test]
fn non_monotone_map_is_refused() {
    let g = crisp_z();
    let d = Domain::of_window(&Window::cube(1, 4));
    let be = *g.backend();
    let neg: Arc<dyn Fn(ZVec) -> ZVec + Send + Sync> = Arc::new(move |x| be.neg(x));
    assert!(matches!(kernel_filter(&g, &g, neg, &d), Err(SubgroupError::NotMonotone(_))));
    let zero = FnMap::new(|_: &ZVec| Some(FrameElt(0)));
    assert!(is_l_subgroup(g.backend(), g.frame(), &zero, &d).holds());
}
