use std::sync::Arc;

use lfuzzord_core::group::{CmpOp, Constraint, FnMap, PointMap, RegionMap, Rule, ValueMap};
use lfuzzord_core::ogroup::*;
use lfuzzord_core::{CertStatus, Domain, FiniteGroup, Frame, FrameElt, FreeAbelian, FuzzySubset, GroupBackend, LOrderedSet, Window, ZVec};
use proptest::prelude::*;

fn chain3() -> Arc<Frame> {
    Arc::new(Frame::chain(3).unwrap())
}

fn v(c: &[i64]) -> ZVec {
    ZVec::new(c)
}

/// Componentwise order on ℤⁿ.
fn crisp(rank: usize) -> LOrderedGroup<FreeAbelian> {
    let f = chain3();
    let (top, bot) = (f.top(), f.bottom());
    let s = FnMap::new(move |x: &ZVec| Some(if x.coords().iter().all(|&c| c >= 0) { top } else { bot }));
    LOrderedGroup::from_cone_unchecked(f, FreeAbelian::new(rank).unwrap(), Arc::new(s))
}

fn leq(x: &ZVec, y: &ZVec) -> bool {
    x.coords().iter().zip(y.coords()).all(|(a, b)| a <= b)
}

fn zip(x: &ZVec, y: &ZVec, op: fn(i64, i64) -> i64) -> ZVec {
    let c: Vec<i64> = x.coords().iter().zip(y.coords()).map(|(a, b)| op(*a, *b)).collect();
    ZVec::new(&c)
}

fn scale(n: i64, x: &ZVec) -> ZVec {
    let c: Vec<i64> = x.coords().iter().map(|a| n * a).collect();
    ZVec::new(&c)
}

fn quadrant_cone(f: &Frame) -> RegionMap {
    let m = f.parse("m").unwrap();
    let ge = |c: Vec<i64>| Constraint::new(c, 0, CmpOp::Ge);
    let eq = |c: Vec<i64>| Constraint::new(c, 0, CmpOp::Eq);
    RegionMap::new(
        2,
        vec![
            Rule { constraints: vec![eq(vec![1, 0]), eq(vec![0, 1])], value: f.top() },
            Rule { constraints: vec![ge(vec![1, 0]), ge(vec![0, 1])], value: m },
        ],
        f.bottom(),
    )
}

#[test]
fn z5_cone_is_a_torsion_l_ordered_group() {
    let f = chain3();
    let m = f.parse("m").unwrap();
    let z5 = FiniteGroup::cyclic(5).unwrap();
    let d = Domain::finite(&z5);
    let g = order_from_cone(f.clone(), z5, Arc::new(PointMap::table(vec![f.top(), m, m, m, m])), &d).unwrap();
    let r = check_fog(&g, &d).unwrap();
    assert!(r.holds());
    assert_eq!(r.status, CertStatus::Certified);
    let p = g.view(&d).unwrap();
    assert!(!lfuzzord_core::order::is_l_lattice(p.set(), &Default::default()).holds);
}

#[test]
fn corrupted_table_is_caught() {
    let f = chain3();
    let m = f.parse("m").unwrap();
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let mut rows: Vec<Vec<FrameElt>> = (0..4).map(|a| (0..4).map(|b| if a == b { f.top() } else { m }).collect()).collect();
    let d = Domain::finite(&z4);
    let g = LOrderedGroup::from_table(f.clone(), z4.clone(), &rows).unwrap();
    assert!(check_fog(&g, &d).unwrap().holds());
    rows[1][2] = f.bottom();
    let g = LOrderedGroup::from_table(f, z4, &rows).unwrap();
    let r = check_fog(&g, &d).unwrap();
    assert!(!r.clause_holds("FOG-left"));
    assert!(r.first().is_some());
}

#[test]
fn region_cones_on_z2() {
    let f = chain3();
    let d = Domain::of_window(&Window::cube(2, 8));
    let s = quadrant_cone(&f);
    assert!(validate_cone_axioms(&FreeAbelian::new(2).unwrap(), &f, &s, &d).holds());
    let g = order_from_cone(f.clone(), FreeAbelian::new(2).unwrap(), Arc::new(s.clone()), &d).unwrap();
    let back = cone_of_group(&g, &d).unwrap();
    for x in d.points() {
        assert_eq!(back.value(x), s.value(x));
    }
    let r = check_fog(&g, &d).unwrap();
    assert!(r.holds());
    assert_eq!(r.status, CertStatus::WindowCertified(Window::cube(2, 8)));
}

#[test]
fn cone_validation_failures() {
    let f = chain3();
    let be = FreeAbelian::new(1).unwrap();
    let d = be.domain(Some(&Window::cube(1, 8))).unwrap();
    let all = FnMap::new(|_: &ZVec| Some(FrameElt(2)));
    assert!(!validate_cone_axioms(&be, &f, &all, &d).clause_holds("cone-ii"));
    let evens = RegionMap::new(1, vec![Rule { constraints: vec![Constraint::new(vec![1], 0, CmpOp::Mod(2))], value: f.top() }], f.bottom());
    let r = validate_cone_axioms(&be, &f, &evens, &d);
    assert!(r.violations.iter().any(|x| x.clause == "cone-ii" && x.witness == "x=2"));
}

#[test]
fn translation_invariance_of_cone_orders() {
    let f = chain3();
    let g = LOrderedGroup::from_cone_unchecked(f.clone(), FreeAbelian::new(2).unwrap(), Arc::new(quadrant_cone(&f)));
    let be = *g.backend();
    for a in Window::cube(2, 3).points() {
        for b in Window::cube(2, 3).points() {
            for c in Window::cube(2, 2).points() {
                assert_eq!(g.e(a, b), g.e(be.add(a, c), be.add(b, c)));
            }
        }
    }
}

#[test]
fn automorphisms_of_m_symmetric() {
    let f = chain3();
    let m = f.parse("m").unwrap();
    let p = LOrderedSet::new(f.clone(), &[vec![f.top(), m], vec![m, f.top()]]).unwrap();
    let (g, autos) = automorphism_group(&p, AUTOMORPHISM_CAP).unwrap();
    assert_eq!(autos.len(), 2);
    assert_eq!(g.e(0, 1), Some(m));
    assert!(check_fog(&g, &Domain::finite(g.backend())).unwrap().holds());
}

#[test]
fn joins_on_z2_boxes() {
    let g = crisp(2);
    let f = g.frame_arc().clone();
    let view = g.view(&Domain::of_window(&Window::cube(2, 8))).unwrap();
    let s = FuzzySubset::crisp(&f, [v(&[0, 1]), v(&[2, -1]), v(&[1, 1])]);
    let t = FuzzySubset::crisp(&f, [v(&[-1, 0]), v(&[1, 2])]);
    assert_eq!(view.join(&s).unwrap().element, Some(v(&[2, 1])));
    assert_eq!(view.meet(&s).unwrap().element, Some(v(&[0, -1])));
    let r = verify_sum_law(&view, &s, &t).unwrap();
    assert!(r.holds());
    let st = sum_subsets(g.backend(), &f, &s, &t);
    // max of sums is the sum of maxima
    assert_eq!(view.join(&st).unwrap().element, Some(v(&[3, 3])));

    let c = criterion_case(&view, v(&[1, 0]), &s);
    assert!(c.lattice_equality && c.agree());
    let single = FuzzySubset::crisp(&f, [v(&[3, -2])]);
    let c = criterion_case(&view, v(&[1, 0]), &single);
    assert!(c.lattice_equality);
}

fn criterion_case(view: &GroupView<FreeAbelian>, a: ZVec, s: &FuzzySubset<ZVec>) -> CriterionReport<ZVec> {
    distributivity_criterion(view, a, s).unwrap()
}

#[test]
fn translation_laws_on_z2() {
    let g = crisp(2);
    let view = g.view(&Domain::of_window(&Window::cube(2, 5))).unwrap();
    let support = [v(&[0, 0]), v(&[1, -1]), v(&[-1, 1])];
    let shifts = [v(&[1, 1]), v(&[-2, 0])];
    let r = translation_laws(&view, &support, &shifts, &Default::default()).unwrap();
    assert!(r.holds(), "{:?}", r.first());
    assert!(r.checked > 0);
}

#[test]
fn power_identity_examples() {
    let g = crisp(2);
    let view = g.view(&Domain::of_window(&Window::cube(2, 16))).unwrap();
    assert!(power_identity(&view, v(&[1, -1]), 3).unwrap().holds());
    let g1 = crisp(1);
    let view1 = g1.view(&Domain::of_window(&Window::cube(1, 16))).unwrap();
    for z in [-1, 1] {
        assert!(power_identity(&view1, v(&[z]), 2).unwrap().holds());
    }
}

#[test]
fn riesz_examples() {
    let g = crisp(1);
    let top = g.frame().top();
    let view = g.view(&Domain::of_window(&Window::cube(1, 8))).unwrap();
    assert_eq!(riesz_decompose(&view, v(&[3]), &[v(&[2]), v(&[2])], top).unwrap(), vec![v(&[1]), v(&[2])]);
    assert_eq!(riesz_decompose(&view, v(&[3]), &[v(&[4])], top).unwrap(), vec![v(&[3])]);
    assert!(riesz_meet_inequality(&view, v(&[3]), v(&[1]), v(&[1]), top).unwrap().holds());
    assert!(riesz_meet_inequality(&view, v(&[3]), v(&[-1]), v(&[1]), FrameElt(0)).unwrap().holds());

    let g2 = crisp(2);
    let view2 = g2.view(&Domain::of_window(&Window::cube(2, 8))).unwrap();
    let (a, bs) = (v(&[2, 2]), [v(&[1, 2]), v(&[2, 1])]);
    let parts = riesz_decompose(&view2, a, &bs, top).unwrap();
    assert_eq!(parts.iter().fold(v(&[0, 0]), |s, x| zip(&s, x, |p, q| p + q)), a);
    assert!(riesz_oracle(&view2, a, &bs, top).unwrap().is_some());
    assert!(riesz_meet_inequality(&view2, a, v(&[1, 0]), v(&[0, 1]), top).unwrap().holds());
}

#[test]
fn closure_examples() {
    let f = chain3();
    let m = f.parse("m").unwrap();
    let be = FreeAbelian::new(1).unwrap();
    let d = be.domain(Some(&Window::cube(1, 8))).unwrap();
    let valid = RegionMap::signs(f.top(), m, f.bottom());
    let r = cone_closure(&be, &f, &valid, &d).unwrap();
    assert_eq!(r.iterations, 1);
    assert_eq!(r.s_bar, r.t);
    for x in d.points() {
        assert_eq!(r.t.value(x), valid.value(x));
    }
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let s = PointMap::table(vec![f.top(), FrameElt(0), m, FrameElt(0)]);
    let r = cone_closure(&z4, &f, &s, &Domain::finite(&z4)).unwrap();
    assert_eq!(r.s_bar.to_vec(4), s.to_vec(4));
    assert_eq!(r.status, CertStatus::Certified);
}

#[test]
fn extension_with_empty_a_is_the_closure() {
    let f = chain3();
    let m = f.parse("m").unwrap();
    let be = FreeAbelian::new(1).unwrap();
    let d = be.domain(Some(&Window::cube(1, 5))).unwrap();
    let s = RegionMap::signs(f.top(), m, f.bottom());
    let none = |_: &ZVec| false;
    let r = cone_extension(&be, &f, &s, &none, m, &d).unwrap();
    assert_eq!(r.h, r.closure.t);
    let not_closed = |x: &ZVec| x.coords()[0] == 1;
    assert!(matches!(cone_extension(&be, &f, &s, &not_closed, m, &d), Err(OgroupError::ASetInvalid(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_identity_matches_integer_arithmetic(x in -4i64..=4, y in -4i64..=4, n in 1usize..=4) {
        let g = crisp(2);
        let view = g.view(&Domain::of_window(&Window::cube(2, 16))).unwrap();
        let z = v(&[x, y]);
        let zero = v(&[0, 0]);
        let lhs = leq(&z, &zero);
        let rhs = leq(&zip(&scale(n as i64, &z), &zero, i64::max), &scale(n as i64 - 1, &zip(&z, &zero, i64::max)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(power_identity(&view, z, n).unwrap().holds());
    }

    #[test]
    fn riesz_agrees_with_oracle_on_z(a in 0i64..=5, b1 in 0i64..=5, b2 in 0i64..=5) {
        prop_assume!(a <= b1 + b2);
        let g = crisp(1);
        let top = g.frame().top();
        let view = g.view(&Domain::of_window(&Window::cube(1, 8))).unwrap();
        let bs = [v(&[b1]), v(&[b2])];
        let parts = riesz_decompose(&view, v(&[a]), &bs, top).unwrap();
        prop_assert_eq!(parts[0].coords()[0] + parts[1].coords()[0], a);
        prop_assert_eq!(parts[1].coords()[0], a.min(b2));
        prop_assert!(riesz_oracle(&view, v(&[a]), &bs, top).unwrap().is_some());
    }

    #[test]
    fn translated_joins_on_z(xs in proptest::collection::btree_set(-4i64..=4, 1..4), a in -3i64..=3) {
        let g = crisp(1);
        let f = g.frame_arc().clone();
        let view = g.view(&Domain::of_window(&Window::cube(1, 8))).unwrap();
        let s = FuzzySubset::crisp(&f, xs.iter().map(|&x| v(&[x])));
        let j = view.join(&s).unwrap().element.unwrap();
        prop_assert_eq!(j, v(&[*xs.iter().max().unwrap()]));
        let shifted = translate_subset(g.backend(), &f, v(&[a]), &s);
        prop_assert_eq!(view.join(&shifted).unwrap().element, Some(v(&[j.coords()[0] + a])));
        let neg = negate_subset(g.backend(), &f, &s);
        prop_assert_eq!(view.meet(&neg).unwrap().element, Some(v(&[-j.coords()[0]])));
    }
}
