use std::sync::Arc;

use lfuzzord_core::enumerate::{for_each_assignment, lordered_sets};
use lfuzzord_core::frame::{verify_frame_laws, FrameError};
use lfuzzord_core::order::{is_l_lattice, lattice_laws, normalized_meet_law, Bound, Subset};
use lfuzzord_core::{Frame, FrameElt, LOrderedSet, OrderError, SearchConfig};
use proptest::prelude::*;

fn chain(n: usize) -> Arc<Frame> {
    Arc::new(Frame::chain(n).unwrap())
}

/// Raw defining inequalities, quantified over the support only.
fn raw_bounds(p: &LOrderedSet, s: &Subset, bound: Bound) -> Vec<usize> {
    let f = p.frame();
    let rel = |a: usize, b: usize| match bound {
        Bound::Join => p.e(a, b),
        Bound::Meet => p.e(b, a),
    };
    let support: Vec<(usize, FrameElt)> = s.iter().map(|(y, v)| (*y, v)).collect();
    p.points()
        .filter(|&x0| {
            support.iter().all(|&(y, v)| f.leq(v, rel(y, x0)))
                && p.points().all(|x| {
                    let lhs = support.iter().fold(f.top(), |acc, &(y, v)| f.meet(acc, f.imp(v, rel(y, x))));
                    f.leq(lhs, rel(x0, x))
                })
        })
        .collect()
}

#[test]
fn frame_zoo() {
    let mut zoo: Vec<Frame> = (2..=8).map(|n| Frame::chain(n).unwrap()).collect();
    zoo.extend((0..=3).map(|k| Frame::boolean(k).unwrap()));
    let (c2, c3, c4, b1) = (Frame::chain(2).unwrap(), Frame::chain(3).unwrap(), Frame::chain(4).unwrap(), Frame::boolean(1).unwrap());
    zoo.push(Frame::product(&c2, &c3).unwrap());
    zoo.push(Frame::product(&c2, &c4).unwrap());
    zoo.push(Frame::product(&b1, &Frame::boolean(2).unwrap()).unwrap());
    for f in &zoo {
        assert!(f.size() <= 8);
        let r = verify_frame_laws(f);
        assert!(r.valid(), "{:?}", r.violations.first());
    }
}

#[test]
fn non_distributive_lattices_rejected() {
    let m3 = [
        [1, 1, 1, 1, 1],
        [0, 1, 0, 0, 1],
        [0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ];
    let n5 = [
        [1, 1, 1, 1, 1],
        [0, 1, 1, 0, 1],
        [0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ];
    for t in [m3, n5] {
        let leq: Vec<Vec<bool>> = t.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect();
        assert!(matches!(Frame::from_leq(&leq), Err(FrameError::NotDistributive { .. })));
    }
}

#[test]
fn enumeration_counts() {
    assert_eq!(lordered_sets(chain(3), 1, true).count(), 1);
    // crisp partial orders on two labelled points
    assert_eq!(lordered_sets(chain(2), 2, true).count(), 3);
    let f = chain(3);
    let m = f.parse("m").unwrap();
    assert!(lordered_sets(f.clone(), 2, true).any(|p| p.table() == vec![vec![f.top(), m], vec![m, f.top()]]));
}

#[test]
fn certificates_agree_with_raw_inequalities() {
    let cfg = SearchConfig::default();
    for l in [2, 3] {
        for n in 1..=3 {
            for p in lordered_sets(chain(l), n, true) {
                for_each_assignment(n, p.frame(), &cfg, |vals| {
                    let s = Subset::from_pairs(p.frame(), vals.iter().copied().enumerate());
                    for bound in [Bound::Join, Bound::Meet] {
                        let cert = p.certifiers(&s, bound);
                        assert!(cert.len() <= 1);
                        assert_eq!(cert, raw_bounds(&p, &s, bound));
                        assert_eq!(cert, p.oracle_candidates(&s, bound));
                    }
                    core::ops::ControlFlow::Continue(())
                });
            }
        }
    }
}

#[test]
fn lattice_laws_on_enumerated_lattices() {
    let cfg = SearchConfig::default();
    let mut lattices = 0;
    for l in [2, 3] {
        for n in 1..=3 {
            for p in lordered_sets(chain(l), n, true) {
                if !is_l_lattice(&p, &cfg).holds {
                    continue;
                }
                lattices += 1;
                for (law, r) in lattice_laws(&p, &cfg).unwrap() {
                    assert!(r.holds(), "{} {:?} on {:?}", law.id(), r.first(), p.table());
                }
            }
        }
    }
    assert!(lattices > 10);
}

#[test]
fn m_symmetric_pair_is_not_a_lattice() {
    let f = chain(3);
    let m = f.parse("m").unwrap();
    let p = LOrderedSet::new(f.clone(), &[vec![f.top(), m], vec![m, f.top()]]).unwrap();
    let r = is_l_lattice(&p, &SearchConfig::default());
    assert!(!r.holds);
    let crisp = Subset::crisp(&f, [0, 1]);
    assert!(!p.join(&crisp).unwrap().exists());
    assert!(matches!(lattice_laws(&p, &SearchConfig::default()), Err(OrderError::NotALattice { .. })));
}

#[test]
fn dropping_e3_breaks_uniqueness() {
    let f = chain(3);
    let all = LOrderedSet::from_table(f.clone(), &[vec![f.top(), f.top()], vec![f.top(), f.top()]]).unwrap();
    assert!(all.satisfies_axioms(false) && !all.satisfies_axioms(true));
    let s = Subset::empty(&f);
    assert_eq!(all.certifiers(&s, Bound::Join), vec![0, 1]);
    assert!(matches!(all.join(&s), Err(OrderError::MultipleCertifiers { first: 0, second: 1 })));
}

#[test]
fn normalization_is_needed_for_the_meet_law() {
    let f = chain(3);
    let cfg = SearchConfig::default();
    let mut witness = None;
    'outer: for n in 1..=3 {
        for p in lordered_sets(f.clone(), n, true) {
            if !is_l_lattice(&p, &cfg).holds {
                continue;
            }
            assert!(normalized_meet_law(&p, &cfg, true).unwrap().holds());
            let r = normalized_meet_law(&p, &cfg, false).unwrap();
            if let Some(v) = r.first() {
                witness = Some(v.witness.clone());
                break 'outer;
            }
        }
    }
    assert!(witness.is_some());
}

fn small_lorder() -> impl Strategy<Value = LOrderedSet> {
    (1usize..=3, any::<prop::sample::Index>()).prop_map(|(n, i)| {
        let all: Vec<LOrderedSet> = lordered_sets(chain(3), n, true).collect();
        all[i.index(all.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closures_are_idempotent_and_extensive(p in small_lorder(), vals in proptest::collection::vec(0u16..3, 3)) {
        let f = p.frame();
        let s = Subset::from_pairs(f, (0..p.size()).map(|i| (i, FrameElt(vals[i]))));
        let down = p.down_closure(&s);
        prop_assert!(s.is_below(f, &down));
        prop_assert_eq!(p.down_closure(&down), down);
        let up = p.up_closure(&s);
        prop_assert!(s.is_below(f, &up));
        prop_assert_eq!(p.up_closure(&up), up);
    }

    #[test]
    fn induced_crisp_order_is_a_partial_order(p in small_lorder()) {
        let leq = p.induced_crisp_order();
        let n = p.size();
        for x in 0..n {
            prop_assert!(leq[x][x]);
            for y in 0..n {
                prop_assert!(!(leq[x][y] && leq[y][x]) || x == y);
                for z in 0..n {
                    prop_assert!(!(leq[x][y] && leq[y][z]) || leq[x][z]);
                }
            }
        }
    }

    #[test]
    fn singleton_top_is_its_own_join(p in small_lorder(), x in 0usize..3) {
        let x = x % p.size();
        let s = Subset::singleton(p.frame(), x, p.frame().top());
        prop_assert_eq!(p.join(&s).unwrap().element, Some(x));
        prop_assert_eq!(p.meet(&s).unwrap().element, Some(x));
    }
}
