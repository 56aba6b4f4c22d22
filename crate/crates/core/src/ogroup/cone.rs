//! Positive cones: validation, the order they induce, the closure of a
//! bounded map to a cone, the extension by an A-set, and the cone
//! characterization of monotone homomorphisms.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{LOrderedGroup, OgroupError};
use crate::frame::{Frame, FrameElt};
use crate::group::{Domain, GroupBackend, PointMap, ValueMap};
use crate::report::{CertStatus, CheckReport};

/// `S_G(x) = e(0, x)` tabulated over the domain.
pub fn cone_of_group<B: GroupBackend>(
    g: &LOrderedGroup<B>,
    domain: &Domain<B::Elem>,
) -> Result<PointMap<B::Elem>, OgroupError> {
    let zero = g.backend().zero();
    let mut out = PointMap::new(Default::default(), None);
    for &x in domain.points() {
        out.set(x, g.e_req(zero, x)?);
    }
    Ok(out)
}

/// `S⁺(x) = S(x) ∧ e(0, x)` over the domain; unknown values of `S` stay
/// unknown.
pub fn positive_cone<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    g: &LOrderedGroup<B>,
    s: &M,
    domain: &Domain<B::Elem>,
) -> Result<PointMap<B::Elem>, OgroupError> {
    let f = g.frame();
    let zero = g.backend().zero();
    let mut out = PointMap::new(Default::default(), None);
    for &x in domain.points() {
        if let Some(v) = s.value(&x) {
            out.set(x, f.meet(v, g.e_req(zero, x)?));
        }
    }
    Ok(out)
}

/// The positive-cone axioms over the domain:
///
/// * `"cone-i"`: `S(x) ∧ S(y) ≤ S(x+y)`
/// * `"cone-ii"`: `S(x) = S(-x) = 1 ⟹ x = 0`
/// * `"cone-iii"`: `S(0) = 1` and `S(x+y-x) = S(y)`
///
/// Points where `S` is unknown are skipped.
pub fn validate_cone_axioms<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    backend: &B,
    frame: &Frame,
    s: &M,
    domain: &Domain<B::Elem>,
) -> CheckReport {
    let mut r = CheckReport::new(domain.status());
    let zero = backend.zero();
    r.expect(s.value(&zero) == Some(frame.top()), "cone-iii", || String::from("S(0) ≠ 1"));
    let pts = domain.points();
    for &x in pts {
        let Some(sx) = s.value(&x) else { continue };
        if sx == frame.top() && x != zero {
            r.expect(s.value(&backend.neg(x)) != Some(frame.top()), "cone-ii", || {
                format!("x={}", backend.show(x))
            });
        }
        for &y in pts {
            let Some(sy) = s.value(&y) else { continue };
            if let Some(sxy) = s.value(&backend.add(x, y)) {
                r.expect(frame.leq(frame.meet(sx, sy), sxy), "cone-i", || {
                    format!("x={} y={}", backend.show(x), backend.show(y))
                });
            }
            if let Some(c) = s.value(&backend.conj(x, y)) {
                r.expect(c == sy, "cone-iii", || format!("x={} y={}", backend.show(x), backend.show(y)));
            }
        }
    }
    r
}

/// The L-ordered group with `e(a, b) = S(b - a)`, after checking the cone
/// axioms over the domain.
pub fn order_from_cone<B: GroupBackend>(
    frame: Arc<Frame>,
    backend: B,
    s: Arc<dyn ValueMap<B::Elem>>,
    domain: &Domain<B::Elem>,
) -> Result<LOrderedGroup<B>, OgroupError> {
    let r = validate_cone_axioms(&backend, &frame, &*s, domain);
    if !r.holds() {
        return Err(OgroupError::ConeAxiomsFailed(r));
    }
    Ok(LOrderedGroup::from_cone_unchecked(frame, backend, s))
}

/// Output of [`cone_closure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult<E: Ord> {
    /// `∨ {S(x) | x ≠ 0}` over the domain.
    pub alpha: FrameElt,
    /// `S̄(x) = ∨_a S(a+x-a)`.
    pub s_bar: PointMap<E>,
    /// Least map above `S̄` closed under `T(x) ∧ T(y) ≤ T(x+y)`.
    pub t: PointMap<E>,
    pub iterations: usize,
    /// Cone axioms of `T`.
    pub validation: CheckReport,
    pub status: CertStatus,
}

/// Closes a map bounded away from 1 off zero to a positive cone.
///
/// `T` is the least fixpoint of `T(x) ∨= T(u) ∧ T(v)` for `u + v = x`,
/// starting from `S̄`; on a window only factorizations inside the window
/// are seen.
pub fn cone_closure<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    backend: &B,
    frame: &Frame,
    s: &M,
    domain: &Domain<B::Elem>,
) -> Result<ClosureResult<B::Elem>, OgroupError> {
    let zero = backend.zero();
    if s.value(&zero) != Some(frame.top()) {
        return Err(OgroupError::PreconditionUnmet(String::from("S(0) ≠ 1")));
    }
    let pts = domain.points();
    let mut alpha = frame.bottom();
    for &x in pts.iter().filter(|&&x| x != zero) {
        let v = s.value(&x).ok_or_else(|| OgroupError::RelationUndefined(backend.show(x)))?;
        if v == frame.top() {
            return Err(OgroupError::BoundViolation(format!("S({}) = 1", backend.show(x))));
        }
        alpha = frame.join(alpha, v);
    }
    if alpha == frame.top() {
        return Err(OgroupError::BoundViolation(String::from("no α < 1 bounds S off zero")));
    }

    let mut t: Vec<FrameElt> = pts
        .iter()
        .map(|&x| frame.join_all(pts.iter().filter_map(|&a| s.value(&backend.conj(a, x)))))
        .collect();
    let s_bar = PointMap::from_fn(pts, |x| t[domain.index_of(x).expect("domain point")]);

    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut changed = false;
        for (i, &u) in pts.iter().enumerate() {
            for (j, &v) in pts.iter().enumerate() {
                let Some(k) = domain.index_of(&backend.add(u, v)) else { continue };
                let w = frame.join(t[k], frame.meet(t[i], t[j]));
                if w != t[k] {
                    t[k] = w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let t = PointMap::from_fn(pts, |x| t[domain.index_of(x).expect("domain point")]);
    let validation = validate_cone_axioms(backend, frame, &t, domain);
    Ok(ClosureResult { alpha, s_bar, t, iterations, validation, status: domain.status() })
}

/// Output of [`cone_extension`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionResult<E: Ord> {
    pub closure: ClosureResult<E>,
    /// `H = T` off `A`, 1 on `A`.
    pub h: PointMap<E>,
    /// `H(x) ∧ H(y) ≤ H(x+y)` split by the membership of `x` and `y` in
    /// `A` (clauses `"case-1"` to `"case-4"`), plus the cone axioms of `H`.
    pub report: CheckReport,
}

/// Extends the closure of `S` by setting it to 1 on `A`.
///
/// `A` must be closed under `+`, avoid 0, and contain no pair `x, -x`;
/// `S` must equal `alpha` on `A` and stay below it elsewhere off 0.
pub fn cone_extension<B: GroupBackend, M: ValueMap<B::Elem> + ?Sized>(
    backend: &B,
    frame: &Frame,
    s: &M,
    in_a: &dyn Fn(&B::Elem) -> bool,
    alpha: FrameElt,
    domain: &Domain<B::Elem>,
) -> Result<ExtensionResult<B::Elem>, OgroupError> {
    let zero = backend.zero();
    let pts = domain.points();
    let bad = |w: String| Err(OgroupError::ASetInvalid(w));
    if in_a(&zero) {
        return bad(String::from("0 ∈ A"));
    }
    for &x in pts {
        let sx = s.value(&x).ok_or_else(|| OgroupError::RelationUndefined(backend.show(x)))?;
        if in_a(&x) {
            if in_a(&backend.neg(x)) {
                return bad(format!("{} and its inverse in A", backend.show(x)));
            }
            if sx != alpha {
                return bad(format!("S({}) ≠ α on A", backend.show(x)));
            }
            for &y in pts.iter().filter(|y| in_a(y)) {
                if !in_a(&backend.add(x, y)) {
                    return bad(format!("{} + {} ∉ A", backend.show(x), backend.show(y)));
                }
            }
        } else if x != zero && !frame.leq(sx, alpha) {
            return bad(format!("S({}) ≰ α off A", backend.show(x)));
        }
    }

    let closure = cone_closure(backend, frame, s, domain)?;
    let h_val = |x: &B::Elem| -> Option<FrameElt> {
        if in_a(x) {
            Some(frame.top())
        } else {
            closure.t.value(x)
        }
    };
    let h = PointMap::from_fn(pts, |x| h_val(x).expect("domain point"));
    let mut report = CheckReport::new(domain.status());
    for &x in pts {
        for &y in pts {
            let Some(hxy) = h_val(&backend.add(x, y)) else { continue };
            let clause = match (in_a(&x), in_a(&y)) {
                (true, true) => "case-1",
                (true, false) => "case-2",
                (false, true) => "case-3",
                (false, false) => "case-4",
            };
            let (hx, hy) = (h_val(&x).expect("domain point"), h_val(&y).expect("domain point"));
            report.expect(frame.leq(frame.meet(hx, hy), hxy), clause, || {
                format!("x={} y={}", backend.show(x), backend.show(y))
            });
        }
    }
    report.merge(validate_cone_axioms(backend, frame, &h, domain));
    Ok(ExtensionResult { closure, h, report })
}

/// The three equivalent conditions on a homomorphism `f: G → H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomEquivalence {
    /// `e(0,x) ≤ e(0,f x)`.
    pub cone: CheckReport,
    /// `e(x,y) ≤ e(f x, f y)`.
    pub monotone: CheckReport,
    /// `f(S_G) ⊆ S_H`.
    pub image: CheckReport,
}

impl HomEquivalence {
    pub fn consistent(&self) -> bool {
        self.cone.holds() == self.monotone.holds() && self.monotone.holds() == self.image.holds()
    }
}

/// Checks that `f` is a homomorphism on the domain, then evaluates the
/// three conditions separately.
pub fn monotone_hom_equivalence<B: GroupBackend, C: GroupBackend>(
    g: &LOrderedGroup<B>,
    h: &LOrderedGroup<C>,
    f: &dyn Fn(B::Elem) -> C::Elem,
    domain: &Domain<B::Elem>,
) -> Result<HomEquivalence, OgroupError> {
    let (gb, hb) = (g.backend(), h.backend());
    let l = g.frame();
    let pts = domain.points();
    for &x in pts {
        for &y in pts {
            if f(gb.add(x, y)) != hb.add(f(x), f(y)) {
                return Err(OgroupError::NotAHomomorphism(format!("x={} y={}", gb.show(x), gb.show(y))));
            }
        }
    }
    let (zg, zh) = (gb.zero(), hb.zero());
    let status = domain.status();
    let mut cone = CheckReport::new(status.clone());
    let mut image = CheckReport::new(status.clone());
    let mut img: alloc::collections::BTreeMap<C::Elem, FrameElt> = Default::default();
    for &x in pts {
        let v = g.e_req(zg, x)?;
        cone.expect(l.leq(v, h.e_req(zh, f(x))?), "cone", || format!("x={}", gb.show(x)));
        let slot = img.entry(f(x)).or_insert(l.bottom());
        *slot = l.join(*slot, v);
    }
    for (y, v) in img {
        image.expect(l.leq(v, h.e_req(zh, y)?), "image", || format!("y={}", hb.show(y)));
    }
    let mut monotone = CheckReport::new(status);
    for &x in pts {
        for &y in pts {
            monotone.expect(l.leq(g.e_req(x, y)?, h.e_req(f(x), f(y))?), "monotone", || {
                format!("x={} y={}", gb.show(x), gb.show(y))
            });
        }
    }
    Ok(HomEquivalence { cone, monotone, image })
}
