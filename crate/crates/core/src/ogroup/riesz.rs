//! Distributivity criterion, the power identities and Riesz decomposition
//! in L-ordered groups with crisp lattice operations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{GroupView, OgroupError};
use crate::frame::FrameElt;
use crate::group::GroupBackend;
use crate::report::{CertStatus, CheckReport};
use crate::subset::FuzzySubset;

/// Both sides of the distributivity criterion for one `a` and `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport<E> {
    pub join: E,
    /// `a ∧ ⊔S = ⊔(a ∧ S)`.
    pub lattice_equality: bool,
    /// For all `x`: `∧_y [S(y) → e(x, (a∧J)-(a∧y))] ≤ ∧_y [S(y) → e(x, J-y)]`.
    pub inequality: CheckReport,
    pub status: CertStatus,
}

impl<E> CriterionReport<E> {
    /// Whether the two sides of the equivalence agree.
    pub fn agree(&self) -> bool {
        self.lattice_equality == self.inequality.holds()
    }
}

/// Evaluates `a ∧ ⊔S = ⊔(a ∧ S)` and the equivalent inequality over the
/// domain, where `(a ∧ S)(z) = ∨ {S(y) | a ∧ y = z}`.
pub fn distributivity_criterion<B: GroupBackend>(
    view: &GroupView<B>,
    a: B::Elem,
    s: &FuzzySubset<B::Elem>,
) -> Result<CriterionReport<B::Elem>, OgroupError> {
    let g = view.group();
    let f = g.frame();
    let be = g.backend();
    let j = view
        .join(s)?
        .element
        .ok_or_else(|| OgroupError::PreconditionUnmet(format!("⊔S missing for S={}", g.describe(s))))?;
    let aj = view.crisp_meet_req(a, j)?;
    let mut meets = Vec::with_capacity(s.len());
    for (&y, v) in s.iter() {
        meets.push((y, view.crisp_meet_req(a, y)?, v));
    }
    let mut a_s = FuzzySubset::empty(f);
    for &(_, ay, v) in &meets {
        a_s.raise(f, ay, v);
    }
    let joined = view.join(&a_s)?;
    let lattice_equality = joined.element == Some(aj);

    let mut inequality = CheckReport::new(view.status());
    for &x in view.domain().points() {
        let mut lhs = f.top();
        let mut rhs = f.top();
        for &(y, ay, v) in &meets {
            lhs = f.meet(lhs, f.imp(v, view.e_req(x, be.sub(aj, ay))?));
            rhs = f.meet(rhs, f.imp(v, view.e_req(x, be.sub(j, y))?));
        }
        inequality.expect(f.leq(lhs, rhs), "thm-4.6", || format!("x={}", be.show(x)));
    }
    Ok(CriterionReport { join: j, lattice_equality, inequality, status: view.status().combine(&joined.status) })
}

/// `e(z, 0) = e(nz ∨ 0, (n-1)(z ∨ 0))`.
pub fn power_identity<B: GroupBackend>(view: &GroupView<B>, z: B::Elem, n: usize) -> Result<CheckReport, OgroupError> {
    if n == 0 {
        return Err(OgroupError::PreconditionUnmet(String::from("n ≥ 1")));
    }
    let be = view.group().backend();
    let zero = be.zero();
    let lhs = view.e_req(z, zero)?;
    let nz0 = view.crisp_join_req(be.times(n, z), zero)?;
    let z0 = view.crisp_join_req(z, zero)?;
    let rhs = view.e_req(nz0, be.times(n - 1, z0))?;
    let mut r = CheckReport::new(view.status());
    r.expect(lhs == rhs, "thm-4.7-i", || format!("z={} n={n}", be.show(z)));
    Ok(r)
}

/// `e(x, y) = e(nx ∨ ny, (n-1)(x ∨ y) + y)` for commuting `x, y`, and the
/// crisp consequence `nx ≤ ny ⟹ x ≤ y`.
pub fn power_identity_pair<B: GroupBackend>(
    view: &GroupView<B>,
    x: B::Elem,
    y: B::Elem,
    n: usize,
) -> Result<CheckReport, OgroupError> {
    let be = view.group().backend();
    if n == 0 {
        return Err(OgroupError::PreconditionUnmet(String::from("n ≥ 1")));
    }
    if be.add(x, y) != be.add(y, x) {
        return Err(OgroupError::PreconditionUnmet(format!("{} and {} do not commute", be.show(x), be.show(y))));
    }
    let top = view.group().frame().top();
    let (nx, ny) = (be.times(n, x), be.times(n, y));
    let lhs = view.e_req(x, y)?;
    let left = view.crisp_join_req(nx, ny)?;
    let right = be.add(be.times(n - 1, view.crisp_join_req(x, y)?), y);
    let rhs = view.e_req(left, right)?;
    let w = || format!("x={} y={} n={n}", be.show(x), be.show(y));
    let mut r = CheckReport::new(view.status());
    r.expect(lhs == rhs, "thm-4.7-ii", w);
    if view.e_req(nx, ny)? == top {
        r.expect(lhs == top, "cor-4.7", w);
    }
    Ok(r)
}

fn hypothesis<B: GroupBackend>(
    view: &GroupView<B>,
    a: B::Elem,
    bs: &[B::Elem],
    t: FrameElt,
) -> Result<(), OgroupError> {
    let f = view.group().frame();
    let be = view.group().backend();
    let zero = be.zero();
    if !f.leq(t, view.e_req(zero, a)?) {
        return Err(OgroupError::HypothesisFailed { conjunct: "e(0,a)", index: None });
    }
    for (i, &b) in bs.iter().enumerate() {
        if !f.leq(t, view.e_req(zero, b)?) {
            return Err(OgroupError::HypothesisFailed { conjunct: "e(0,b_i)", index: Some(i) });
        }
    }
    let sum = bs.iter().fold(zero, |acc, &b| be.add(acc, b));
    if !f.leq(t, view.e_req(a, sum)?) {
        return Err(OgroupError::HypothesisFailed { conjunct: "e(a,Σb)", index: None });
    }
    Ok(())
}

fn accepts<B: GroupBackend>(view: &GroupView<B>, x: B::Elem, b: B::Elem, t: FrameElt) -> Result<bool, OgroupError> {
    let f = view.group().frame();
    let zero = view.group().backend().zero();
    Ok(f.leq(t, f.meet(view.e_req(zero, x)?, view.e_req(x, b)?)))
}

/// Splits `a` as `a₁ + … + aₙ` with `t ≤ e(0, aᵢ) ∧ e(aᵢ, bᵢ)`, given
/// `t ≤ e(0,a) ∧ e(0,bᵢ) ∧ e(a, b₁+…+bₙ)`.
///
/// Peels off `aₙ = a ∧ bₙ` and recurses on `0 ∨ (a - bₙ)` with the
/// remaining `b`s; the last remainder is `a₁`. The output is checked
/// against the postcondition before it is returned.
pub fn riesz_decompose<B: GroupBackend>(
    view: &GroupView<B>,
    a: B::Elem,
    bs: &[B::Elem],
    t: FrameElt,
) -> Result<Vec<B::Elem>, OgroupError> {
    if bs.is_empty() {
        return Err(OgroupError::PreconditionUnmet(String::from("no b given")));
    }
    hypothesis(view, a, bs, t)?;
    let be = view.group().backend();
    let zero = be.zero();
    let mut out = vec![zero; bs.len()];
    let mut cur = a;
    for k in (1..bs.len()).rev() {
        out[k] = view.crisp_meet_req(cur, bs[k])?;
        cur = view.crisp_join_req(zero, be.sub(cur, bs[k]))?;
    }
    out[0] = cur;

    let sum = out.iter().fold(zero, |acc, &x| be.add(acc, x));
    if sum != a {
        return Err(OgroupError::DecompositionUnverified(format!("Σaᵢ = {} ≠ a", be.show(sum))));
    }
    for (i, (&x, &b)) in out.iter().zip(bs).enumerate() {
        if !accepts(view, x, b, t)? {
            return Err(OgroupError::DecompositionUnverified(format!("i={} a_i={}", i + 1, be.show(x))));
        }
    }
    Ok(out)
}

/// Brute-force search of the domain for a decomposition with the same
/// postcondition, independent of the lattice operations. Returns the first
/// in lexicographic order of domain indices.
pub fn riesz_oracle<B: GroupBackend>(
    view: &GroupView<B>,
    a: B::Elem,
    bs: &[B::Elem],
    t: FrameElt,
) -> Result<Option<Vec<B::Elem>>, OgroupError> {
    RieszOracle::new(view, t).solve(a, bs)
}

/// [`riesz_oracle`] with the candidate set of each `b` kept across calls.
pub struct RieszOracle<'v, B: GroupBackend> {
    view: &'v GroupView<B>,
    t: FrameElt,
    cands: BTreeMap<B::Elem, Vec<B::Elem>>,
}

impl<'v, B: GroupBackend> RieszOracle<'v, B> {
    pub fn new(view: &'v GroupView<B>, t: FrameElt) -> Self {
        RieszOracle { view, t, cands: BTreeMap::new() }
    }

    fn candidates(&mut self, b: B::Elem) -> Result<(), OgroupError> {
        if !self.cands.contains_key(&b) {
            let mut c = Vec::new();
            for &x in self.view.domain().points() {
                if accepts(self.view, x, b, self.t)? {
                    c.push(x);
                }
            }
            self.cands.insert(b, c);
        }
        Ok(())
    }

    pub fn solve(&mut self, a: B::Elem, bs: &[B::Elem]) -> Result<Option<Vec<B::Elem>>, OgroupError> {
        let n = bs.len();
        if n == 0 {
            return Ok(None);
        }
        for &b in bs {
            self.candidates(b)?;
        }
        let cands: Vec<&[B::Elem]> = bs.iter().map(|b| self.cands[b].as_slice()).collect();
        let be = self.view.group().backend();
        let mut pick = vec![be.zero(); n];
        let found = search(self.view, &cands, bs, self.t, 0, be.zero(), a, &mut pick)?;
        Ok(found.then_some(pick))
    }
}

#[allow(clippy::too_many_arguments)]
fn search<B: GroupBackend>(
    view: &GroupView<B>,
    cands: &[&[B::Elem]],
    bs: &[B::Elem],
    t: FrameElt,
    i: usize,
    partial: B::Elem,
    target: B::Elem,
    pick: &mut [B::Elem],
) -> Result<bool, OgroupError> {
    let be = view.group().backend();
    if i + 1 == pick.len() {
        let last = be.add(be.neg(partial), target);
        if view.idx(last).is_some() && accepts(view, last, bs[i], t)? {
            pick[i] = last;
            return Ok(true);
        }
        return Ok(false);
    }
    for &x in cands[i] {
        pick[i] = x;
        if search(view, cands, bs, t, i + 1, be.add(partial, x), target, pick)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `t ≤ e(a ∧ (b+c), (a∧b) + (a∧c))` given `t ≤ e(0,a) ∧ e(0,b) ∧ e(0,c)`.
pub fn riesz_meet_inequality<B: GroupBackend>(
    view: &GroupView<B>,
    a: B::Elem,
    b: B::Elem,
    c: B::Elem,
    t: FrameElt,
) -> Result<CheckReport, OgroupError> {
    let f = view.group().frame();
    let be = view.group().backend();
    let zero = be.zero();
    for (x, name) in [(a, "e(0,a)"), (b, "e(0,b)"), (c, "e(0,c)")] {
        if !f.leq(t, view.e_req(zero, x)?) {
            return Err(OgroupError::PreconditionUnmet(String::from(name)));
        }
    }
    let lhs = view.crisp_meet_req(a, be.add(b, c))?;
    let rhs = be.add(view.crisp_meet_req(a, b)?, view.crisp_meet_req(a, c)?);
    let mut r = CheckReport::new(view.status());
    r.expect(f.leq(t, view.e_req(lhs, rhs)?), "cor-4.9", || {
        format!("a={} b={} c={}", be.show(a), be.show(b), be.show(c))
    });
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Window;
    use crate::ogroup::tests::{chain3, crisp_z, fuzzy_z, z};

    #[test]
    fn criterion_on_crisp_z() {
        let g = crisp_z(chain3(), 1);
        let f = g.frame_arc().clone();
        let view = g.view(&g.backend().domain(Some(&Window::cube(1, 8))).unwrap()).unwrap();
        let s = FuzzySubset::crisp(&f, [z(-1), z(3)]);
        let r = distributivity_criterion(&view, z(1), &s).unwrap();
        assert_eq!(r.join, z(3));
        assert!(r.lattice_equality);
        assert!(r.agree());
        assert!(r.inequality.holds());
    }

    #[test]
    fn power_identities() {
        let g = crisp_z(chain3(), 1);
        let view = g.view(&g.backend().domain(Some(&Window::cube(1, 16))).unwrap()).unwrap();
        for k in -4..=4 {
            for n in 1..=4 {
                assert!(power_identity(&view, z(k), n).unwrap().holds());
                for l in -4..=4 {
                    assert!(power_identity_pair(&view, z(k), z(l), n).unwrap().holds());
                }
            }
        }
        assert!(matches!(power_identity(&view, z(1), 0), Err(OgroupError::PreconditionUnmet(_))));

        let g = fuzzy_z();
        let view = g.view(view.domain()).unwrap();
        assert!(matches!(power_identity(&view, z(1), 2), Err(OgroupError::LatticeOpMissing(_))));
    }

    #[test]
    fn riesz_on_z() {
        let g = crisp_z(chain3(), 1);
        let top = g.frame().top();
        let view = g.view(&g.backend().domain(Some(&Window::cube(1, 8))).unwrap()).unwrap();
        let parts = riesz_decompose(&view, z(5), &[z(2), z(4)], top).unwrap();
        assert_eq!(parts, vec![z(1), z(4)]);
        assert!(riesz_oracle(&view, z(5), &[z(2), z(4)], top).unwrap().is_some());
        assert_eq!(
            riesz_decompose(&view, z(5), &[z(2), z(1)], top),
            Err(OgroupError::HypothesisFailed { conjunct: "e(a,Σb)", index: None })
        );
        assert_eq!(
            riesz_decompose(&view, z(1), &[z(2), z(-1)], top),
            Err(OgroupError::HypothesisFailed { conjunct: "e(0,b_i)", index: Some(1) })
        );
        assert!(riesz_meet_inequality(&view, z(2), z(1), z(3), top).unwrap().holds());
    }
}
