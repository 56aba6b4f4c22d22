//! Counterexample search over enumerated small structures, with one
//! hypothesis of a claim optionally dropped.

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;

use lfuzzord_core::enumerate::{cones, for_each_assignment, group_maps, lordered_sets};
use lfuzzord_core::group::{CmpOp, Constraint, PointMap, RegionMap, Rule, ValueMap};
use lfuzzord_core::ogroup::order_from_cone;
use lfuzzord_core::order::{is_l_lattice, lattice_laws, normalized_meet_law, Bound, LatticeLaw, Subset};
use lfuzzord_core::subgroup::{build_quotient_unchecked, is_convex, is_l_subgroup, is_normal};
use lfuzzord_core::{
    CertStatus, Domain, FiniteGroup, Frame, FrameElt, FreeAbelian, LOrderedGroup, LOrderedSet,
    SearchConfig, Window,
};

use crate::error::CliError;

#[derive(Clone, Debug)]
pub struct HuntQuery {
    pub claim: String,
    pub weakening: Option<String>,
    pub max_size: usize,
    pub frame: Arc<Frame>,
    pub search: SearchConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntOutcome {
    pub schema: &'static str,
    pub claim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weakening: Option<String>,
    pub max_size: usize,
    pub searched: u64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl HuntOutcome {
    /// 1 when a witness was found, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.witness.is_some())
    }

    pub fn text(&self) -> String {
        let drop = self.weakening.as_deref().map_or(String::new(), |w| format!(" without {w}"));
        match &self.witness {
            Some(w) => format!("{}{drop}: witness after {} structures: {w}", self.claim, self.searched),
            None => format!(
                "{}{drop}: none among {} structures of size <= {} [{}]",
                self.claim, self.searched, self.max_size, self.status
            ),
        }
    }
}

/// Weakenings each claim family accepts.
pub const WEAKENINGS: &[(&str, &[&str])] = &[
    ("thm-quotient", &["convex"]),
    ("thm-join-meet", &["E3"]),
    ("prop-3.4.2-iii", &["normalized"]),
];

fn family(claim: &str) -> &str {
    if claim.starts_with("thm-quotient") {
        "thm-quotient"
    } else {
        claim
    }
}

struct Found {
    searched: u64,
    status: CertStatus,
    witness: Option<String>,
}

pub fn counterexample_search(q: &HuntQuery) -> Result<HuntOutcome, CliError> {
    let fam = family(&q.claim);
    let weak = q.weakening.as_deref().map(normalize_weakening);
    if let Some(w) = weak {
        let ok = WEAKENINGS.iter().any(|(c, ws)| *c == fam && ws.contains(&w));
        if !ok {
            return Err(CliError::UnknownWeakening { claim: q.claim.clone(), weakening: w.to_string() });
        }
    }
    let found = match fam {
        "thm-quotient" => quotient_hunt(q, weak.is_some())?,
        "thm-join-meet" => join_hunt(q, weak.is_some())?,
        "prop-3.4.2-iii" => normalized_hunt(q, weak.is_some())?,
        id => match LatticeLaw::ALL.iter().find(|l| l.id() == id) {
            Some(&law) => law_hunt(q, law)?,
            None if crate::claims::find(id).is_some() => {
                return Err(CliError::Usage(format!("claim {id} has no enumeration hunt; use `verify`")))
            }
            None => return Err(CliError::UnknownClaim(id.to_string())),
        },
    };
    Ok(HuntOutcome {
        schema: crate::report::SCHEMA,
        claim: q.claim.clone(),
        weakening: weak.map(str::to_string),
        max_size: q.max_size,
        searched: found.searched,
        status: found.status.to_string(),
        witness: found.witness,
    })
}

fn normalize_weakening(w: &str) -> &str {
    let w = w.trim();
    let w = w.strip_suffix(" dropped").unwrap_or(w);
    match w {
        "convexity" => "convex",
        "e3" => "E3",
        "normalization" | "∨_y S(y)=1" => "normalized",
        other => other,
    }
}

fn guard_tables(q: &HuntQuery, what: &str, max_n: usize) -> Result<(), CliError> {
    let l = q.frame.size() as u128;
    let needed: u128 = (1..=max_n).map(|n| l.saturating_pow((n * n.saturating_sub(1)) as u32)).sum();
    if needed > q.search.guard as u128 {
        return Err(CliError::GuardExceeded { what: what.to_string(), needed, guard: q.search.guard });
    }
    Ok(())
}

fn describe_table(p: &LOrderedSet) -> String {
    let f = p.frame();
    let rows: Vec<String> = p
        .table()
        .iter()
        .map(|r| r.iter().map(|&v| f.name(v)).collect::<Vec<_>>().join(","))
        .collect();
    format!("e=[{}]", rows.join("; "))
}

/// Join and meet certificates are unique and agree with the raw oracle.
/// Without E3 the relation is only a fuzzy preorder and uniqueness fails.
fn join_hunt(q: &HuntQuery, drop_e3: bool) -> Result<Found, CliError> {
    guard_tables(q, "relation tables", q.max_size)?;
    let mut searched = 0;
    let mut status = CertStatus::Certified;
    for n in 1..=q.max_size {
        for p in lordered_sets(q.frame.clone(), n, !drop_e3) {
            searched += 1;
            let mut witness = None;
            status = status.combine(&for_each_assignment(n, p.frame(), &q.search, |vals| {
                let s = Subset::from_pairs(p.frame(), vals.iter().copied().enumerate());
                for bound in [Bound::Join, Bound::Meet] {
                    let cert = p.certifiers(&s, bound);
                    let problem = if cert.len() > 1 {
                        Some(format!("{} certifying elements {cert:?}", cert.len()))
                    } else if cert != p.oracle_candidates(&s, bound) {
                        Some(String::from("certificate disagrees with the oracle"))
                    } else {
                        None
                    };
                    if let Some(msg) = problem {
                        witness = Some(format!("{} S={} {bound:?}: {msg}", describe_table(&p), p.describe(&s)));
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            }));
            if witness.is_some() {
                return Ok(Found { searched, status, witness });
            }
        }
    }
    Ok(Found { searched, status, witness: None })
}

fn lattices(q: &HuntQuery) -> Result<Vec<LOrderedSet>, CliError> {
    guard_tables(q, "relation tables", q.max_size)?;
    let mut out = Vec::new();
    for n in 1..=q.max_size {
        out.extend(lordered_sets(q.frame.clone(), n, true).filter(|p| is_l_lattice(p, &q.search).holds));
    }
    Ok(out)
}

fn law_hunt(q: &HuntQuery, law: LatticeLaw) -> Result<Found, CliError> {
    let mut found = Found { searched: 0, status: CertStatus::Certified, witness: None };
    for p in lattices(q)? {
        found.searched += 1;
        for (l, rep) in lattice_laws(&p, &q.search)? {
            if l != law {
                continue;
            }
            found.status = found.status.combine(&rep.status);
            if let Some(v) = rep.first() {
                found.witness = Some(format!("{} {}: {}", describe_table(&p), v.clause, v.witness));
                return Ok(found);
            }
        }
    }
    Ok(found)
}

/// `a ∧ ⊓S = ⊓(a ∧ S)`, with or without the normalization `∨ S(y) = 1`.
fn normalized_hunt(q: &HuntQuery, drop: bool) -> Result<Found, CliError> {
    let mut found = Found { searched: 0, status: CertStatus::Certified, witness: None };
    for p in lattices(q)? {
        found.searched += 1;
        let rep = normalized_meet_law(&p, &q.search, !drop)?;
        found.status = found.status.combine(&rep.status);
        if let Some(v) = rep.first() {
            found.witness = Some(format!("{} {}: {}", describe_table(&p), v.clause, v.witness));
            return Ok(found);
        }
    }
    Ok(found)
}

/// Finite groups of order at most `n`: cyclic groups and `ℤ₂×ℤ₂`.
pub fn small_groups(n: usize) -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> =
        (1..=n).map(|k| (format!("Z{k}"), FiniteGroup::cyclic(k).expect("cyclic"))).collect();
    if n >= 4 {
        let z2 = FiniteGroup::cyclic(2).expect("cyclic");
        out.push(("Z2xZ2".to_string(), FiniteGroup::product(&z2, &z2).expect("product")));
    }
    out
}

fn table_str(f: &Frame, m: &PointMap<usize>, n: usize) -> String {
    let vals: Vec<&str> = (0..n).map(|i| m.value(&i).map_or("?", |v| f.name(v))).collect();
    format!("[{}]", vals.join(","))
}

/// Sign cones on `ℤ` over the frame: every `(pos, neg)` with `neg ≤ pos`
/// and `neg < 1`.
fn z_cones(f: &Frame) -> Vec<(String, RegionMap)> {
    let mut out = Vec::new();
    for pos in f.elements() {
        for neg in f.elements().filter(|&n| n != f.top() && f.leq(n, pos)) {
            out.push((format!("Z cone +:{} -:{}", f.name(pos), f.name(neg)), RegionMap::signs(f.top(), pos, neg)));
        }
    }
    out
}

/// `alpha` on `kℤ`, `v` elsewhere.
fn lattice_map(k: usize, alpha: FrameElt, v: FrameElt) -> RegionMap {
    let c = Constraint::new(vec![1], 0, CmpOp::Mod(k as i64));
    RegionMap::new(1, vec![Rule { constraints: vec![c], value: alpha }], v)
}

/// Quotients by normal L-subgroups: every one on finite groups of order at
/// most `max_size`, then on `ℤ` every map `α` on `kℤ`, `v < α` elsewhere
/// with `k ≤ max_size`, under each sign cone, on a window. Finite groups
/// carry a trivial crisp order and never break; `ℤ` is where a
/// non-convex level subgroup collapses the quotient order.
fn quotient_hunt(q: &HuntQuery, drop_convex: bool) -> Result<Found, CliError> {
    let mut found = finite_quotient_hunt(q, drop_convex)?;
    if found.witness.is_some() {
        return Ok(found);
    }
    let f = q.frame.clone();
    let z = FreeAbelian::new(1).expect("rank");
    let radius = 4 * q.max_size.max(1) as i64;
    let d = Domain::of_window(&Window::cube(1, radius));
    let hypothesis = ["convex", "convex-criterion"];
    for (cname, cone) in z_cones(&f) {
        let g = LOrderedGroup::from_cone_unchecked(f.clone(), z, Arc::new(cone));
        for k in 1..=q.max_size {
            for alpha in f.elements() {
                for v in f.elements().filter(|&v| v != alpha && f.leq(v, alpha)) {
                    let s = lattice_map(k, alpha, v);
                    if !is_l_subgroup(&z, &f, &s, &d).holds() || !is_normal(&z, &f, &s, &d).holds() {
                        continue;
                    }
                    if !drop_convex && !is_convex(&g, &s, &d)?.holds() {
                        continue;
                    }
                    found.searched += 1;
                    let qs = match build_quotient_unchecked(&g, Arc::new(s), &d) {
                        Ok(qs) => qs,
                        Err(lfuzzord_core::SubgroupError::InfiniteIndex(_)) => continue,
                        Err(e) => return Err(e.into()),
                    };
                    found.status = found.status.combine(&qs.status);
                    if let Some(x) = qs.report.violations.iter().find(|v| !hypothesis.contains(&v.clause)) {
                        let desc = format!("{} on {k}Z, {} elsewhere", f.name(alpha), f.name(v));
                        found.witness = Some(format!("{cname} S={desc} {}: {}", x.clause, x.witness));
                        return Ok(found);
                    }
                }
            }
        }
    }
    Ok(found)
}

fn finite_quotient_hunt(q: &HuntQuery, drop_convex: bool) -> Result<Found, CliError> {
    let f = q.frame.clone();
    let groups = small_groups(q.max_size);
    let needed: u128 = groups.iter().map(|(_, g)| (f.size() as u128).saturating_pow(g.order() as u32)).sum();
    if needed > q.search.guard as u128 {
        return Err(CliError::GuardExceeded { what: "maps G -> L".into(), needed, guard: q.search.guard });
    }
    let mut found = Found { searched: 0, status: CertStatus::Certified, witness: None };
    for (name, grp) in groups {
        let d = Domain::finite(&grp);
        let n = grp.order();
        for cone in cones(grp.clone(), f.clone()) {
            let cone_s = table_str(&f, &cone, n);
            let g = order_from_cone(f.clone(), grp.clone(), Arc::new(cone), &d)?;
            for s in group_maps(&grp, &f) {
                if !is_l_subgroup(&grp, &f, &s, &d).holds() || !is_normal(&grp, &f, &s, &d).holds() {
                    continue;
                }
                if !drop_convex && !is_convex(&g, &s, &d)?.holds() {
                    continue;
                }
                found.searched += 1;
                let s_str = table_str(&f, &s, n);
                let qs = build_quotient_unchecked(&g, Arc::new(s), &d)?;
                let hypothesis = ["convex", "convex-criterion"];
                if let Some(v) = qs.report.violations.iter().find(|v| !hypothesis.contains(&v.clause)) {
                    found.witness = Some(format!("{name} cone={cone_s} S={s_str} {}: {}", v.clause, v.witness));
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}
