//! Claim registry: one stable id per statement, each mapped to a check.
//!
//! A claim runs on the structures supplied on the command line when they
//! are relevant to it, and otherwise on a fixed fixture bundle: enumerated
//! small L-ordered sets, every cone on `ℤ₄`, a torsion cone on `ℤ₅`, and
//! three cones on `ℤ`/`ℤ²` evaluated on windows.

use std::ops::ControlFlow;
use std::sync::Arc;
use std::time::Instant;

use lfuzzord_core::enumerate::{cones, for_each_assignment, group_maps, lordered_sets};
use lfuzzord_core::frame::verify_frame_laws;
use lfuzzord_core::group::{FnMap, PointMap, RegionMap, ValueMap};
use lfuzzord_core::ogroup::{
    bound_maps_monotone, check_fog, cone_closure, cone_extension, cone_of_group, distributivity_criterion,
    monotone_hom_equivalence, negation_identity, order_from_cone, power_identity, power_identity_pair,
    riesz_decompose, riesz_meet_inequality, translation_laws, validate_cone_axioms, verify_sum_law, GroupView,
    RieszOracle,
};
use lfuzzord_core::order::{
    check_distributive, has_right_adjoint, is_l_lattice, lattice_laws, Bound, LatticeLaw, Subset,
};
use lfuzzord_core::report::Violation;
use lfuzzord_core::subgroup::{
    build_quotient, convex_hull, down_cone_identity, induced_embedding, is_convex, is_l_subgroup, is_normal,
    level_subgroup, natural_projection, SubgroupError,
};
use lfuzzord_core::{
    CertStatus, CheckReport, Domain, FiniteGroup, Frame, FrameElt, FreeAbelian, FuzzySubset, GroupBackend,
    LOrderedGroup, LOrderedSet, SearchConfig, Window, ZVec,
};

use crate::error::CliError;
use crate::format::{hom_finite, hom_free, Carrier, HomDoc, LoadedGroup, MapDoc};
use crate::report::{ConfigEcho, RunReport, Verdict};

/// Structures given on the command line.
#[derive(Clone, Default)]
pub struct Inputs {
    pub order: Option<LOrderedSet>,
    pub group: Option<LoadedGroup>,
    pub sub: Option<MapDoc>,
    pub hom: Option<HomDoc>,
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub search: SearchConfig,
    pub frame: Option<Arc<Frame>>,
    pub window: Option<i64>,
    pub timing: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { search: SearchConfig::default(), frame: None, window: None, timing: false }
    }
}

impl Settings {
    pub fn fixture_frame(&self) -> Arc<Frame> {
        self.frame.clone().unwrap_or_else(|| Arc::new(Frame::chain(3).expect("3-chain")))
    }

    fn radius(&self) -> i64 {
        self.window.unwrap_or(8)
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            seed: format!("{:#x}", self.search.seed),
            guard: self.search.guard,
            samples: self.search.samples,
            window: self.window,
        }
    }
}

type Runner = fn(&Inputs, &Settings) -> Result<CheckReport, CliError>;

pub struct Claim {
    pub id: &'static str,
    /// The statement being checked.
    pub statement: &'static str,
    run: Runner,
}

impl Claim {
    pub fn run(&self, inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
        (self.run)(inputs, settings)
    }
}

macro_rules! claims {
    ($($id:literal => $run:expr, $statement:literal;)*) => {
        &[$(Claim { id: $id, statement: $statement, run: $run }),*]
    };
}

static REGISTRY: &[Claim] = claims! {
    "cor-3.4.2" => |i, s| lattice_law(i, s, LatticeLaw::Absorption),
        "If ∨_y S(y) = 1 then a ∧ ⊔(a ∨ S) = a and a ∨ ⊓(a ∧ S) = a.";
    "cor-4.9" => riesz_meet,
        "t ≤ e(0,a) ∧ e(0,b) ∧ e(0,c) ∧ e(0, a∧(b+c)) implies t ≤ e(a∧(b+c), (a∧b)+(a∧c)).";
    "cor-quotient" => projection,
        "π_S: G → G+S, g ↦ g+S, is a group homomorphism and monotone.";
    "def-3.3-crisp" => distributive_reduct,
        "If an L-lattice satisfies one of the distributive laws, then (P; ≤_e) is a distributive lattice.";
    "ex-make-convex" => hull_convex,
        "S̄(a) = ∨_{x,y} S(x) ∧ S(y) ∧ e(x,a) ∧ e(a,y) is convex, and the least convex map above S.";
    "frame-heyting" => frame_laws,
        "a→b = ∨{x | a∧x ≤ b}; (x∧y)→z = x→(y→z), x→(y∧z) = (x→y)∧(x→z), (x∨y)→z = (x→z)∧(y→z).";
    "prop-3.2" => |i, s| lattice_law(i, s, LatticeLaw::CrispLattice),
        "If (P;e) is an L-lattice, then (P; ≤_e) is a lattice.";
    "prop-3.4.2-i" => |i, s| lattice_law(i, s, LatticeLaw::MeetHom),
        "e(a, x∧y) = e(a,x) ∧ e(a,y).";
    "prop-3.4.2-ii" => |i, s| lattice_law(i, s, LatticeLaw::JoinHom),
        "e(x∨y, a) = e(x,a) ∧ e(y,a).";
    "prop-3.4.2-iii" => |i, s| lattice_law(i, s, LatticeLaw::NormalizedMeet),
        "If ∨_y S(y) = 1 then a ∧ ⊓S = ⊓(a ∧ S).";
    "prop-3.4.2-iv" => |i, s| lattice_law(i, s, LatticeLaw::NormalizedJoin),
        "If ∨_y S(y) = 1 then a ∨ ⊔S = ⊔(a ∨ S).";
    "prop-4.10" => sum_law,
        "In an L-lattice ordered group, ⊔(S+T) = ⊔S + ⊔T and ⊓(S+T) = ⊓S + ⊓T.";
    "prop-4.3-i" => |i, s| on_groups(i, s, false, |g| g.fog()),
        "e(x,y) = e(b+x+a, b+y+a).";
    "prop-4.3-ii" => |i, s| on_groups(i, s, false, |g| Ok(only(g.negation()?, &["negation"]))),
        "e(x,y) = e(-y,-x).";
    "prop-4.3-iii" => |i, s| translations(i, s, &["prop-4.3-iii"]),
        "a + ⊔S = ⊔(a+S) and ⊔S + a = ⊔(S+a).";
    "prop-4.3-iv" => |i, s| translations(i, s, &["prop-4.3-iv"]),
        "a + ⊓S = ⊓(a+S) and ⊓S + a = ⊓(S+a).";
    "prop-4.3-v" => |i, s| translations(i, s, &["prop-4.3-v", "join-meet-duality"]),
        "-(⊔S) = ⊓(-S) and -(⊓S) = ⊔(-S).";
    "prop-4.3-vi" => |i, s| on_groups(i, s, false, |g| Ok(only(g.negation()?, &["antitone"]))),
        "x ≤ y implies e(y,a) ≤ e(x,a).";
    "prop-4.3-vii" => |i, s| on_groups(i, s, true, |g| g.bounds_monotone()),
        "a ∧ - and a ∨ - are monotone.";
    "prop-convex-criterion" => convex_criterion,
        "A normal L-subgroup S is convex iff S(a) ≥ S(x) ∧ e(0,a) ∧ e(a,x) for all x, a.";
    "prop-convex-subgroup" => hull_normal,
        "If S is a normal L-subgroup then S̄ is a normal convex L-subgroup.";
    "prop-hom-cone" => hom_cone,
        "For a homomorphism f: e(0,x) ≤ e(0,f(x)) for all x iff f is monotone iff f(S_G) ⊆ S_H.";
    "prop-quo-ii" => level_set,
        "If S is normal and α = S(0), then S⁻¹(α) is a normal subgroup and S(x+y) = S(y+x).";
    "prop-semilattice" => |i, s| lattice_law(i, s, LatticeLaw::Semilattice),
        "⊔(S∪T) = ⊔S ∨ ⊔T and ⊓(S∪T) = ⊓S ∧ ⊓T.";
    "rmk-3.4-ii" => |i, s| lattice_law(i, s, LatticeLaw::SupportBounds),
        "∧ supp(S) ≤_e ⊓S and ⊔S ≤_e ∨ supp(S).";
    "rmk-3.4-iii" => |i, s| lattice_law(i, s, LatticeLaw::Splitting),
        "Joins and meets split along one support point and the rest.";
    "rmk-closure-i" => closure,
        "If S(0) = 1 and S(x) ≤ α < 1 off 0, the closure T of S̄(x) = ∨_a S(a+x-a) under sums is a positive cone.";
    "rmk-closure-ii" => extension,
        "Setting T to 1 on an additively closed A with 0 ∉ A and -A ∩ A = ∅ yields a positive cone H.";
    "rmk-down-cone" => down_cone,
        "An L-subgroup T is convex iff (↓T)⁺ = T⁺.";
    "thm-4.6" => criterion,
        "a ∧ ⊔S = ⊔(a∧S) iff ∧_y [S(y) → e(x,(a∧J)-(a∧y))] ≤ ∧_y [S(y) → e(x,J-y)] for all x.";
    "thm-4.7-i" => power_single,
        "e(z,0) = e(nz ∨ 0, (n-1)(z ∨ 0)).";
    "thm-4.7-ii" => power_pair,
        "For commuting x, y: e(x,y) = e(nx ∨ ny, (n-1)(x ∨ y) + y); in particular nx ≤ ny implies x ≤ y.";
    "thm-adjoint-i" => adjoint,
        "On a complete P, a monotone f has a fuzzy right adjoint iff f(⊔S) = ⊔f→(S) for all S.";
    "thm-cone-i" => |i, s| cone_clause(i, s, "cone-i"),
        "S(x) ∧ S(y) ≤ S(x+y) for the positive cone S.";
    "thm-cone-ii" => |i, s| cone_clause(i, s, "cone-ii"),
        "S(x) = S(-x) = 1 implies x = 0.";
    "thm-cone-iii" => |i, s| cone_clause(i, s, "cone-iii"),
        "S(0) = 1 and S(x+y-x) = S(y).";
    "thm-cone-iv" => cone_convex,
        "The positive cone is convex.";
    "thm-cone-converse" => cone_round_trip,
        "A map with properties (i)-(iii) is the positive cone of the L-order e(a,b) = S(b-a).";
    "thm-iso" => iso,
        "K(f)(x) = e_H(0,f(x)) ∧ e_H(f(x),0) is an L-filter and f̃: G+K(f) → H is injective, a homomorphism and monotone.";
    "thm-join-meet" => join_meet,
        "x0 = ⊔S iff e(x0,x) = ∧_y (S(y) → e(y,x)); x0 = ⊓S iff e(x,x0) = ∧_y (S(y) → e(x,y)).";
    "thm-quotient-i" => |i, s| quotient_part(i, s, QUOTIENT_I),
        "(G+S; ẽ, ⊕, S) is an L-ordered group with ẽ(a+S, b+S) = ∨_{x ∈ S⁻¹(α)} e(a-b, x).";
    "thm-quotient-ii" => |i, s| quotient_part(i, s, QUOTIENT_II),
        "S̃(a+S) = S(a) is an L-filter of G+S and S̃⁻¹(α) has exactly one element.";
    "thm-riesz" => riesz,
        "If t ≤ e(0,a) ∧ e(0,bᵢ) ∧ e(a, b₁+…+bₙ) then a = a₁+…+aₙ with t ≤ e(0,aᵢ) ∧ e(aᵢ,bᵢ).";
};

pub fn registry() -> &'static [Claim] {
    REGISTRY
}

pub fn find(id: &str) -> Option<&'static Claim> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Exact ids, `all`, or a prefix naming a group of sub-items
/// (`prop-4.3` selects `prop-4.3-i` through `prop-4.3-vii`).
pub fn resolve(ids: &[String]) -> Result<Vec<&'static Claim>, CliError> {
    let mut out: Vec<&'static Claim> = Vec::new();
    for q in ids.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let hits: Vec<&'static Claim> = if q == "all" {
            REGISTRY.iter().collect()
        } else {
            let prefix = format!("{q}-");
            REGISTRY.iter().filter(|c| c.id == q || c.id.starts_with(&prefix)).collect()
        };
        if hits.is_empty() {
            return Err(CliError::UnknownClaim(q.to_string()));
        }
        out.extend(hits);
    }
    out.sort_by_key(|c| c.id);
    out.dedup_by_key(|c| c.id);
    Ok(out)
}

/// Runs each claim on its own thread; reports come back ordered by id.
pub fn run_suite(claims: &[&'static Claim], inputs: &Inputs, settings: &Settings) -> Vec<RunReport> {
    let mut out: Vec<RunReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = claims
            .iter()
            .map(|c| scope.spawn(move || run_one(c, inputs, settings)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("claim thread panicked")).collect()
    });
    out.sort_by(|a, b| a.claim.cmp(&b.claim));
    out
}

pub fn run_one(claim: &Claim, inputs: &Inputs, settings: &Settings) -> RunReport {
    let start = Instant::now();
    let result = claim.run(inputs, settings);
    let elapsed = start.elapsed();
    RunReport::new(claim.id, result, settings.timing.then_some(elapsed), settings.echo())
}

impl RunReport {
    pub fn new(
        claim: &str,
        result: Result<CheckReport, CliError>,
        elapsed: Option<std::time::Duration>,
        config: ConfigEcho,
    ) -> Self {
        let (verdict, status, checked) = match result {
            Ok(r) => {
                let verdict = match r.violations.first() {
                    None if r.violation_count == 0 => Verdict::Holds,
                    first => Verdict::Violated {
                        clause: first.map_or(String::new(), |v| v.clause.to_string()),
                        witness: first.map_or(String::new(), |v| v.witness.clone()),
                        count: r.violation_count,
                    },
                };
                (verdict, Some(r.status), r.checked)
            }
            Err(e) => (Verdict::Error { kind: e.kind().to_string(), message: e.to_string() }, None, 0),
        };
        RunReport {
            claim: claim.to_string(),
            verdict,
            status: status.as_ref().map(|s| s.label().to_string()),
            scope: status.as_ref().map(|s| s.to_string()),
            checked,
            timing_ms: elapsed.map(|d| d.as_secs_f64() * 1e3),
            config,
        }
    }
}

fn certified() -> CheckReport {
    CheckReport::new(CertStatus::Certified)
}

/// Keeps only the violations of the named clauses.
pub fn only(mut r: CheckReport, clauses: &[&str]) -> CheckReport {
    let all_recorded = r.violation_count as usize == r.violations.len();
    r.violations.retain(|v| clauses.contains(&v.clause));
    if all_recorded || r.violations.is_empty() {
        r.violation_count = r.violations.len() as u64;
    }
    r
}

/// Prefixes every witness with the structure it was found on.
pub fn tagged(mut r: CheckReport, label: &str) -> CheckReport {
    for v in &mut r.violations {
        v.witness = format!("{label}: {}", v.witness);
    }
    r
}

fn frame_zoo(settings: &Settings) -> Vec<Frame> {
    if let Some(f) = &settings.frame {
        return vec![(**f).clone()];
    }
    let mut zoo: Vec<Frame> = (2..=8).filter_map(|n| Frame::chain(n).ok()).collect();
    zoo.extend((0..=3).filter_map(|k| Frame::boolean(k).ok()));
    let c = |n| Frame::chain(n).expect("chain");
    for (a, b) in [(c(2), c(3)), (c(2), c(4)), (c(2), Frame::boolean(2).expect("bool"))] {
        zoo.push(Frame::product(&a, &b).expect("product"));
    }
    zoo
}

fn frame_laws(_: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for f in frame_zoo(settings) {
        let fr = verify_frame_laws(&f);
        r.checked += fr.checked;
        for v in fr.violations {
            let w: Vec<&str> = v.witness.iter().map(|&x| f.name(x)).collect();
            r.fail(v.law.id(), format!("|L|={} at ({})", f.size(), w.join(", ")));
        }
    }
    Ok(r)
}

fn describe_order(p: &LOrderedSet) -> String {
    let rows: Vec<String> = p
        .table()
        .iter()
        .map(|r| r.iter().map(|&v| p.frame().name(v).to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("e=[{}]", rows.join("; "))
}

/// The given L-ordered set, or every L-ordered set on 1 to 3 points over
/// the configured frame (2- and 3-chains when none is set).
fn orders(inputs: &Inputs, settings: &Settings) -> Vec<LOrderedSet> {
    if let Some(p) = &inputs.order {
        return vec![p.clone()];
    }
    let frames: Vec<Arc<Frame>> = match &settings.frame {
        Some(f) => vec![f.clone()],
        None => vec![Arc::new(Frame::chain(2).expect("chain")), Arc::new(Frame::chain(3).expect("chain"))],
    };
    let mut out = Vec::new();
    for f in frames {
        for n in 1..=3 {
            out.extend(lordered_sets(f.clone(), n, true));
        }
    }
    out
}

fn lattices(inputs: &Inputs, settings: &Settings) -> Result<Vec<LOrderedSet>, CliError> {
    let all = orders(inputs, settings);
    let given = inputs.order.is_some();
    let mut out = Vec::new();
    for p in all {
        let c = is_l_lattice(&p, &settings.search);
        if c.holds {
            out.push(p);
        } else if given {
            return Err(CliError::Invalid(format!("the given L-ordered set is not an L-lattice ({})", describe_order(&p))));
        }
    }
    Ok(out)
}

fn join_meet(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for p in orders(inputs, settings) {
        let mut local = certified();
        local.status = for_each_assignment(p.size(), p.frame(), &settings.search, |vals| {
            let s = Subset::from_pairs(p.frame(), vals.iter().copied().enumerate());
            for bound in [Bound::Join, Bound::Meet] {
                let cert = p.certifiers(&s, bound);
                let oracle = p.oracle_candidates(&s, bound);
                let w = || format!("{bound:?} of S={}", p.describe(&s));
                local.expect(cert.len() <= 1, "unique", w);
                local.expect(cert == oracle, "certificate-oracle", w);
            }
            ControlFlow::Continue(())
        });
        r.merge(tagged(local, &describe_order(&p)));
    }
    Ok(r)
}

fn lattice_law(inputs: &Inputs, settings: &Settings, law: LatticeLaw) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for p in lattices(inputs, settings)? {
        for (l, rep) in lattice_laws(&p, &settings.search)? {
            if l == law {
                r.merge(tagged(rep, &describe_order(&p)));
            }
        }
    }
    Ok(r)
}

fn distributive_reduct(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for p in lattices(inputs, settings)? {
        let d = check_distributive(&p, &settings.search)?;
        let one_form = d.join_form.holds() || d.meet_form.holds();
        r.status = r.status.combine(&d.join_form.status);
        r.expect(!one_form || d.crisp_distributive, "crisp-distributive", || describe_order(&p));
    }
    Ok(r)
}

fn adjoint(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for p in lattices(inputs, settings)? {
        for a in p.points() {
            let f: Vec<usize> = p.points().map(|x| p.crisp_meet(a, x).expect("lattice")).collect();
            let rep = has_right_adjoint(&p, &p, &f, &settings.search);
            r.status = r.status.combine(&rep.preservation.status);
            r.expect(rep.consistent != Some(false), "adjoint-iff-preserves", || {
                format!("{} f=a∧- with a={a}", describe_order(&p))
            });
        }
    }
    Ok(r)
}

fn mid(f: &Frame) -> FrameElt {
    f.elements().find(|&x| x != f.top() && x != f.bottom()).unwrap_or(f.bottom())
}

fn z_cone(f: &Frame, pos: FrameElt, neg: FrameElt) -> Arc<dyn ValueMap<ZVec>> {
    Arc::new(RegionMap::signs(f.top(), pos, neg))
}

/// Componentwise order on `ℤⁿ`.
pub fn crisp_zn(f: Arc<Frame>, rank: usize) -> LOrderedGroup<FreeAbelian> {
    let (top, bot) = (f.top(), f.bottom());
    let s = FnMap::new(move |x: &ZVec| Some(if x.coords().iter().all(|&c| c >= 0) { top } else { bot }));
    LOrderedGroup::from_cone_unchecked(f, FreeAbelian::new(rank).expect("rank"), Arc::new(s))
}

/// Named group fixtures. `lattice` restricts to those whose crisp order is
/// a lattice.
pub fn group_fixtures(settings: &Settings, lattice: bool) -> Vec<(String, LoadedGroup)> {
    let f = settings.fixture_frame();
    let m = mid(&f);
    let z = FreeAbelian::new(1).expect("rank");
    let w1 = Window::cube(1, settings.radius());
    let w2 = Window::cube(2, settings.radius().min(4));
    let mut out = vec![
        ("crisp-z".to_string(), LoadedGroup::Free(crisp_zn(f.clone(), 1), w1.clone())),
        (
            "soft-z".to_string(),
            LoadedGroup::Free(LOrderedGroup::from_cone_unchecked(f.clone(), z, z_cone(&f, f.top(), m)), w1.clone()),
        ),
        ("crisp-z2".to_string(), LoadedGroup::Free(crisp_zn(f.clone(), 2), w2)),
    ];
    if lattice {
        return out;
    }
    out.push((
        "fuzzy-z".to_string(),
        LoadedGroup::Free(LOrderedGroup::from_cone_unchecked(f.clone(), z, z_cone(&f, m, f.bottom())), w1),
    ));
    for n in [4usize, 5] {
        let g = FiniteGroup::cyclic(n).expect("cyclic");
        let d = Domain::finite(&g);
        let cs: Vec<PointMap<usize>> = if n == 4 {
            cones(g.clone(), f.clone()).collect()
        } else {
            let mut v = vec![m; 5];
            v[0] = f.top();
            vec![PointMap::table(v)]
        };
        for c in cs {
            let label = format!("Z{n} cone {}", show_table(&f, &c, n));
            let lg = order_from_cone(f.clone(), g.clone(), Arc::new(c), &d).expect("enumerated cones are valid");
            out.push((label, LoadedGroup::Finite(lg)));
        }
    }
    out
}

fn show_table(f: &Frame, m: &PointMap<usize>, n: usize) -> String {
    let vals: Vec<&str> = (0..n).map(|i| m.value(&i).map_or("?", |v| f.name(v))).collect();
    format!("[{}]", vals.join(","))
}

fn groups(inputs: &Inputs, settings: &Settings, lattice: bool) -> Vec<(String, LoadedGroup)> {
    match &inputs.group {
        Some(g) => vec![("input".to_string(), g.clone())],
        None => group_fixtures(settings, lattice),
    }
}

/// Calls a generic body on the concrete backend of a [`LoadedGroup`].
#[macro_export]
macro_rules! with_group {
    ($lg:expr, |$g:ident, $d:ident| $body:expr) => {
        match $lg {
            $crate::format::LoadedGroup::Finite(gg) => {
                let $g = gg;
                let $d = &lfuzzord_core::Domain::finite($g.backend());
                $body
            }
            $crate::format::LoadedGroup::Free(gg, w) => {
                let $g = gg;
                let $d = &lfuzzord_core::Domain::of_window(w);
                $body
            }
        }
    };
}

/// Object-safe access to the clause checks that take only a group and a
/// domain.
pub trait DynGroup {
    fn fog(&self) -> Result<CheckReport, CliError>;
    fn negation(&self) -> Result<CheckReport, CliError>;
    fn bounds_monotone(&self) -> Result<CheckReport, CliError>;
}

struct Bound2<'a, B: Carrier> {
    g: &'a LOrderedGroup<B>,
    d: &'a Domain<B::Elem>,
}

impl<B: Carrier> DynGroup for Bound2<'_, B> {
    fn fog(&self) -> Result<CheckReport, CliError> {
        Ok(check_fog(self.g, self.d)?)
    }
    fn negation(&self) -> Result<CheckReport, CliError> {
        Ok(negation_identity(self.g, self.d)?)
    }
    fn bounds_monotone(&self) -> Result<CheckReport, CliError> {
        Ok(bound_maps_monotone(self.g, self.d)?)
    }
}

fn on_groups(
    inputs: &Inputs,
    settings: &Settings,
    lattice: bool,
    body: fn(&dyn DynGroup) -> Result<CheckReport, CliError>,
) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, lattice) {
        let rep = with_group!(&lg, |g, d| body(&Bound2 { g, d }))?;
        r.merge(tagged(rep, &label));
    }
    Ok(r)
}

fn translations(inputs: &Inputs, settings: &Settings, clauses: &[&str]) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, false) {
        let rep = match &lg {
            LoadedGroup::Finite(g) => {
                let d = Domain::finite(g.backend());
                let view = g.view(&d)?;
                let pts: Vec<usize> = g.backend().elements().collect();
                translation_laws(&view, &pts, &pts, &settings.search)?
            }
            LoadedGroup::Free(g, w) => {
                let d = Domain::of_window(w);
                let view = g.view(&d)?;
                let rank = g.backend().rank();
                let (support, shifts) = small_support(rank);
                translation_laws(&view, &support, &shifts, &settings.search)?
            }
        };
        r.merge(tagged(only(rep, clauses), &label));
    }
    Ok(r)
}

fn small_support(rank: usize) -> (Vec<ZVec>, Vec<ZVec>) {
    let unit = |i: usize, k: i64| {
        let mut c = vec![0; rank];
        c[i] = k;
        ZVec::new(&c)
    };
    let mut support = vec![ZVec::zero(rank), unit(0, 1), unit(0, -1)];
    let mut shifts = vec![unit(0, 2), unit(0, -3)];
    if rank > 1 {
        support.push(unit(1, 1));
        shifts.push(unit(1, 1));
    }
    (support, shifts)
}

fn sum_law(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, true) {
        let rep = with_group!(&lg, |g, d| sum_law_on(g, d))?;
        r.merge(tagged(rep, &label));
    }
    Ok(r)
}

/// Crisp subsets of size 1 and 2 drawn from a small neighbourhood of 0,
/// plus fuzzy two-point subsets; pairs lacking a bound are skipped.
fn sample_subsets<B: GroupBackend>(g: &LOrderedGroup<B>, d: &Domain<B::Elem>) -> Vec<FuzzySubset<B::Elem>> {
    let f = g.frame();
    let near: Vec<B::Elem> = d.points().iter().copied().filter(|&x| near_zero(g, x)).take(6).collect();
    let mut out = Vec::new();
    for (i, &x) in near.iter().enumerate() {
        out.push(FuzzySubset::crisp(f, [x]));
        for &y in &near[i + 1..] {
            out.push(FuzzySubset::crisp(f, [x, y]));
            out.push(FuzzySubset::from_pairs(f, [(x, f.top()), (y, mid(f))]));
        }
    }
    out
}

fn near_zero<B: GroupBackend>(g: &LOrderedGroup<B>, x: B::Elem) -> bool {
    let s = g.backend().show(x);
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .all(|t| t.trim().parse::<i64>().map_or(true, |v| v.abs() <= 1))
}

fn sum_law_on<B: GroupBackend>(g: &LOrderedGroup<B>, d: &Domain<B::Elem>) -> Result<CheckReport, CliError> {
    let view = g.view(d)?;
    let subsets = sample_subsets(g, d);
    let mut r = CheckReport::new(view.status());
    for s in &subsets {
        for t in &subsets {
            match verify_sum_law(&view, s, t) {
                Ok(rep) => r.merge(rep),
                Err(lfuzzord_core::OgroupError::PreconditionUnmet(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(r)
}

fn cone_clause(inputs: &Inputs, settings: &Settings, clause: &str) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, false) {
        let rep = with_group!(&lg, |g, d| {
            let s = cone_of_group(g, d)?;
            Ok::<_, CliError>(validate_cone_axioms(g.backend(), g.frame(), &s, d))
        })?;
        r.merge(tagged(only(rep, &[clause]), &label));
    }
    Ok(r)
}

fn cone_convex(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, false) {
        let rep = with_group!(&lg, |g, d| {
            let s = cone_of_group(g, d)?;
            Ok::<_, CliError>(is_convex(g, &s, d)?.definition)
        })?;
        r.merge(tagged(rep, &label));
    }
    Ok(r)
}

/// `order_from_cone ∘ cone_of_group` is the identity on the cone, and the
/// rebuilt order passes the axioms.
pub fn cone_round_trip_on<B: GroupBackend>(g: &LOrderedGroup<B>, d: &Domain<B::Elem>) -> Result<CheckReport, CliError> {
    let s = cone_of_group(g, d)?;
    let (g2, zero) = (g.clone(), g.backend().zero());
    let full = FnMap::new(move |x: &B::Elem| g2.e(zero, *x));
    let rebuilt = order_from_cone(g.frame_arc().clone(), g.backend().clone(), Arc::new(full), d)?;
    let back = cone_of_group(&rebuilt, d)?;
    let mut r = CheckReport::new(d.status());
    for &x in d.points() {
        r.expect(back.value(&x) == s.value(&x), "round-trip", || g.backend().show(x));
    }
    r.merge(check_fog(&rebuilt, d)?);
    Ok(r)
}

fn cone_round_trip(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, false) {
        let rep = with_group!(&lg, |g, d| cone_round_trip_on(g, d))?;
        r.merge(tagged(rep, &label));
    }
    Ok(r)
}

/// Maps bounded by `mid` off zero: the given sub map, or on fixtures all
/// such maps on `ℤ₄` and a symmetric one on `ℤ`.
fn closure(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    if let (Some(lg), Some(doc)) = (&inputs.group, &inputs.sub) {
        let rep = with_group!(lg, |g, d| {
            let s = g.backend().map_from_doc(doc, g.frame())?;
            Ok::<_, CliError>(cone_closure(g.backend(), g.frame(), &*s, d)?.validation)
        })?;
        return Ok(rep);
    }
    let f = settings.fixture_frame();
    let m = mid(&f);
    let z4 = FiniteGroup::cyclic(4).expect("cyclic");
    let d4 = Domain::finite(&z4);
    for s in group_maps(&z4, &f) {
        let vals = s.to_vec(4).expect("table");
        if vals[0] != f.top() || vals[1..].iter().any(|&v| !f.leq(v, m) || v == f.top()) {
            continue;
        }
        let c = cone_closure(&z4, &f, &s, &d4)?;
        r.merge(tagged(c.validation, &format!("Z4 S={}", show_table(&f, &s, 4))));
    }
    let z = FreeAbelian::new(1).expect("rank");
    let dz = Domain::of_window(&Window::cube(1, settings.radius()));
    let c = cone_closure(&z, &f, &RegionMap::signs(f.top(), m, m), &dz)?;
    r.merge(tagged(c.validation, "Z S=1 at 0, m elsewhere"));
    Ok(r)
}

fn extension(_: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let f = settings.fixture_frame();
    let m = mid(&f);
    let z = FreeAbelian::new(1).expect("rank");
    let d = Domain::of_window(&Window::cube(1, settings.radius()));
    let mut r = certified();
    fn positives(x: &ZVec) -> bool {
        x.coords()[0] > 0
    }
    fn evens_pos(x: &ZVec) -> bool {
        x.coords()[0] > 0 && x.coords()[0] % 2 == 0
    }
    for (label, a) in [("A=positives", positives as fn(&ZVec) -> bool), ("A=positive evens", evens_pos)] {
        let f = f.clone();
        let s = lfuzzord_core::group::FnMap::new(move |x: &ZVec| {
            Some(if x.coords()[0] == 0 { f.top() } else if a(x) { m } else { f.bottom() })
        });
        let e = cone_extension(&z, &settings.fixture_frame(), &s, &a, m, &d)?;
        r.merge(tagged(e.report, label));
    }
    Ok(r)
}

fn hom_cone(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    if let (Some(lg), Some(h)) = (&inputs.group, &inputs.hom) {
        return hom_cone_input(lg, h, settings);
    }
    let f = settings.fixture_frame();
    let m = mid(&f);
    let z = FreeAbelian::new(1).expect("rank");
    let d = Domain::of_window(&Window::cube(1, settings.radius() / 2));
    let crisp = crisp_zn(f.clone(), 1);
    let fuzzy = LOrderedGroup::from_cone_unchecked(f.clone(), z, z_cone(&f, m, f.bottom()));
    let double = |x: ZVec| z.add(x, x);
    let negate = |x: ZVec| z.neg(x);
    let maps: [(&str, &dyn Fn(ZVec) -> ZVec); 3] = [("x", &|x| x), ("2x", &double), ("-x", &negate)];
    for (gname, g) in [("crisp-z", &crisp), ("fuzzy-z", &fuzzy)] {
        for (hname, h) in [("crisp-z", &crisp), ("fuzzy-z", &fuzzy)] {
            for (fname, fmap) in maps.iter() {
                let eq = monotone_hom_equivalence(g, h, *fmap, &d)?;
                r.status = r.status.combine(&eq.cone.status);
                r.expect(eq.consistent(), "equivalence", || format!("{gname} -> {hname}, f(x)={fname}"));
            }
        }
    }
    Ok(r)
}

fn hom_cone_input(lg: &LoadedGroup, h: &HomDoc, settings: &Settings) -> Result<CheckReport, CliError> {
    let target = match &h.target {
        Some(t) => crate::format::group_from_doc(t, lg.frame(), settings.window)?,
        None => lg.clone(),
    };
    let mut r = certified();
    let eq = match (lg, &target) {
        (LoadedGroup::Finite(g), LoadedGroup::Finite(t)) => {
            let f = hom_finite(h, g.backend(), t.backend())?;
            monotone_hom_equivalence(g, t, &*f, &Domain::finite(g.backend()))?
        }
        (LoadedGroup::Free(g, w), LoadedGroup::Free(t, _)) => {
            let f = hom_free(h, g.backend(), t.backend())?;
            monotone_hom_equivalence(g, t, &*f, &Domain::of_window(w))?
        }
        _ => return Err(CliError::Invalid("domain and codomain must have the same kind of backend".into())),
    };
    r.status = eq.cone.status.clone();
    r.expect(eq.consistent(), "equivalence", || {
        format!("cone={} monotone={} image={}", eq.cone.holds(), eq.monotone.holds(), eq.image.holds())
    });
    Ok(r)
}

/// Sub maps to test: the given one, or per fixture group a handful of
/// candidates (every map on finite groups of order ≤ 4).
fn sub_maps<B: Carrier>(
    g: &LOrderedGroup<B>,
    d: &Domain<B::Elem>,
    inputs: &Inputs,
) -> Result<Vec<(String, Arc<dyn ValueMap<B::Elem>>)>, CliError> {
    if let Some(doc) = &inputs.sub {
        return Ok(vec![("S".to_string(), g.backend().map_from_doc(doc, g.frame())?)]);
    }
    let f = g.frame();
    let m = mid(f);
    let pts = d.points();
    let mut out: Vec<(String, Arc<dyn ValueMap<B::Elem>>)> = Vec::new();
    if d.is_finite_group() && pts.len() <= 4 {
        let n = pts.len();
        for vals in lfuzzord_core::enumerate::Assignments::new(n, f.size()) {
            let label = format!("S=[{}]", vals.iter().map(|&v| f.name(v)).collect::<Vec<_>>().join(","));
            let map = PointMap::from_fn(pts, |x| vals[d.index_of(x).expect("point")]);
            out.push((label, Arc::new(map)));
        }
        return Ok(out);
    }
    let be = g.backend().clone();
    let parity = move |even: FrameElt, odd: FrameElt| {
        let be = be.clone();
        FnMap::new(move |x: &B::Elem| {
            let s = be.show(*x);
            let first = s.trim_matches(|c| c == '(' || c == ')').split(',').next().and_then(|t| t.trim().parse::<i64>().ok());
            Some(if first.map_or(false, |v| v % 2 == 0) { even } else { odd })
        })
    };
    out.push(("S=1".to_string(), Arc::new(FnMap::new({
        let top = f.top();
        move |_: &B::Elem| Some(top)
    }))));
    out.push(("S=parity(1,m)".to_string(), Arc::new(parity(f.top(), m))));
    out.push(("S=parity(m,0)".to_string(), Arc::new(parity(m, f.bottom()))));
    Ok(out)
}

fn for_subs(
    inputs: &Inputs,
    settings: &Settings,
    body: &(dyn Fn(&mut CheckReport, &str, &dyn SubCheck) -> Result<(), CliError> + Sync),
) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, false) {
        with_group!(&lg, |g, d| {
            for (sl, s) in sub_maps(g, d, inputs)? {
                let ctx = SubCtx { g, d, s: s.clone(), cfg: settings.search };
                body(&mut r, &format!("{label} {sl}"), &ctx)?;
            }
            Ok::<_, CliError>(())
        })?;
    }
    Ok(r)
}

/// Object-safe view of one `(G, S)` pair.
pub trait SubCheck {
    fn is_subgroup(&self) -> bool;
    fn is_normal(&self) -> bool;
    fn convex(&self) -> Result<lfuzzord_core::subgroup::ConvexVerdict, CliError>;
    fn hull(&self) -> Result<(CheckReport, CheckReport, Option<CheckReport>), CliError>;
    fn down_cone(&self) -> Result<bool, CliError>;
    fn level(&self) -> Result<CheckReport, CliError>;
    fn quotient(&self) -> Result<Option<(CheckReport, CheckReport)>, CliError>;
}

struct SubCtx<'a, B: Carrier> {
    g: &'a LOrderedGroup<B>,
    d: &'a Domain<B::Elem>,
    s: Arc<dyn ValueMap<B::Elem>>,
    cfg: SearchConfig,
}

impl<B: Carrier> SubCheck for SubCtx<'_, B> {
    fn is_subgroup(&self) -> bool {
        is_l_subgroup(self.g.backend(), self.g.frame(), &*self.s, self.d).holds()
    }
    fn is_normal(&self) -> bool {
        is_normal(self.g.backend(), self.g.frame(), &*self.s, self.d).holds()
    }
    fn convex(&self) -> Result<lfuzzord_core::subgroup::ConvexVerdict, CliError> {
        Ok(is_convex(self.g, &*self.s, self.d)?)
    }
    fn hull(&self) -> Result<(CheckReport, CheckReport, Option<CheckReport>), CliError> {
        let h = convex_hull(self.g, &*self.s, self.d, &self.cfg)?;
        Ok((h.convex, h.minimality, h.normal_convex))
    }
    fn down_cone(&self) -> Result<bool, CliError> {
        Ok(down_cone_identity(self.g, &*self.s, self.d)?.agree())
    }
    fn level(&self) -> Result<CheckReport, CliError> {
        Ok(level_subgroup(self.g.backend(), self.g.frame(), &*self.s, self.d)?.report)
    }
    /// Quotient report and projection report; `None` when `S` is not an
    /// L-filter of finite index.
    fn quotient(&self) -> Result<Option<(CheckReport, CheckReport)>, CliError> {
        match build_quotient(self.g, self.s.clone(), self.d) {
            Ok(q) => {
                let p = natural_projection(self.g, &q, self.d)?;
                Ok(Some((q.report, p)))
            }
            Err(SubgroupError::NotAFilter { .. }) | Err(SubgroupError::InfiniteIndex(_)) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

fn convex_criterion(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    for_subs(inputs, settings, &|r, label, c| {
        if c.is_subgroup() && c.is_normal() {
            let v = c.convex()?;
            r.expect(v.agree(), "criterion-agrees", || label.to_string());
        }
        Ok(())
    })
}

fn hull_convex(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    for_subs(inputs, settings, &|r, label, c| {
        let (convex, minimal, _) = c.hull()?;
        r.merge(tagged(convex, label));
        r.merge(tagged(minimal, label));
        Ok(())
    })
}

fn hull_normal(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    for_subs(inputs, settings, &|r, label, c| {
        if let (_, _, Some(nc)) = c.hull()? {
            r.merge(tagged(nc, label));
        }
        Ok(())
    })
}

fn down_cone(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    for_subs(inputs, settings, &|r, label, c| {
        if c.is_subgroup() {
            let ok = c.down_cone()?;
            r.expect(ok, "down-cone", || label.to_string());
        }
        Ok(())
    })
}

fn level_set(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    for_subs(inputs, settings, &|r, label, c| {
        if c.is_subgroup() && c.is_normal() {
            r.merge(tagged(c.level()?, label));
        }
        Ok(())
    })
}

const QUOTIENT_I: &[&str] =
    &["identity-coset", "e-well-defined", "E1", "E2", "E3", "FOG-left", "FOG-right", "translation-equality"];
const QUOTIENT_II: &[&str] = &[
    "s-well-defined",
    "sub-i",
    "sub-ii",
    "normal",
    "quo-i",
    "quo-ii",
    "convex",
    "convex-criterion",
    "singleton-level",
    "correspondence",
];

fn quotient_part(inputs: &Inputs, settings: &Settings, clauses: &'static [&'static str]) -> Result<CheckReport, CliError> {
    let given = inputs.sub.is_some();
    for_subs(inputs, settings, &|r, label, c| {
        match c.quotient()? {
            Some((q, _)) => r.merge(tagged(only(q, clauses), label)),
            None if given => return Err(CliError::Invalid(format!("{label} is not an L-filter of finite index"))),
            None => {}
        }
        Ok(())
    })
}

fn projection(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    for_subs(inputs, settings, &|r, label, c| {
        if let Some((_, p)) = c.quotient()? {
            r.merge(tagged(p, label));
        }
        Ok(())
    })
}

fn iso(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    if let (Some(lg), Some(h)) = (&inputs.group, &inputs.hom) {
        return iso_input(lg, h, settings);
    }
    let f = settings.fixture_frame();
    let g = crisp_zn(f.clone(), 1);
    let d = Domain::of_window(&Window::cube(1, settings.radius()));
    let be = *g.backend();
    let double: Arc<dyn Fn(ZVec) -> ZVec + Send + Sync> = Arc::new(move |x| be.add(x, x));
    let e = induced_embedding(&g, &g, double, &d)?;
    r.merge(tagged(e.kernel.filter, "crisp-z f(x)=2x"));
    r.merge(tagged(e.kernel.zero_level, "crisp-z f(x)=2x"));
    r.merge(tagged(e.report, "crisp-z f(x)=2x"));
    for (label, lg) in group_fixtures(settings, false) {
        if let LoadedGroup::Finite(g) = lg {
            let d = Domain::finite(g.backend());
            let n = g.backend().order();
            for k in 0..n {
                let be = g.backend().clone();
                let f: Arc<dyn Fn(usize) -> usize + Send + Sync> = Arc::new(move |x| be.times(k, x));
                match induced_embedding(&g, &g, f, &d) {
                    Ok(e) => {
                        let tag = format!("{label} f(x)={k}x");
                        r.merge(tagged(e.kernel.filter, &tag));
                        r.merge(tagged(e.report, &tag));
                    }
                    Err(SubgroupError::NotMonotone(_)) | Err(SubgroupError::NotAHomomorphism(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(r)
}

fn iso_input(lg: &LoadedGroup, h: &HomDoc, settings: &Settings) -> Result<CheckReport, CliError> {
    let target = match &h.target {
        Some(t) => crate::format::group_from_doc(t, lg.frame(), settings.window)?,
        None => lg.clone(),
    };
    let mut r = certified();
    match (lg, &target) {
        (LoadedGroup::Finite(g), LoadedGroup::Finite(t)) => {
            let f = hom_finite(h, g.backend(), t.backend())?;
            let e = induced_embedding(g, t, f, &Domain::finite(g.backend()))?;
            r.merge(e.kernel.filter);
            r.merge(e.report);
        }
        (LoadedGroup::Free(g, w), LoadedGroup::Free(t, _)) => {
            let f = hom_free(h, g.backend(), t.backend())?;
            let e = induced_embedding(g, t, f, &Domain::of_window(w))?;
            r.merge(e.kernel.filter);
            r.merge(e.report);
        }
        _ => return Err(CliError::Invalid("domain and codomain must have the same kind of backend".into())),
    }
    Ok(r)
}

/// Lattice-ordered fixtures, each with a view over a window large enough
/// for `n·z` with `z ∈ [-r, r]ⁿ`, `n ≤ 4`.
fn power_views(inputs: &Inputs, settings: &Settings) -> Result<Vec<(String, GroupView<FreeAbelian>, Vec<ZVec>)>, CliError> {
    let r = 4;
    let mut out = Vec::new();
    let items: Vec<(String, LoadedGroup)> = match &inputs.group {
        Some(g) => vec![("input".into(), g.clone())],
        None => group_fixtures(settings, true),
    };
    for (label, lg) in items {
        let LoadedGroup::Free(g, w) = lg else {
            return Err(CliError::Invalid("power identities need a free abelian backend".into()));
        };
        let rank = g.backend().rank();
        let (view, zs) = if inputs.group.is_some() {
            let d = Domain::of_window(&w);
            let zs: Vec<ZVec> = d.points().iter().copied().filter(|z| w.contains(&g.backend().times(4, *z))).collect();
            (g.view(&d)?, zs)
        } else {
            let d = Domain::of_window(&Window::cube(rank, 4 * r));
            (g.view(&d)?, Window::cube(rank, r).points())
        };
        out.push((label, view, zs));
    }
    Ok(out)
}

fn power_single(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, view, zs) in power_views(inputs, settings)? {
        let mut local = CheckReport::new(view.status());
        for &z in &zs {
            for n in 1..=4 {
                local.merge(power_identity(&view, z, n)?);
            }
        }
        r.merge(tagged(local, &label));
    }
    Ok(r)
}

fn power_pair(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, view, zs) in power_views(inputs, settings)? {
        let local = parallel_merge(&zs, view.status(), |&x| {
            let mut part = CheckReport::new(view.status());
            for &y in &zs {
                for n in 1..=4 {
                    part.merge(power_identity_pair(&view, x, y, n)?);
                }
            }
            Ok(part)
        })?;
        r.merge(tagged(local, &label));
    }
    Ok(r)
}

/// Splits `items` across threads and merges the reports in input order.
pub fn parallel_merge<T: Sync>(
    items: &[T],
    status: CertStatus,
    f: impl Fn(&T) -> Result<CheckReport, CliError> + Sync,
) -> Result<CheckReport, CliError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).clamp(1, 16);
    let chunk = items.len().div_ceil(workers).max(1);
    let parts: Vec<Result<CheckReport, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                let status = status.clone();
                scope.spawn(move || {
                    let mut acc = CheckReport::new(status);
                    for it in c {
                        acc.merge(f(it)?);
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = CheckReport::new(status);
    for p in parts {
        out.merge(p?);
    }
    Ok(out)
}

/// Elements `x` of the box `[0, bound]ⁿ` (or the whole finite group) with
/// `t ≤ e(0, x)`.
fn positives<B: GroupBackend>(view: &GroupView<B>, bound: i64, t: FrameElt) -> Vec<B::Elem> {
    let g = view.group();
    let f = g.frame();
    let zero = g.backend().zero();
    view.domain()
        .points()
        .iter()
        .copied()
        .filter(|&x| {
            let s = g.backend().show(x);
            let in_box = s
                .trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .all(|c| c.trim().parse::<i64>().map_or(true, |v| (0..=bound).contains(&v)));
            in_box && view.e(zero, x).map_or(false, |v| f.leq(t, v))
        })
        .collect()
}

/// Every instance with `n ≤ max_n` and `a, bᵢ` in the box satisfying the
/// hypothesis at `t`: the decomposition meets its postcondition and the
/// brute-force oracle finds a decomposition too.
pub fn riesz_sweep<B: GroupBackend>(view: &GroupView<B>, bound: i64, max_n: usize, t: FrameElt) -> Result<CheckReport, CliError> {
    let pos = positives(view, bound, t);
    let be = view.group().backend();
    let f = view.group().frame();
    let tuples: Vec<Vec<B::Elem>> = (1..=max_n).flat_map(|n| tuples(&pos, n)).collect();
    parallel_merge(&tuples, view.status(), |bs| {
        let mut oracle = RieszOracle::new(view, t);
        let mut r = CheckReport::new(view.status());
        let sum = bs.iter().fold(be.zero(), |acc, &b| be.add(acc, b));
        for &a in &pos {
            if !view.group().e(a, sum).map_or(false, |v| f.leq(t, v)) {
                continue;
            }
            let w = || format!("a={} b=[{}]", be.show(a), bs.iter().map(|&b| be.show(b)).collect::<Vec<_>>().join(", "));
            match riesz_decompose(view, a, bs, t) {
                Ok(_) => r.tick(),
                Err(e) => r.fail("decomposition", format!("{} ({e})", w())),
            }
            r.expect(oracle.solve(a, bs)?.is_some(), "oracle", w);
        }
        Ok(r)
    })
}

fn tuples<T: Copy>(items: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| items.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// The input group, or crisp `ℤ` and `ℤ²` on full-radius windows.
fn lattice_views(inputs: &Inputs, settings: &Settings) -> Result<Vec<(String, LoadedGroup)>, CliError> {
    if let Some(g) = &inputs.group {
        return Ok(vec![("input".into(), g.clone())]);
    }
    let f = settings.fixture_frame();
    Ok((1..=2)
        .map(|rank| {
            let label = if rank == 1 { "crisp-z" } else { "crisp-z2" };
            (label.to_string(), LoadedGroup::Free(crisp_zn(f.clone(), rank), Window::cube(rank, settings.radius())))
        })
        .collect())
}

fn riesz(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in lattice_views(inputs, settings)? {
        let top = lg.frame().top();
        let rep = with_group!(&lg, |g, d| riesz_sweep(&g.view(d)?, 5, 3, top))?;
        r.merge(tagged(rep, &label));
    }
    Ok(r)
}

pub fn riesz_meet_sweep<B: GroupBackend>(view: &GroupView<B>, bound: i64) -> Result<CheckReport, CliError> {
    let f = view.group().frame();
    let be = view.group().backend();
    let zero = be.zero();
    let pos = positives(view, bound, f.bottom());
    parallel_merge(&pos, view.status(), |&a| {
        let mut r = CheckReport::new(view.status());
        for &b in &pos {
            for &c in &pos {
                let Some(m) = view.crisp_meet(a, be.add(b, c)) else { continue };
                let bound = f.meet_all([view.e_req(zero, a)?, view.e_req(zero, b)?, view.e_req(zero, c)?, view.e_req(zero, m)?]);
                for t in f.elements().filter(|&t| f.leq(t, bound)) {
                    r.merge(riesz_meet_inequality(view, a, b, c, t)?);
                }
            }
        }
        Ok(r)
    })
}

fn riesz_meet(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in lattice_views(inputs, settings)? {
        let rep = with_group!(&lg, |g, d| riesz_meet_sweep(&g.view(d)?, 5))?;
        r.merge(tagged(rep, &label));
    }
    Ok(r)
}

fn criterion(inputs: &Inputs, settings: &Settings) -> Result<CheckReport, CliError> {
    let mut r = certified();
    for (label, lg) in groups(inputs, settings, true) {
        let rep = with_group!(&lg, |g, d| criterion_on(g, d))?;
        r.merge(tagged(rep, &label));
    }
    Ok(r)
}

fn criterion_on<B: GroupBackend>(g: &LOrderedGroup<B>, d: &Domain<B::Elem>) -> Result<CheckReport, CliError> {
    let view = g.view(d)?;
    let mut r = CheckReport::new(view.status());
    let subsets = sample_subsets(g, d);
    let near: Vec<B::Elem> = d.points().iter().copied().filter(|&x| near_zero(g, x)).collect();
    for s in &subsets {
        for &a in &near {
            match distributivity_criterion(&view, a, s) {
                Ok(c) => r.expect(c.agree(), "thm-4.6", || format!("a={} S={}", g.show(a), g.describe(s))),
                Err(lfuzzord_core::OgroupError::PreconditionUnmet(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(r)
}

/// Every witness of a report as `clause: witness` lines.
pub fn violation_lines(v: &[Violation]) -> Vec<String> {
    v.iter().map(|v| format!("{}: {}", v.clause, v.witness)).collect()
}
