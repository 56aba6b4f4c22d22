//! JSON documents for frames, L-ordered sets, fuzzy subsets, groups, cones,
//! windows, L-subgroups and homomorphisms.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use lfuzzord_core::group::{CmpOp, Constraint, FnMap, PointMap, RegionMap, Rule, ValueMap};
use lfuzzord_core::order::Subset;
use lfuzzord_core::{FiniteGroup, Frame, FrameElt, FreeAbelian, FuzzySubset, GroupBackend, LOrderedGroup, LOrderedSet, Window, ZVec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A frame reference: `chain:N`, `bool:K`, a file path, or an inline document.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameSpec {
    Named(String),
    Doc(FrameDoc),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bit {
    Bool(bool),
    Int(u8),
}

impl Bit {
    fn get(&self) -> bool {
        match self {
            Bit::Bool(b) => *b,
            Bit::Int(i) => *i != 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrameDoc {
    #[serde(default)]
    pub kind: Option<String>,
    pub leq: Vec<Vec<Bit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl FrameDoc {
    pub fn of(f: &Frame) -> Self {
        FrameDoc {
            kind: Some("frame".into()),
            leq: f.leq_table().into_iter().map(|r| r.into_iter().map(|b| Bit::Int(b as u8)).collect()).collect(),
            names: Some(f.names().to_vec()),
        }
    }
}

/// A frame element by name or by index.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elt {
    Index(usize),
    Name(String),
}

impl Elt {
    pub fn resolve(&self, f: &Frame) -> Result<FrameElt, CliError> {
        let r = match self {
            Elt::Index(i) => (*i < f.size()).then(|| FrameElt(*i as u16)),
            Elt::Name(s) => f.parse(s),
        };
        r.ok_or_else(|| CliError::Invalid(format!("{self:?} is not an element of the frame")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LorderDoc {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub frame: Option<FrameSpec>,
    pub e: Vec<Vec<Elt>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FsubsetDoc {
    #[serde(default)]
    pub kind: Option<String>,
    pub entries: BTreeMap<String, Elt>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendDoc {
    Finite(FiniteDoc),
    FreeAbelian { rank: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteDoc {
    Cayley(Vec<Vec<usize>>),
    Cyclic(usize),
    Product(Vec<FiniteDoc>),
}

/// `[coeffs, constant, op]` meaning `coeffs·x + constant OP 0`.
pub type IneqDoc = (Vec<i64>, i64, String);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleDoc {
    pub ineqs: Vec<IneqDoc>,
    pub value: Elt,
}

/// A map `G → L`: a rule list over `ℤⁿ`, or explicit values keyed by
/// element, or a table over a finite group.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MapDoc {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<MapValues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Elt>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapValues {
    Table(Vec<Elt>),
    Keyed(BTreeMap<String, Elt>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowDoc {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl WindowDoc {
    pub fn of(w: &Window) -> Self {
        WindowDoc { lo: w.lo().to_vec(), hi: w.hi().to_vec() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub frame: Option<FrameSpec>,
    pub backend: BackendDoc,
    #[serde(default)]
    pub cone: Option<MapDoc>,
    #[serde(default)]
    pub e: Option<Vec<Vec<Elt>>>,
    #[serde(default)]
    pub window: Option<WindowDoc>,
    /// How the cone is read: `"b-a"` (the default) gives `e(a,b) = S(b-a)`;
    /// `"a-b"` and `"a+b"` read it at `a-b` and `a+b`.
    #[serde(default)]
    pub relation: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomDoc {
    #[serde(default)]
    pub kind: Option<String>,
    /// Images of the finite group's elements.
    #[serde(default)]
    pub table: Option<Vec<usize>>,
    /// Integer matrix acting on column vectors of `ℤⁿ`.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<i64>>>,
    /// Codomain; the domain group when absent.
    #[serde(default)]
    pub target: Option<Box<GroupDoc>>,
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_frame_ref(s: &str) -> Result<Frame, CliError> {
    let num = |t: &str| t.parse::<usize>().map_err(|_| CliError::Usage(format!("bad frame reference {s:?}")));
    let frame = if let Some(n) = s.strip_prefix("chain:") {
        Frame::chain(num(n)?)
    } else if let Some(k) = s.strip_prefix("bool:") {
        Frame::boolean(num(k)?)
    } else {
        return frame_from_doc(&read_json::<FrameDoc>(Path::new(s))?);
    };
    frame.map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn frame_from_doc(d: &FrameDoc) -> Result<Frame, CliError> {
    let leq: Vec<Vec<bool>> = d.leq.iter().map(|r| r.iter().map(Bit::get).collect()).collect();
    let built = match &d.names {
        Some(names) => lfuzzord_core::frame::FrameBuilder::default().from_leq_named(&leq, names.clone()),
        None => Frame::from_leq(&leq),
    };
    built.map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn resolve_frame(spec: Option<&FrameSpec>, fallback: &Arc<Frame>) -> Result<Arc<Frame>, CliError> {
    match spec {
        None => Ok(fallback.clone()),
        Some(FrameSpec::Named(s)) => Ok(Arc::new(parse_frame_ref(s)?)),
        Some(FrameSpec::Doc(d)) => Ok(Arc::new(frame_from_doc(d)?)),
    }
}

fn table(rows: &[Vec<Elt>], f: &Frame) -> Result<Vec<Vec<FrameElt>>, CliError> {
    rows.iter().map(|r| r.iter().map(|v| v.resolve(f)).collect()).collect()
}

pub fn lorder_from_doc(d: &LorderDoc, fallback: &Arc<Frame>) -> Result<LOrderedSet, CliError> {
    let f = resolve_frame(d.frame.as_ref(), fallback)?;
    let rows = table(&d.e, &f)?;
    LOrderedSet::new(f, &rows).map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn lorder_doc(p: &LOrderedSet) -> LorderDoc {
    LorderDoc {
        kind: Some("lorder".into()),
        frame: Some(FrameSpec::Doc(FrameDoc::of(p.frame()))),
        e: p.table().iter().map(|r| r.iter().map(|v| Elt::Name(p.frame().name(*v).to_string())).collect()).collect(),
    }
}

/// A fuzzy subset of an L-ordered set, given as JSON or as `i:v,j:w`.
pub fn parse_subset(text: &str, p: &LOrderedSet) -> Result<Subset, CliError> {
    let f = p.frame();
    let entries: BTreeMap<String, Elt> = if text.trim_start().starts_with('{') {
        parse_json::<FsubsetDoc>(text, "subset")?.entries
    } else if Path::new(text).is_file() {
        read_json::<FsubsetDoc>(Path::new(text))?.entries
    } else {
        let mut m = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part.split_once(':').ok_or_else(|| CliError::Usage(format!("bad subset entry {part:?}")))?;
            m.insert(k.trim().to_string(), Elt::Name(v.trim().to_string()));
        }
        m
    };
    let mut s = Subset::empty(f);
    for (k, v) in entries {
        let i: usize = k.trim().parse().map_err(|_| CliError::Usage(format!("bad point {k:?}")))?;
        if i >= p.size() {
            return Err(CliError::Invalid(format!("point {i} outside carrier of size {}", p.size())));
        }
        s.set(i, v.resolve(f)?);
    }
    Ok(s)
}

pub fn finite_from_doc(d: &FiniteDoc) -> Result<FiniteGroup, CliError> {
    let g = match d {
        FiniteDoc::Cayley(rows) => FiniteGroup::from_cayley(rows),
        FiniteDoc::Cyclic(n) => FiniteGroup::cyclic(*n),
        FiniteDoc::Product(parts) => {
            let mut it = parts.iter();
            let first = it.next().ok_or_else(|| CliError::Invalid("empty product".into()))?;
            let mut g = finite_from_doc(first)?;
            for p in it {
                g = FiniteGroup::product(&g, &finite_from_doc(p)?).map_err(|e| CliError::Invalid(e.to_string()))?;
            }
            Ok(g)
        }
    };
    g.map_err(|e| CliError::Invalid(e.to_string()))
}

pub fn parse_op(s: &str) -> Result<CmpOp, CliError> {
    let t = s.trim();
    Ok(match t {
        ">=" | "ge" => CmpOp::Ge,
        ">" | "gt" => CmpOp::Gt,
        "<=" | "le" => CmpOp::Le,
        "<" | "lt" => CmpOp::Lt,
        "=" | "==" | "eq" => CmpOp::Eq,
        "!=" | "ne" => CmpOp::Ne,
        _ => {
            let k = t
                .strip_prefix("mod")
                .or_else(|| t.strip_prefix('%'))
                .and_then(|k| k.trim().parse::<i64>().ok())
                .filter(|&k| k != 0)
                .ok_or_else(|| CliError::Invalid(format!("unknown comparison {s:?}")))?;
            CmpOp::Mod(k)
        }
    })
}

pub fn region_from_rules(rules: &[RuleDoc], default: FrameElt, rank: usize, f: &Frame) -> Result<RegionMap, CliError> {
    let mut out = Vec::new();
    for r in rules {
        let mut cs = Vec::new();
        for (coeffs, c, op) in &r.ineqs {
            if coeffs.len() != rank {
                return Err(CliError::Invalid(format!("constraint {coeffs:?} does not have rank {rank}")));
            }
            cs.push(Constraint::new(coeffs.clone(), *c, parse_op(op)?));
        }
        out.push(Rule { constraints: cs, value: r.value.resolve(f)? });
    }
    Ok(RegionMap::new(rank, out, default))
}

/// Group backends the front end can read elements and maps for.
pub trait Carrier: GroupBackend {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, CliError>;
    fn map_from_doc(&self, d: &MapDoc, f: &Frame) -> Result<Arc<dyn ValueMap<Self::Elem>>, CliError>;
}

impl Carrier for FiniteGroup {
    fn parse_elem(&self, s: &str) -> Result<usize, CliError> {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|&i| i < self.order())
            .ok_or_else(|| CliError::Invalid(format!("{s:?} is not an element of a group of order {}", self.order())))
    }

    fn map_from_doc(&self, d: &MapDoc, f: &Frame) -> Result<Arc<dyn ValueMap<usize>>, CliError> {
        let default = d.default.as_ref().map(|v| v.resolve(f)).transpose()?;
        let mut m = PointMap::new(BTreeMap::new(), default);
        match &d.values {
            Some(MapValues::Table(vals)) => {
                if vals.len() != self.order() {
                    return Err(CliError::Invalid(format!("expected {} values, got {}", self.order(), vals.len())));
                }
                for (i, v) in vals.iter().enumerate() {
                    m.set(i, v.resolve(f)?);
                }
            }
            Some(MapValues::Keyed(k)) => {
                for (key, v) in k {
                    m.set(self.parse_elem(key)?, v.resolve(f)?);
                }
            }
            None => {}
        }
        if d.rules.is_some() {
            return Err(CliError::Invalid("rule lists need a free abelian backend".into()));
        }
        if let Some(x) = self.elements().find(|x| m.value(x).is_none()) {
            return Err(CliError::Invalid(format!("map has no value at {x}")));
        }
        Ok(Arc::new(m))
    }
}

impl Carrier for FreeAbelian {
    fn parse_elem(&self, s: &str) -> Result<ZVec, CliError> {
        let t = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
        let c: Result<Vec<i64>, _> = t.split(',').map(|x| x.trim().parse::<i64>()).collect();
        match c {
            Ok(c) if c.len() == self.rank() => Ok(ZVec::new(&c)),
            _ => Err(CliError::Invalid(format!("{s:?} is not an element of ℤ^{}", self.rank()))),
        }
    }

    fn map_from_doc(&self, d: &MapDoc, f: &Frame) -> Result<Arc<dyn ValueMap<ZVec>>, CliError> {
        let default = d.default.as_ref().map(|v| v.resolve(f)).transpose()?;
        let region = region_from_rules(d.rules.as_deref().unwrap_or(&[]), default.unwrap_or(f.bottom()), self.rank(), f)?;
        let mut keyed = BTreeMap::new();
        match &d.values {
            Some(MapValues::Keyed(k)) => {
                for (key, v) in k {
                    keyed.insert(self.parse_elem(key)?, v.resolve(f)?);
                }
            }
            Some(MapValues::Table(_)) => return Err(CliError::Invalid("tables need a finite backend".into())),
            None => {}
        }
        Ok(Arc::new(FnMap::new(move |x: &ZVec| Some(keyed.get(x).copied().unwrap_or_else(|| region.eval(x))))))
    }
}

/// A parsed group with its relation and evaluation window.
#[derive(Clone)]
pub enum LoadedGroup {
    Finite(LOrderedGroup<FiniteGroup>),
    Free(LOrderedGroup<FreeAbelian>, Window),
}

impl LoadedGroup {
    pub fn frame(&self) -> &Arc<Frame> {
        match self {
            LoadedGroup::Finite(g) => g.frame_arc(),
            LoadedGroup::Free(g, _) => g.frame_arc(),
        }
    }
}

/// `window_radius` from the command line takes precedence over the file's
/// window; `[-8, 8]ⁿ` is the fallback.
pub fn group_from_doc(d: &GroupDoc, fallback: &Arc<Frame>, window_radius: Option<i64>) -> Result<LoadedGroup, CliError> {
    let f = resolve_frame(d.frame.as_ref(), fallback)?;
    match &d.backend {
        BackendDoc::Finite(fd) => {
            let g = finite_from_doc(fd)?;
            let lg = match (&d.e, &d.cone) {
                (Some(rows), None) => LOrderedGroup::from_table(f.clone(), g, &table(rows, &f)?)
                    .map_err(|e| CliError::Invalid(e.to_string()))?,
                (None, Some(c)) => relation_group(&f, g.clone(), g.map_from_doc(c, &f)?, d.relation.as_deref())?,
                (None, None) => {
                    let (top, bot) = (f.top(), f.bottom());
                    let rows: Vec<Vec<FrameElt>> =
                        g.elements().map(|a| g.elements().map(|b| if a == b { top } else { bot }).collect()).collect();
                    LOrderedGroup::from_table(f.clone(), g, &rows).map_err(|e| CliError::Invalid(e.to_string()))?
                }
                (Some(_), Some(_)) => return Err(CliError::Invalid("give either \"e\" or \"cone\", not both".into())),
            };
            Ok(LoadedGroup::Finite(lg))
        }
        BackendDoc::FreeAbelian { rank } => {
            let be = FreeAbelian::new(*rank).map_err(|e| CliError::Invalid(e.to_string()))?;
            let window = match (window_radius, &d.window) {
                (Some(r), _) => Window::cube(*rank, r),
                (None, Some(w)) => Window::new(w.lo.clone(), w.hi.clone()).map_err(|e| CliError::Invalid(e.to_string()))?,
                (None, None) => Window::cube(*rank, 8),
            };
            if window.rank() != *rank {
                return Err(CliError::Invalid(format!("window rank {} differs from group rank {rank}", window.rank())));
            }
            let cone = d.cone.as_ref().ok_or_else(|| CliError::Invalid("a free abelian group needs a \"cone\"".into()))?;
            if d.e.is_some() {
                return Err(CliError::Invalid("free abelian groups take a cone, not an \"e\" table".into()));
            }
            Ok(LoadedGroup::Free(relation_group(&f, be, be.map_from_doc(cone, &f)?, d.relation.as_deref())?, window))
        }
    }
}

fn relation_group<B: GroupBackend>(
    f: &Arc<Frame>,
    be: B,
    cone: Arc<dyn ValueMap<B::Elem>>,
    relation: Option<&str>,
) -> Result<LOrderedGroup<B>, CliError> {
    let b2 = be.clone();
    Ok(match relation.map(str::trim) {
        None | Some("b-a") => LOrderedGroup::from_cone_unchecked(f.clone(), be, cone),
        Some("a-b") => LOrderedGroup::from_fn(f.clone(), be, move |a, b| cone.value(&b2.sub(a, b))),
        Some("a+b") => LOrderedGroup::from_fn(f.clone(), be, move |a, b| cone.value(&b2.add(a, b))),
        Some(other) => return Err(CliError::Invalid(format!("unknown relation {other:?}; use b-a, a-b or a+b"))),
    })
}

/// A fuzzy subset of a group, given as JSON or as `x:v, y:w`; commas
/// inside brackets belong to the element.
pub fn parse_group_subset<B: Carrier>(text: &str, be: &B, f: &Frame) -> Result<FuzzySubset<B::Elem>, CliError> {
    let entries: Vec<(String, Elt)> = if text.trim_start().starts_with('{') {
        parse_json::<FsubsetDoc>(text, "subset")?.entries.into_iter().collect()
    } else {
        let mut parts = Vec::new();
        let (mut depth, mut start) = (0i32, 0);
        for (i, c) in text.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&text[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&text[start..]);
        let mut out = Vec::new();
        for part in parts.into_iter().map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.rsplit_once(':').ok_or_else(|| CliError::Usage(format!("bad subset entry {part:?}")))?;
            out.push((k.trim().to_string(), Elt::Name(v.trim().to_string())));
        }
        out
    };
    let mut s = FuzzySubset::empty(f);
    for (k, v) in entries {
        s.set(be.parse_elem(&k)?, v.resolve(f)?);
    }
    Ok(s)
}

/// A homomorphism between parsed groups of the same kind.
pub fn hom_finite(d: &HomDoc, g: &FiniteGroup, target: &FiniteGroup) -> Result<Arc<dyn Fn(usize) -> usize + Send + Sync>, CliError> {
    let t = d.table.clone().ok_or_else(|| CliError::Invalid("finite homomorphisms need a \"table\"".into()))?;
    if t.len() != g.order() || t.iter().any(|&x| x >= target.order()) {
        return Err(CliError::Invalid("homomorphism table does not fit the groups".into()));
    }
    Ok(Arc::new(move |x| t[x]))
}

pub fn hom_free(d: &HomDoc, g: &FreeAbelian, target: &FreeAbelian) -> Result<Arc<dyn Fn(ZVec) -> ZVec + Send + Sync>, CliError> {
    let m = d.matrix.clone().ok_or_else(|| CliError::Invalid("free abelian homomorphisms need a \"matrix\"".into()))?;
    if m.len() != target.rank() || m.iter().any(|r| r.len() != g.rank()) {
        return Err(CliError::Invalid(format!("matrix must be {}x{}", target.rank(), g.rank())));
    }
    Ok(Arc::new(move |x: ZVec| {
        let c: Vec<i64> = m.iter().map(|r| r.iter().zip(x.coords()).map(|(a, b)| a * b).sum()).collect();
        ZVec::new(&c)
    }))
}

pub fn show_frame_elt(f: &Frame, v: FrameElt) -> String {
    f.name(v).to_string()
}
