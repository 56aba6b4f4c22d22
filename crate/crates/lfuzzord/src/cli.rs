//! The `lfuzz` command line.

use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use lfuzzord_core::enumerate::{cones, l_filters, lordered_sets};
use lfuzzord_core::frame::verify_frame_laws;
use lfuzzord_core::group::{PointMap, ValueMap};
use lfuzzord_core::ogroup::{
    automorphism_group, check_fog, cone_closure, cone_extension, cone_of_group, distributivity_criterion,
    monotone_hom_equivalence, negation_identity, order_from_cone, power_identity, power_identity_pair, riesz_decompose,
    riesz_meet_inequality, riesz_oracle, sum_subsets, validate_cone_axioms, verify_sum_law, AUTOMORPHISM_CAP,
};
use lfuzzord_core::order::maps::{has_right_adjoint, monotone_violation};
use lfuzzord_core::order::{check_distributive, is_l_lattice, Bound, LOrderedSet};
use lfuzzord_core::subgroup::{
    build_quotient, convex_hull, down_cone_identity, induced_embedding, is_convex, is_l_subgroup, is_normal,
    level_subgroup, natural_projection,
};
use lfuzzord_core::{CheckReport, Domain, FiniteGroup, Frame, FrameElt, GroupBackend, LOrderedGroup, SearchConfig};

use crate::claims::{self, Inputs, Settings};
use crate::error::CliError;
use crate::format::{
    frame_from_doc, group_from_doc, hom_finite, hom_free, lorder_doc, lorder_from_doc, parse_frame_ref,
    parse_group_subset, parse_json, parse_subset, read_json, Carrier, FrameDoc, GroupDoc, HomDoc, LoadedGroup, LorderDoc, MapDoc,
};
use crate::hunt::{counterexample_search, HuntQuery};
use crate::report::{RunReport, SuiteReport, SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "lfuzz", version, about = "Checks frames, L-ordered sets and L-ordered groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// `chain:N`, `bool:K`, or a frame file.
    #[arg(long, global = true)]
    pub frame: Option<String>,
    /// Radius of the evaluation window on `ℤⁿ`.
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Seed for sampled checks, in hex.
    #[arg(long, global = true, value_parser = parse_hex)]
    pub seed: Option<u64>,
    /// Largest exhaustive enumeration; `LFUZZ_GUARD` overrides it.
    #[arg(long, global = true)]
    pub guard: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Include wall-clock timings in reports.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let t = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(t, 16).map_err(|e| format!("{s:?} is not a hex seed: {e}"))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build or check frames.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// L-ordered sets: axioms, joins and meets, lattice checks.
    #[command(subcommand)]
    Order(OrderCmd),
    /// L-ordered groups and positive cones.
    #[command(subcommand)]
    Group(GroupCmd),
    /// L-subgroups and convex hulls.
    #[command(subcommand)]
    Sub(SubCmd),
    /// Quotients and kernels.
    #[command(subcommand)]
    Quotient(QuotientCmd),
    /// Run named claims.
    Verify(VerifyArgs),
    /// Stream small structures.
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    /// Search for a counterexample with a hypothesis dropped.
    Hunt(HuntArgs),
}

#[derive(Subcommand, Debug)]
pub enum FrameCmd {
    Chain { n: usize },
    Bool { k: usize },
    Product { a: String, b: String },
    /// Verify the frame laws; the global `--frame` when no argument is given.
    Check { spec: Option<String> },
    /// Print the table of `meet`, `join` or `imp`.
    Table { op: FrameOp, spec: Option<String> },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum FrameOp {
    Meet,
    Join,
    Imp,
}

#[derive(Subcommand, Debug)]
pub enum OrderCmd {
    Check { file: String },
    Join { file: String, subset: String },
    Meet { file: String, subset: String },
    Lattice { file: String },
    Distributive { file: String },
    /// Down and up closures of a fuzzy subset.
    Down { file: String, subset: String },
    /// Image of a fuzzy subset under `MAP`, a comma separated point list.
    Image { source: String, target: String, map: String, subset: String },
    Monotone { source: String, target: String, map: String },
    /// Search for a fuzzy right adjoint and compare with join preservation.
    Adjoint { source: String, target: String, map: String },
    /// The L-ordered group of automorphisms.
    Automorphisms { file: String },
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Translation invariance and L-order axioms.
    Check { file: String },
    /// Positive-cone axioms of the cone given in the file.
    ConeValidate { file: String },
    /// Build the L-order from the cone and print it.
    FromCone { file: String },
    Riesz {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long = "b", required = true, allow_hyphen_values = true)]
        bs: Vec<String>,
        #[arg(long)]
        t: Option<String>,
    },
    PowerIdentity {
        file: String,
        #[arg(long, conflicts_with_all = ["x", "y"], allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, requires = "y", allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, requires = "x", allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Conjugation-and-sum closure of a map bounded off zero.
    Closure { file: String, map: String },
    /// Closure of `MAP` raised to 1 on the support of `--set`.
    Extension {
        file: String,
        map: String,
        #[arg(long = "set")]
        set: String,
        #[arg(long)]
        alpha: String,
    },
    Join { file: String, subset: String },
    Meet { file: String, subset: String },
    /// Pointwise sum `S+T`, with the sum law when both bounds exist.
    Sum { file: String, s: String, t: String },
    /// Cone, monotonicity and image conditions for a homomorphism.
    HomCone { file: String, hom: String },
    /// Both sides of the distributivity criterion for `a` and `S`.
    Distributivity {
        file: String,
        subset: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    RieszMeet {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        t: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SubCmd {
    Check { group: String, map: String },
    Hull { group: String, map: String },
}

#[derive(Subcommand, Debug)]
pub enum QuotientCmd {
    Build { group: String, map: String },
    Kernel { group: String, hom: String },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Claim ids or prefixes, comma separated; `all` for every claim.
    #[arg(long, value_delimiter = ',')]
    pub claims: Vec<String>,
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub sub: Option<String>,
    #[arg(long)]
    pub hom: Option<String>,
    /// Write the JSON report here as well.
    #[arg(long)]
    pub out: Option<String>,
    /// List claim ids and statements.
    #[arg(long)]
    pub list: bool,
}

#[derive(Subcommand, Debug)]
pub enum EnumerateCmd {
    Lorder {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        no_e3: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    LgroupFinite {
        #[arg(long, conflicts_with = "group")]
        cyclic: Option<usize>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        limit: Option<usize>,
    },
    Lfilter {
        group: String,
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct HuntArgs {
    pub claim: String,
    /// Hypothesis to drop.
    #[arg(long)]
    pub drop: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
}

/// Result of one invocation.
pub struct Output {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

impl Output {
    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            OutputFormat::Text if self.text.ends_with('\n') || self.text.is_empty() => self.text.clone(),
            OutputFormat::Text => format!("{}\n", self.text),
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit code and everything meant for stdout.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let format = cli.global.format;
    match execute(&cli) {
        Ok(out) => (out.code, out.render(format)),
        Err(e) => {
            let out = Output {
                code: e.exit_code(),
                json: json!({"schema": SCHEMA, "error": {"kind": e.kind(), "message": e.to_string()}}),
                text: format!("error ({}): {e}", e.kind()),
            };
            (out.code, out.render(format))
        }
    }
}

struct Ctx {
    settings: Settings,
    frame: Arc<Frame>,
}

fn context(g: &Global) -> Result<Ctx, CliError> {
    let mut search = SearchConfig::default();
    if let Some(s) = g.seed {
        search.seed = s;
    }
    if let Some(guard) = g.guard {
        search.guard = guard;
    }
    if let Ok(v) = std::env::var("LFUZZ_GUARD") {
        search.guard = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("LFUZZ_GUARD={v:?} is not a non-negative integer")))?;
    }
    let explicit = g.frame.as_deref().map(load_frame).transpose()?.map(Arc::new);
    let frame = explicit.clone().unwrap_or_else(|| Arc::new(Frame::chain(3).expect("chain")));
    Ok(Ctx { settings: Settings { search, frame: explicit, window: g.window, timing: g.timing }, frame })
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let ctx = context(&cli.global)?;
    match &cli.command {
        Command::Frame(c) => frame_cmd(c, &ctx),
        Command::Order(c) => order_cmd(c, &ctx),
        Command::Group(c) => group_cmd(c, &ctx),
        Command::Sub(c) => sub_cmd(c, &ctx),
        Command::Quotient(c) => quotient_cmd(c, &ctx),
        Command::Verify(a) => verify_cmd(a, &ctx),
        Command::Enumerate(c) => enumerate_cmd(c, &ctx),
        Command::Hunt(a) => hunt_cmd(a, &ctx),
    }
}

/// Inline JSON when the argument starts with `{` or `[`, a file otherwise.
pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        parse_json(arg, "<inline>")
    } else {
        read_json(Path::new(arg))
    }
}

fn load_frame(spec: &str) -> Result<Frame, CliError> {
    parse_frame_ref(spec)
}

fn load_group(arg: &str, ctx: &Ctx) -> Result<LoadedGroup, CliError> {
    let d: GroupDoc = load(arg)?;
    group_from_doc(&d, &ctx.frame, ctx.settings.window)
}

fn load_order(arg: &str, ctx: &Ctx) -> Result<LOrderedSet, CliError> {
    let d: LorderDoc = load(arg)?;
    lorder_from_doc(&d, &ctx.frame)
}

fn single(name: &str, r: Result<CheckReport, CliError>, ctx: &Ctx, extra: Option<Value>) -> Output {
    let rep = RunReport::new(name, r, None, ctx.settings.echo());
    let suite = SuiteReport::new(vec![rep.clone()]);
    let mut json = serde_json::to_value(&suite).expect("serializable");
    let mut text = rep.text_line();
    if let Some(x) = extra {
        text = format!("{}\n{text}", text_of(&x));
        json["result"] = x;
    }
    Output { code: suite.exit_code(), json, text }
}

fn text_of(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn data(json: Value, text: String) -> Output {
    Output { code: 0, json, text }
}

fn frame_out(f: &Frame) -> Output {
    let doc = FrameDoc::of(f);
    let rows: Vec<String> = f
        .elements()
        .map(|a| {
            let above: Vec<&str> = f.elements().filter(|&b| b != a && f.leq(a, b)).map(|b| f.name(b)).collect();
            format!("{} <= {{{}}}", f.name(a), above.join(", "))
        })
        .collect();
    data(json!({"schema": SCHEMA, "frame": doc}), rows.join("\n"))
}

fn frame_cmd(c: &FrameCmd, ctx: &Ctx) -> Result<Output, CliError> {
    match c {
        FrameCmd::Chain { n } => Ok(frame_out(&Frame::chain(*n)?)),
        FrameCmd::Bool { k } => Ok(frame_out(&Frame::boolean(*k)?)),
        FrameCmd::Product { a, b } => Ok(frame_out(&Frame::product(&load_frame(a)?, &load_frame(b)?)?)),
        FrameCmd::Check { spec } => {
            let f = match spec {
                Some(s) => match load_frame(s) {
                    Ok(f) => f,
                    Err(CliError::Parse { .. }) if !Path::new(s).exists() => frame_from_doc(&load(s)?)?,
                    Err(e) => return Err(e),
                },
                None => (*ctx.frame).clone(),
            };
            let rep = verify_frame_laws(&f);
            let mut r = CheckReport::new(lfuzzord_core::CertStatus::Certified);
            r.checked = rep.checked;
            for v in rep.violations {
                let w: Vec<&str> = v.witness.iter().map(|&x| f.name(x)).collect();
                r.fail(v.law.id(), w.join(", "));
            }
            Ok(single("frame check", Ok(r), ctx, None))
        }
        FrameCmd::Table { op, spec } => {
            let f = match spec {
                Some(s) => load_frame(s)?,
                None => (*ctx.frame).clone(),
            };
            let apply = |a, b| match op {
                FrameOp::Meet => f.meet(a, b),
                FrameOp::Join => f.join(a, b),
                FrameOp::Imp => f.imp(a, b),
            };
            let names: Vec<&str> = f.elements().map(|a| f.name(a)).collect();
            let rows: Vec<Vec<&str>> = f.elements().map(|a| f.elements().map(|b| f.name(apply(a, b))).collect()).collect();
            let op_name = format!("{op:?}").to_lowercase();
            let width = names.iter().map(|n| n.len()).max().unwrap_or(1);
            let lead = width.max(op_name.len());
            let line = |head: &str, cells: &[&str]| {
                let cells: Vec<String> = cells.iter().map(|n| format!("{n:>width$}")).collect();
                format!("{head:>lead$} | {}", cells.join(" "))
            };
            let mut text = vec![line(&op_name, &names)];
            for (a, row) in names.iter().zip(&rows) {
                text.push(line(a, row));
            }
            Ok(data(json!({"schema": SCHEMA, "op": op_name, "elements": names, "table": rows}), text.join("\n")))
        }
    }
}

fn bound_out(p: &LOrderedSet, subset: &str, bound: Bound, ctx: &Ctx) -> Result<Output, CliError> {
    let s = parse_subset(subset, p)?;
    let res = p.bound(&s, bound)?;
    let oracle = p.oracle_candidates(&s, bound);
    let f = p.frame();
    let cert: Vec<&str> = res.certificate.iter().map(|&v| f.name(v)).collect();
    let name = if bound == Bound::Join { "join" } else { "meet" };
    let mut r = CheckReport::new(lfuzzord_core::CertStatus::Certified);
    r.expect(res.element.into_iter().collect::<Vec<_>>() == oracle, "certificate-oracle", || {
        format!("certificate {:?}, oracle {oracle:?}", res.element)
    });
    let extra = json!({
        "subset": p.describe(&s),
        name: res.element,
        "certificate": res.element.map(|_| cert),
    });
    let mut out = single(&format!("order {name}"), Ok(r), ctx, Some(extra));
    if res.element.is_none() && out.code == 0 {
        out.code = 1;
        out.text.push_str(&format!("\nno {name} exists"));
    }
    Ok(out)
}

fn order_cmd(c: &OrderCmd, ctx: &Ctx) -> Result<Output, CliError> {
    match c {
        OrderCmd::Check { file } => {
            let p = load_order(file, ctx)?;
            Ok(single("order check", Ok(p.check_axioms()), ctx, None))
        }
        OrderCmd::Join { file, subset } => bound_out(&load_order(file, ctx)?, subset, Bound::Join, ctx),
        OrderCmd::Meet { file, subset } => bound_out(&load_order(file, ctx)?, subset, Bound::Meet, ctx),
        OrderCmd::Lattice { file } => {
            let p = load_order(file, ctx)?;
            let c = is_l_lattice(&p, &ctx.settings.search);
            let mut r = CheckReport::new(c.status.clone());
            r.checked = c.checked;
            if let Some((s, b)) = &c.witness {
                r.fail("lattice", format!("{b:?} of S={} missing", p.describe(s)));
            }
            Ok(single("order lattice", Ok(r), ctx, None))
        }
        OrderCmd::Distributive { file } => {
            let p = load_order(file, ctx)?;
            let d = check_distributive(&p, &ctx.settings.search)?;
            let extra = json!({
                "join_form": d.join_form.holds(),
                "meet_form": d.meet_form.holds(),
                "normalized_meet": d.normalized_meet.holds(),
                "normalized_join": d.normalized_join.holds(),
                "crisp_distributive": d.crisp_distributive,
            });
            let mut r = d.join_form.clone();
            r.merge(d.meet_form.clone());
            Ok(single("order distributive", Ok(r), ctx, Some(extra)))
        }
        OrderCmd::Down { file, subset } => {
            let p = load_order(file, ctx)?;
            let s = parse_subset(subset, &p)?;
            let extra = json!({
                "subset": p.describe(&s),
                "down": p.describe(&p.down_closure(&s)),
                "up": p.describe(&p.up_closure(&s)),
            });
            Ok(data(json!({"schema": SCHEMA, "result": extra}), text_of(&extra)))
        }
        OrderCmd::Image { source, target, map, subset } => {
            let (p, q) = (load_order(source, ctx)?, load_order(target, ctx)?);
            let f = point_map(map, &p, &q)?;
            let s = parse_subset(subset, &p)?;
            let img = s.image(p.frame(), |x| f[*x]);
            let extra = json!({"subset": p.describe(&s), "image": q.describe(&img)});
            Ok(data(json!({"schema": SCHEMA, "result": extra}), text_of(&extra)))
        }
        OrderCmd::Monotone { source, target, map } => {
            let (p, q) = (load_order(source, ctx)?, load_order(target, ctx)?);
            let f = point_map(map, &p, &q)?;
            let mut r = CheckReport::new(lfuzzord_core::CertStatus::Certified);
            r.checked = (p.size() * p.size()) as u64;
            if let Some((x, y)) = monotone_violation(&p, &q, &f) {
                r.fail("monotone", format!("x={x} y={y}: e(x,y)={} > e(f x,f y)={}", p.frame().name(p.e(x, y)), p.frame().name(q.e(f[x], f[y]))));
            }
            Ok(single("order monotone", Ok(r), ctx, None))
        }
        OrderCmd::Adjoint { source, target, map } => {
            let (p, q) = (load_order(source, ctx)?, load_order(target, ctx)?);
            let f = point_map(map, &p, &q)?;
            let a = has_right_adjoint(&p, &q, &f, &ctx.settings.search);
            let mut r = CheckReport::new(a.preservation.status.clone());
            r.checked = a.preservation.checked;
            r.expect(a.consistent != Some(false), "adjoint-consistency", || "partner search and join preservation disagree".into());
            let extra = json!({
                "partner": a.partner,
                "searched": a.searched,
                "preserves_joins": a.preservation.holds(),
                "witness": a.preservation.first().map(|v| v.witness.clone()),
            });
            let mut out = single("order adjoint", Ok(r), ctx, Some(extra));
            if a.partner.is_none() && out.code == 0 {
                out.code = 1;
            }
            Ok(out)
        }
        OrderCmd::Automorphisms { file } => {
            let p = load_order(file, ctx)?;
            let (g, autos) = automorphism_group(&p, AUTOMORPHISM_CAP)?;
            let f = g.frame();
            let k = autos.len();
            let table: Vec<Vec<&str>> =
                (0..k).map(|a| (0..k).map(|b| g.e(a, b).map_or("?", |v| f.name(v))).collect()).collect();
            let extra = json!({"order": k, "automorphisms": autos, "e": table});
            Ok(single("order automorphisms", Ok(check_fog(&g, &Domain::finite(g.backend()))?), ctx, Some(extra)))
        }
    }
}

fn point_map(text: &str, p: &LOrderedSet, q: &LOrderedSet) -> Result<Vec<usize>, CliError> {
    let f: Vec<usize> = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad map entry {t:?}"))))
        .collect::<Result<_, _>>()?;
    if f.len() != p.size() || f.iter().any(|&y| y >= q.size()) {
        return Err(CliError::Invalid(format!("map must list {} points below {}", p.size(), q.size())));
    }
    Ok(f)
}

fn show_map<B: GroupBackend>(g: &LOrderedGroup<B>, d: &Domain<B::Elem>, m: &dyn ValueMap<B::Elem>) -> Vec<(String, String)> {
    d.points()
        .iter()
        .map(|&x| (g.show(x), m.value(&x).map_or("?".to_string(), |v| g.frame().name(v).to_string())))
        .collect()
}

fn group_cmd(c: &GroupCmd, ctx: &Ctx) -> Result<Output, CliError> {
    match c {
        GroupCmd::Check { file } => {
            let lg = load_group(file, ctx)?;
            let r = crate::with_group!(&lg, |g, d| {
                let mut r = check_fog(g, d)?;
                r.merge(negation_identity(g, d)?);
                Ok::<_, CliError>(r)
            });
            Ok(single("group check", r, ctx, None))
        }
        GroupCmd::ConeValidate { file } => {
            let lg = load_group(file, ctx)?;
            let r = crate::with_group!(&lg, |g, d| {
                let s = cone_of_group(g, d)?;
                Ok::<_, CliError>(validate_cone_axioms(g.backend(), g.frame(), &s, d))
            });
            Ok(single("group cone-validate", r, ctx, None))
        }
        GroupCmd::FromCone { file } => {
            let lg = load_group(file, ctx)?;
            crate::with_group!(&lg, |g, d| from_cone(g, d, ctx))
        }
        GroupCmd::Riesz { file, a, bs, t } => {
            let lg = load_group(file, ctx)?;
            crate::with_group!(&lg, |g, d| riesz_cmd(g, d, a, bs, t.as_deref(), ctx))
        }
        GroupCmd::PowerIdentity { file, z, x, y, n } => {
            let lg = load_group(file, ctx)?;
            let xy = x.as_deref().zip(y.as_deref());
            match &lg {
                LoadedGroup::Finite(g) => power_cmd(g, &Domain::finite(g.backend()), z.as_deref(), xy, *n, ctx),
                LoadedGroup::Free(g, w) => {
                    let wide = Domain::of_window(&w.scaled(*n as i64 + 1));
                    power_cmd(g, &wide, z.as_deref(), xy, *n, ctx)
                }
            }
        }
        GroupCmd::Closure { file, map } => {
            let lg = load_group(file, ctx)?;
            let doc: MapDoc = load(map)?;
            crate::with_group!(&lg, |g, d| {
                let s = g.backend().map_from_doc(&doc, g.frame())?;
                let c = cone_closure(g.backend(), g.frame(), &*s, d)?;
                let extra = json!({
                    "alpha": g.frame().name(c.alpha),
                    "iterations": c.iterations,
                    "t": show_map(g, d, &c.t),
                });
                Ok(single("group closure", Ok(c.validation), ctx, Some(extra)))
            })
        }
        GroupCmd::Extension { file, map, set, alpha } => {
            let lg = load_group(file, ctx)?;
            let (doc, set_doc): (MapDoc, MapDoc) = (load(map)?, load(set)?);
            crate::with_group!(&lg, |g, d| {
                let f = g.frame();
                let s = g.backend().map_from_doc(&doc, f)?;
                let a = g.backend().map_from_doc(&set_doc, f)?;
                let bot = f.bottom();
                let in_a = move |x: &_| a.value(x).is_some_and(|v| v != bot);
                let ext = cone_extension(g.backend(), f, &*s, &in_a, elem_of_frame(f, alpha)?, d)?;
                let extra = json!({"h": show_map(g, d, &ext.h)});
                Ok(single("group extension", Ok(ext.report), ctx, Some(extra)))
            })
        }
        GroupCmd::Join { file, subset } => {
            let lg = load_group(file, ctx)?;
            crate::with_group!(&lg, |g, d| group_bound(g, d, subset, Bound::Join, ctx))
        }
        GroupCmd::Meet { file, subset } => {
            let lg = load_group(file, ctx)?;
            crate::with_group!(&lg, |g, d| group_bound(g, d, subset, Bound::Meet, ctx))
        }
        GroupCmd::Sum { file, s, t } => {
            let lg = load_group(file, ctx)?;
            crate::with_group!(&lg, |g, d| {
                let f = g.frame();
                let (a, b) = (parse_group_subset(s, g.backend(), f)?, parse_group_subset(t, g.backend(), f)?);
                let sum = sum_subsets(g.backend(), f, &a, &b);
                let view = g.view(d)?;
                let (r, law) = match verify_sum_law(&view, &a, &b) {
                    Ok(r) => (r, "checked"),
                    Err(lfuzzord_core::OgroupError::PreconditionUnmet(_)) => {
                        (CheckReport::new(view.status()), "skipped: a bound of S or T is missing")
                    }
                    Err(e) => return Err(e.into()),
                };
                let join = view.join(&sum)?.element.map(|x| g.show(x));
                let extra = json!({"sum": g.describe(&sum), "join": join, "sum_law": law});
                Ok(single("group sum", Ok(r), ctx, Some(extra)))
            })
        }
        GroupCmd::HomCone { file, hom } => {
            let lg = load_group(file, ctx)?;
            let h: HomDoc = load(hom)?;
            let target = match &h.target {
                Some(t) => group_from_doc(t, lg.frame(), ctx.settings.window)?,
                None => lg.clone(),
            };
            let eq = match (&lg, &target) {
                (LoadedGroup::Finite(g), LoadedGroup::Finite(t)) => {
                    let f = hom_finite(&h, g.backend(), t.backend())?;
                    monotone_hom_equivalence(g, t, &*f, &Domain::finite(g.backend()))?
                }
                (LoadedGroup::Free(g, w), LoadedGroup::Free(t, _)) => {
                    let f = hom_free(&h, g.backend(), t.backend())?;
                    monotone_hom_equivalence(g, t, &*f, &Domain::of_window(w))?
                }
                _ => return Err(CliError::Invalid("domain and codomain must have the same kind of backend".into())),
            };
            let mut r = CheckReport::new(eq.cone.status.clone());
            r.checked = eq.cone.checked + eq.monotone.checked + eq.image.checked;
            r.expect(eq.consistent(), "equivalence", || "the three conditions disagree".into());
            let extra = json!({
                "cone": eq.cone.holds(),
                "monotone": eq.monotone.holds(),
                "image": eq.image.holds(),
            });
            Ok(single("group hom-cone", Ok(r), ctx, Some(extra)))
        }
        GroupCmd::Distributivity { file, subset, a } => {
            let lg = load_group(file, ctx)?;
            crate::with_group!(&lg, |g, d| {
                let view = g.view(d)?;
                let s = parse_group_subset(subset, g.backend(), g.frame())?;
                let c = distributivity_criterion(&view, g.backend().parse_elem(a)?, &s)?;
                let mut r = CheckReport::new(c.status.clone());
                r.checked = c.inequality.checked;
                r.expect(c.agree(), "criterion", || "lattice equality and inequality disagree".into());
                let extra = json!({
                    "join": g.show(c.join),
                    "lattice_equality": c.lattice_equality,
                    "inequality": c.inequality.holds(),
                });
                Ok(single("group distributivity", Ok(r), ctx, Some(extra)))
            })
        }
        GroupCmd::RieszMeet { file, a, b, c, t } => {
            let lg = load_group(file, ctx)?;
            crate::with_group!(&lg, |g, d| {
                let be = g.backend();
                let view = g.view(d)?;
                let t = t.as_deref().map(|t| elem_of_frame(g.frame(), t)).transpose()?.unwrap_or(g.frame().top());
                let r = riesz_meet_inequality(&view, be.parse_elem(a)?, be.parse_elem(b)?, be.parse_elem(c)?, t)?;
                Ok(single("group riesz-meet", Ok(r), ctx, None))
            })
        }
    }
}

fn group_bound<B: Carrier>(
    g: &LOrderedGroup<B>,
    d: &Domain<B::Elem>,
    subset: &str,
    bound: Bound,
    ctx: &Ctx,
) -> Result<Output, CliError> {
    let s = parse_group_subset(subset, g.backend(), g.frame())?;
    let view = g.view(d)?;
    let res = view.bound(&s, bound)?;
    let name = if bound == Bound::Join { "join" } else { "meet" };
    let extra = json!({"subset": g.describe(&s), name: res.element.map(|x| g.show(x)), "status": res.status.to_string()});
    let mut out = single(&format!("group {name}"), Ok(CheckReport::new(res.status.clone())), ctx, Some(extra));
    if res.element.is_none() && out.code == 0 {
        out.code = 1;
        out.text.push_str(&format!("\nno {name} in the window"));
    }
    Ok(out)
}

fn from_cone<B: Carrier>(g: &LOrderedGroup<B>, d: &Domain<B::Elem>, ctx: &Ctx) -> Result<Output, CliError> {
    let wide = match d.window() {
        Some(w) => g.backend().domain(Some(&w.scaled(2)))?,
        None => d.clone(),
    };
    let s = cone_of_group(g, &wide)?;
    let built = order_from_cone(g.frame_arc().clone(), g.backend().clone(), Arc::new(s), d)?;
    let f = built.frame();
    let pts = d.points();
    let table: Vec<Vec<String>> = if pts.len() <= 32 {
        pts.iter().map(|&x| pts.iter().map(|&y| built.e(x, y).map_or("?", |v| f.name(v)).to_string()).collect()).collect()
    } else {
        Vec::new()
    };
    let top = f.top();
    let crisp: Vec<String> = pts
        .iter()
        .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| x != y && built.e(x, y) == Some(top))
        .map(|(x, y)| format!("{} <= {}", g.show(x), g.show(y)))
        .take(64)
        .collect();
    let extra = json!({
        "elements": pts.iter().map(|&x| g.show(x)).collect::<Vec<_>>(),
        "e": table,
        "crisp_order": crisp,
    });
    Ok(single("group from-cone", Ok(check_fog(&built, d)?), ctx, Some(extra)))
}

fn elem_of_frame(f: &Frame, s: &str) -> Result<FrameElt, CliError> {
    crate::format::Elt::Name(s.to_string()).resolve(f)
}

fn riesz_cmd<B: Carrier>(
    g: &LOrderedGroup<B>,
    d: &Domain<B::Elem>,
    a: &str,
    bs: &[String],
    t: Option<&str>,
    ctx: &Ctx,
) -> Result<Output, CliError> {
    let be = g.backend();
    let a = be.parse_elem(a)?;
    let bs: Vec<B::Elem> = bs.iter().map(|b| be.parse_elem(b)).collect::<Result<_, _>>()?;
    let t = t.map(|t| elem_of_frame(g.frame(), t)).transpose()?.unwrap_or(g.frame().top());
    let view = g.view(d)?;
    let parts = riesz_decompose(&view, a, &bs, t)?;
    let f = g.frame();
    let zero = be.zero();
    let mut r = CheckReport::new(view.status());
    let sum = parts.iter().fold(zero, |acc, &x| be.add(acc, x));
    r.expect(sum == a, "sum", || format!("parts sum to {}", be.show(sum)));
    for (p, b) in parts.iter().zip(&bs) {
        let ok = view.e(zero, *p).is_some_and(|v| f.leq(t, v)) && view.e(*p, *b).is_some_and(|v| f.leq(t, v));
        r.expect(ok, "bounds", || format!("part {} against b={}", be.show(*p), be.show(*b)));
    }
    let oracle = riesz_oracle(&view, a, &bs, t)?;
    r.expect(oracle.is_some(), "oracle", || "no decomposition found by exhaustive search".into());
    let extra = json!({
        "parts": parts.iter().map(|&p| be.show(p)).collect::<Vec<_>>(),
        "oracle": oracle.map(|o| o.iter().map(|&p| be.show(p)).collect::<Vec<_>>()),
    });
    Ok(single("group riesz", Ok(r), ctx, Some(extra)))
}

fn power_cmd<B: Carrier>(
    g: &LOrderedGroup<B>,
    d: &Domain<B::Elem>,
    z: Option<&str>,
    xy: Option<(&str, &str)>,
    n: usize,
    ctx: &Ctx,
) -> Result<Output, CliError> {
    let be = g.backend();
    let view = g.view(d)?;
    let r = match (z, xy) {
        (Some(z), _) => power_identity(&view, be.parse_elem(z)?, n)?,
        (None, Some((x, y))) => power_identity_pair(&view, be.parse_elem(x)?, be.parse_elem(y)?, n)?,
        (None, None) => return Err(CliError::Usage("give --z, or --x and --y".into())),
    };
    Ok(single("group power-identity", Ok(r), ctx, None))
}

fn sub_cmd(c: &SubCmd, ctx: &Ctx) -> Result<Output, CliError> {
    match c {
        SubCmd::Check { group, map } => {
            let lg = load_group(group, ctx)?;
            let doc: MapDoc = load(map)?;
            crate::with_group!(&lg, |g, d| {
                let s = g.backend().map_from_doc(&doc, g.frame())?;
                let sub = is_l_subgroup(g.backend(), g.frame(), &*s, d);
                let normal = is_normal(g.backend(), g.frame(), &*s, d);
                let convex = is_convex(g, &*s, d)?;
                let level = if sub.holds() && normal.holds() {
                    let l = level_subgroup(g.backend(), g.frame(), &*s, d)?;
                    Some(l.points.iter().map(|&x| g.show(x)).collect::<Vec<_>>())
                } else {
                    None
                };
                let down = if sub.holds() { Some(down_cone_identity(g, &*s, d)?) } else { None };
                let extra = json!({
                    "l_subgroup": sub.holds(),
                    "normal": normal.holds(),
                    "convex": convex.definition.holds(),
                    "convex_criterion": convex.criterion.as_ref().map(|c| c.holds()),
                    "convex_witness": convex.definition.first().map(|v| v.witness.clone()),
                    "level": level,
                    "down_cone_identity": down.as_ref().map(|r| r.identity.holds()),
                    "down_cone_witness": down.as_ref().and_then(|r| r.identity.first().map(|v| v.witness.clone())),
                });
                let mut r = sub;
                r.merge(normal);
                r.merge(convex.definition);
                Ok(single("sub check", Ok(r), ctx, Some(extra)))
            })
        }
        SubCmd::Hull { group, map } => {
            let lg = load_group(group, ctx)?;
            let doc: MapDoc = load(map)?;
            crate::with_group!(&lg, |g, d| {
                let s = g.backend().map_from_doc(&doc, g.frame())?;
                let h = convex_hull(g, &*s, d, &ctx.settings.search)?;
                let extra = json!({"hull": show_map(g, d, &h.hull)});
                let mut r = h.convex;
                r.merge(h.minimality);
                if let Some(nc) = h.normal_convex {
                    r.merge(nc);
                }
                Ok(single("sub hull", Ok(r), ctx, Some(extra)))
            })
        }
    }
}

fn quotient_cmd(c: &QuotientCmd, ctx: &Ctx) -> Result<Output, CliError> {
    match c {
        QuotientCmd::Build { group, map } => {
            let lg = load_group(group, ctx)?;
            let doc: MapDoc = load(map)?;
            crate::with_group!(&lg, |g, d| {
                let s = g.backend().map_from_doc(&doc, g.frame())?;
                let q = build_quotient(g, s, d)?;
                let f = g.frame();
                let names = |row: Vec<FrameElt>| row.into_iter().map(|v| f.name(v).to_string()).collect::<Vec<_>>();
                let extra = json!({
                    "order": q.order(),
                    "alpha": f.name(q.alpha),
                    "representatives": q.reps.iter().map(|&x| g.show(x)).collect::<Vec<_>>(),
                    "e": q.e_table().into_iter().map(names).collect::<Vec<_>>(),
                    "s_tilde": names(q.s_tilde.to_vec(q.order()).unwrap_or_default()),
                });
                let mut r = q.report.clone();
                r.merge(natural_projection(g, &q, d)?);
                Ok(single("quotient build", Ok(r), ctx, Some(extra)))
            })
        }
        QuotientCmd::Kernel { group, hom } => {
            let lg = load_group(group, ctx)?;
            let h: HomDoc = load(hom)?;
            let target = match &h.target {
                Some(t) => group_from_doc(t, lg.frame(), ctx.settings.window)?,
                None => lg.clone(),
            };
            match (&lg, &target) {
                (LoadedGroup::Finite(g), LoadedGroup::Finite(t)) => {
                    let f = hom_finite(&h, g.backend(), t.backend())?;
                    kernel_out(g, t, f, &Domain::finite(g.backend()), ctx)
                }
                (LoadedGroup::Free(g, w), LoadedGroup::Free(t, _)) => {
                    let f = hom_free(&h, g.backend(), t.backend())?;
                    kernel_out(g, t, f, &Domain::of_window(w), ctx)
                }
                _ => Err(CliError::Invalid("domain and codomain must have the same kind of backend".into())),
            }
        }
    }
}

fn kernel_out<B: GroupBackend, C: GroupBackend>(
    g: &LOrderedGroup<B>,
    h: &LOrderedGroup<C>,
    f: Arc<dyn Fn(B::Elem) -> C::Elem + Send + Sync>,
    d: &Domain<B::Elem>,
    ctx: &Ctx,
) -> Result<Output, CliError> {
    let e = induced_embedding(g, h, f, d)?;
    let top = g.frame().top();
    let level: Vec<String> =
        d.points().iter().filter(|x| e.kernel.table.value(x) == Some(top)).map(|&x| g.show(x)).collect();
    let extra = json!({
        "kernel": show_map(g, d, &e.kernel.table),
        "level": level,
        "quotient_order": e.quotient.as_ref().map(|q| q.order()),
    });
    let mut r = e.kernel.filter;
    r.merge(e.kernel.zero_level);
    r.merge(e.report);
    Ok(single("quotient kernel", Ok(r), ctx, Some(extra)))
}

fn verify_cmd(a: &VerifyArgs, ctx: &Ctx) -> Result<Output, CliError> {
    if a.list {
        let rows: Vec<Value> =
            claims::registry().iter().map(|c| json!({"claim": c.id, "statement": c.statement})).collect();
        let text = claims::registry().iter().map(|c| format!("{:<24} {}", c.id, c.statement)).collect::<Vec<_>>();
        return Ok(data(json!({"schema": SCHEMA, "claims": rows}), text.join("\n")));
    }
    let selected = claims::resolve(&a.claims)?;
    let inputs = Inputs {
        order: a.order.as_deref().map(|o| load_order(o, ctx)).transpose()?,
        group: a.group.as_deref().map(|g| load_group(g, ctx)).transpose()?,
        sub: a.sub.as_deref().map(load::<MapDoc>).transpose()?,
        hom: a.hom.as_deref().map(load::<HomDoc>).transpose()?,
    };
    let reports = claims::run_suite(&selected, &inputs, &ctx.settings);
    let suite = SuiteReport::new(reports);
    let json = serde_json::to_value(&suite).expect("serializable");
    if let Some(path) = &a.out {
        let body = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
        std::fs::write(path, body).map_err(|e| CliError::Usage(format!("cannot write {path}: {e}")))?;
    }
    let held = suite.reports.iter().filter(|r| r.holds()).count();
    let mut lines: Vec<String> = suite.reports.iter().map(RunReport::text_line).collect();
    lines.push(format!("{held}/{} claims hold", suite.reports.len()));
    Ok(Output { code: suite.exit_code(), json, text: lines.join("\n") })
}

fn limited<T>(it: impl Iterator<Item = T>, limit: Option<usize>) -> Vec<T> {
    match limit {
        Some(k) => it.take(k).collect(),
        None => it.collect(),
    }
}

fn guard(what: &str, base: usize, cells: usize, ctx: &Ctx) -> Result<(), CliError> {
    let needed = (base as u128).saturating_pow(cells as u32);
    let g = ctx.settings.search.guard;
    if needed > g as u128 {
        return Err(CliError::GuardExceeded { what: what.to_string(), needed, guard: g });
    }
    Ok(())
}

fn enumerate_cmd(c: &EnumerateCmd, ctx: &Ctx) -> Result<Output, CliError> {
    let f = ctx.frame.clone();
    match c {
        EnumerateCmd::Lorder { size, no_e3, limit } => {
            guard("relation tables", f.size(), size * size.saturating_sub(1), ctx)?;
            let items = limited(lordered_sets(f.clone(), *size, !no_e3), *limit);
            let docs: Vec<LorderDoc> = items.iter().map(lorder_doc).collect();
            let text: Vec<String> = items.iter().map(|p| table_line(p.frame(), &p.table())).collect();
            Ok(stream_out("lorder", serde_json::to_value(&docs).expect("serializable"), text))
        }
        EnumerateCmd::LgroupFinite { cyclic, group, limit } => {
            let g = match (cyclic, group) {
                (Some(n), _) => FiniteGroup::cyclic(*n)?,
                (None, Some(file)) => match load_group(file, ctx)? {
                    LoadedGroup::Finite(g) => g.backend().clone(),
                    LoadedGroup::Free(..) => return Err(CliError::Invalid("enumeration needs a finite group".into())),
                },
                (None, None) => return Err(CliError::Usage("give --cyclic N or --group FILE".into())),
            };
            guard("maps G -> L", f.size(), g.order(), ctx)?;
            let items = limited(cones(g.clone(), f.clone()), *limit);
            let n = g.order();
            let rows: Vec<Vec<String>> = items.iter().map(|m| names_of(&f, m, n)).collect();
            let text = rows.iter().map(|r| format!("cone [{}]", r.join(","))).collect();
            let docs: Vec<Value> = rows
                .iter()
                .map(|r| json!({"kind": "lgroup", "backend": {"finite": {"cayley": g.cayley()}}, "cone": {"values": r}}))
                .collect();
            Ok(stream_out("lgroup-finite", Value::Array(docs), text))
        }
        EnumerateCmd::Lfilter { group, limit } => {
            let LoadedGroup::Finite(g) = load_group(group, ctx)? else {
                return Err(CliError::Invalid("enumeration needs a finite group".into()));
            };
            guard("maps G -> L", g.frame().size(), g.backend().order(), ctx)?;
            let n = g.backend().order();
            let items = limited(l_filters(&g), *limit);
            let rows: Vec<Vec<String>> = items.iter().map(|m| names_of(g.frame(), m, n)).collect();
            let text = rows.iter().map(|r| format!("filter [{}]", r.join(","))).collect();
            let docs: Vec<Value> = rows.iter().map(|r| json!({"kind": "map", "values": r})).collect();
            Ok(stream_out("lfilter", Value::Array(docs), text))
        }
    }
}

fn names_of(f: &Frame, m: &PointMap<usize>, n: usize) -> Vec<String> {
    (0..n).map(|i| m.value(&i).map_or("?".into(), |v| f.name(v).to_string())).collect()
}

fn table_line(f: &Frame, t: &[Vec<FrameElt>]) -> String {
    let rows: Vec<String> = t.iter().map(|r| r.iter().map(|&v| f.name(v)).collect::<Vec<_>>().join(",")).collect();
    format!("e=[{}]", rows.join("; "))
}

fn stream_out(kind: &str, items: Value, mut text: Vec<String>) -> Output {
    let count = items.as_array().map_or(0, Vec::len);
    text.push(format!("{count} structures"));
    data(json!({"schema": SCHEMA, "kind": kind, "count": count, "items": items}), text.join("\n"))
}

fn hunt_cmd(a: &HuntArgs, ctx: &Ctx) -> Result<Output, CliError> {
    let q = HuntQuery {
        claim: a.claim.clone(),
        weakening: a.drop.clone(),
        max_size: a.max_size,
        frame: ctx.frame.clone(),
        search: ctx.settings.search,
    };
    let o = counterexample_search(&q)?;
    Ok(Output { code: o.exit_code(), json: to_json(&o), text: o.text() })
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}
