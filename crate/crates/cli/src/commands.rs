use std::collections::BTreeMap;

use qq_core::cluster::{enumerate_cluster_variables, CVar};
use qq_core::complexes::{ComplexBuilder, FractionComplex};
use qq_core::hammock::QFun;
use qq_core::qchar::{QcharEngine, Target};
use qq_core::quiver::{beta_combinatorics, dynkin_edges, positive_roots, DynkinQuiver, DynkinType, Root};
use qq_core::repetition::{is_valid, SerreData};
use qq_core::{Context, ZVertex};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::emit;
use crate::error::{CliError, CliResult};

/// What a subcommand produced. `passed` is false for verification failures.
pub struct Output {
    pub body: String,
    pub passed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, passed: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    Euler,
    Cluster,
    Recursion,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Terms,
    Json,
    Chi,
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::Input(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

fn sorted_roots(q: &DynkinQuiver) -> Vec<Root> {
    let mut roots = positive_roots(q);
    roots.sort_by(|a, b| (a.height(), a).cmp(&(b.height(), b)));
    roots
}

fn set_text<T: std::fmt::Display>(s: impl IntoIterator<Item = T>) -> String {
    s.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn ensure_root(q: &DynkinQuiver, t: &Target) -> CliResult<()> {
    let known = match t {
        Target::Positive(beta) => positive_roots(q).contains(beta),
        Target::NegativeSimple(i) => q.vertices().any(|v| v == *i),
    };
    if known {
        Ok(())
    } else {
        Err(qq_core::Error::UnknownRoot(t.to_string()).into())
    }
}

pub fn roots(ctx: &Context, format: Format) -> CliResult<Output> {
    let q = ctx.quiver();
    let mut rows = Vec::new();
    for beta in sorted_roots(q) {
        let data = beta_combinatorics(q, ctx.xi(), &beta)?;
        rows.push((beta.clone(), ctx.dominant_monomial(&beta), data.support, data.candidates));
    }
    let body = match format {
        Format::Json => {
            serde_json::to_string_pretty(&Value::Array(
                rows.iter()
                    .map(|(b, m, s, c)| {
                        json!({
                            "beta": b.to_string(),
                            "height": b.height(),
                            "m_beta": emit::monomial_json(m, qq_core::objects::KVar::key),
                            "support": s,
                            "pick_set": c,
                        })
                    })
                    .collect(),
            ))? + "\n"
        }
        Format::Text | Format::Tsv => {
            let mut s = String::from("beta\theight\tm_beta\tsupport\tpick_set\n");
            for (b, m, sup, c) in &rows {
                s.push_str(&format!("{b}\t{}\t{m}\t{}\t{}\n", b.height(), set_text(sup), set_text(c)));
            }
            s
        }
        f => return Err(unsupported("roots", f)),
    };
    Ok(Output::ok(body))
}

pub fn default_window(ctx: &Context, x: ZVertex) -> (i32, i32) {
    (x.p - 2, x.p + ctx.coxeter() + 1)
}

pub fn hammock(ctx: &Context, x: ZVertex, window: (i32, i32), format: Format) -> CliResult<Output> {
    if !is_valid(ctx.quiver(), x) {
        return Err(CliError::Input(format!("{x} is not a vertex of ZQ")));
    }
    let (lo, hi) = window;
    let grid = ctx.eval_window(&QFun::hammock(x), lo, hi);
    let body = match format {
        Format::Tsv | Format::Text => grid.to_tsv(),
        Format::Json => serde_json::to_string_pretty(&grid)? + "\n",
        Format::Dot => emit::window_dot(ctx, lo, hi, Some(&grid), Some(x)),
    };
    Ok(Output::ok(body))
}

pub fn ar_view(ctx: &Context, window: (i32, i32), overlay: Option<ZVertex>) -> CliResult<Output> {
    if let Some(x) = overlay {
        if !is_valid(ctx.quiver(), x) {
            return Err(CliError::Input(format!("{x} is not a vertex of ZQ")));
        }
    }
    let grid = overlay.map(|x| ctx.eval_window(&QFun::hammock(x), window.0, window.1));
    Ok(Output::ok(emit::window_dot(ctx, window.0, window.1, grid.as_ref(), overlay)))
}

fn build(ctx: &Context, t: &Target) -> CliResult<FractionComplex> {
    ensure_root(ctx.quiver(), t)?;
    let b = ComplexBuilder::new(ctx);
    Ok(match t {
        Target::NegativeSimple(i) => b.build_negative_simple(*i)?,
        Target::Positive(beta) => (*b.build(beta)?).clone(),
    })
}

pub fn complex(ctx: &Context, t: &Target, what: Emit, keep_f: bool) -> CliResult<Output> {
    let fc = build(ctx, t)?;
    let body = match what {
        Emit::Chi => {
            let chi = ctx.euler_char(&fc, if keep_f { None } else { Some(-1) })?;
            format!("{chi}\n")
        }
        Emit::Terms => {
            let mut s = format!("denominator\t{}\n", set_text(fc.den.iter().map(|(i, e)| format!("{i}:{e}"))));
            for (n, term) in fc.num.terms.iter().enumerate() {
                let objs: Vec<String> = term.iter().map(emit::object_text).collect();
                s.push_str(&format!("C_{n}\t{}\n", objs.join(" + ")));
            }
            for (n, c) in fc.num.components() {
                let sign = if c.sign < 0 { "-" } else { "+" };
                s.push_str(&format!("d_{n}\t{}->{}\t{sign}{}\n", c.from, c.to, c.tag));
            }
            s
        }
        Emit::Json => {
            let degrees: Vec<Value> = fc
                .num
                .terms
                .iter()
                .enumerate()
                .map(|(n, term)| {
                    json!({
                        "degree": n,
                        "objects": term.iter().map(emit::object_json).collect::<Vec<_>>(),
                        "components": fc.num.diff(n),
                    })
                })
                .collect();
            let den: BTreeMap<String, u32> = fc.den.iter().map(|(i, e)| (i.to_string(), *e)).collect();
            serde_json::to_string_pretty(&json!({"target": t.to_string(), "den": den, "degrees": degrees}))? + "\n"
        }
    };
    Ok(Output::ok(body))
}

pub fn qchar(ctx: &Context, t: &Target, route: Route, format: Format) -> CliResult<Output> {
    ensure_root(ctx.quiver(), t)?;
    let engine = QcharEngine::new(ctx)?;
    let routes: Vec<(&str, qq_core::qchar::QPoly)> = match route {
        Route::Euler => vec![("euler", engine.qchar_euler(t)?)],
        Route::Cluster => vec![("cluster", engine.qchar_cluster(t)?)],
        Route::Recursion => vec![("recursion", engine.qchar_recursion(t)?)],
        Route::All => vec![
            ("euler", engine.qchar_euler(t)?),
            ("cluster", engine.qchar_cluster(t)?),
            ("recursion", engine.qchar_recursion(t)?),
        ],
    };
    let equal = routes.windows(2).all(|w| w[0].1 == w[1].1);
    let body = match format {
        Format::Text => {
            let mut s: String = routes.iter().map(|(n, p)| format!("{n}\t{p}\n")).collect();
            if route == Route::All {
                s.push_str(&format!("verdict\t{}\n", if equal { "pass" } else { "fail" }));
            }
            s
        }
        Format::Tsv => routes.iter().map(|(n, p)| format!("# {n}\n{}", emit::poly_tsv(p))).collect(),
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("target".into(), json!(t.to_string()));
            for (n, p) in &routes {
                obj.insert((*n).into(), emit::poly_json(p));
            }
            if route == Route::All {
                obj.insert("equal".into(), json!(equal));
            }
            serde_json::to_string_pretty(&Value::Object(obj))? + "\n"
        }
        f => return Err(unsupported("qchar", f)),
    };
    Ok(Output { body, passed: equal })
}

pub fn cluster_list(ctx: &Context, format: Format) -> CliResult<Output> {
    let table = enumerate_cluster_variables(ctx.quiver())?;
    let key = |v: &CVar| match v {
        CVar::X(i) => format!("x:{i}"),
        CVar::Frozen(i) => format!("X:{i}"),
    };
    let mut entries: Vec<(String, &qq_core::cluster::ClusterPoly)> = Vec::new();
    for (i, p) in &table.initial {
        let mut d = vec!["0".to_string(); ctx.rank()];
        d[i - 1] = "-1".into();
        entries.push((d.join(","), p));
    }
    for (beta, p) in &table.positive {
        entries.push((beta.to_string(), p));
    }
    let body = match format {
        Format::Json => {
            let vars: serde_json::Map<String, Value> = entries
                .iter()
                .map(|(d, p)| {
                    let terms: Vec<Value> =
                        p.terms().map(|(m, c)| json!({"coeff": c, "mono": emit::monomial_json(m, key)})).collect();
                    (d.clone(), json!({"expr": p.to_string(), "terms": terms}))
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "count": table.len(),
                "seeds": table.seeds,
                "mutations": table.mutations,
                "anomalies": table.anomalies,
                "variables": vars,
            }))? + "\n"
        }
        Format::Text | Format::Tsv => entries.iter().map(|(d, p)| format!("{d}\t{p}\n")).collect(),
        f => return Err(unsupported("cluster", f)),
    };
    Ok(Output { body, passed: table.anomalies.is_empty() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orientations {
    All,
    Random(usize),
}

impl std::str::FromStr for Orientations {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "all" => Ok(Orientations::All),
            other => other
                .strip_prefix("random:")
                .and_then(|k| k.parse().ok())
                .map(Orientations::Random)
                .ok_or_else(|| CliError::Input(format!("orientations {other:?}: expected all or random:k"))),
        }
    }
}

pub struct SweepSpec {
    pub types: Vec<DynkinType>,
    pub max_rank: usize,
    pub orientations: Orientations,
    pub seed: u64,
    pub inject_bad_nu: bool,
}

fn ranks(kind: DynkinType, max_rank: usize) -> Vec<usize> {
    let lo = match kind {
        DynkinType::A => 1,
        DynkinType::D => 4,
        DynkinType::E => 6,
    };
    let hi = if kind == DynkinType::E { max_rank.min(8) } else { max_rank };
    (lo..=hi).collect()
}

/// The quivers of a sweep, in a fixed order, drawn from one seeded generator.
pub fn sweep_quivers(spec: &SweepSpec) -> CliResult<Vec<DynkinQuiver>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::new();
    for &kind in &spec.types {
        for n in ranks(kind, spec.max_rank) {
            let edges = dynkin_edges(kind, n)?;
            let total = 1usize << edges.len();
            let masks: Vec<usize> = match spec.orientations {
                Orientations::All => (0..total).collect(),
                Orientations::Random(k) if k >= total => (0..total).collect(),
                Orientations::Random(k) => {
                    let mut m = sample(&mut rng, total, k).into_vec();
                    m.sort_unstable();
                    m
                }
            };
            for mask in masks {
                out.push(DynkinQuiver::from_mask(kind, n, &edges, mask as u64)?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

impl Tally {
    fn add(&mut self, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

#[derive(Debug, Default, Serialize)]
pub struct Clauses {
    pub serre_duality: Tally,
    pub routes_equal: Tally,
    pub highest_is_dominant: Tally,
    pub lowest_matches: Tally,
    pub positive: Tally,
    pub top_coefficient_one: Tally,
}

#[derive(Debug, Serialize)]
pub struct Failure {
    pub quiver: String,
    pub beta: Option<String>,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub types: Vec<String>,
    pub max_rank: usize,
    pub orientations: String,
    pub quivers: usize,
    pub roots: usize,
    pub clauses: Clauses,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

fn serre_duality_holds(ctx: &Context) -> Option<String> {
    let h = ctx.coxeter();
    let lo = ctx.xi().min() - 2;
    let xs = ctx.window(lo, lo + h);
    let ys = ctx.window(lo - h, lo + 3 * h);
    for &x in &xs {
        for &y in &ys {
            let s = ctx.serre(x);
            if ctx.dim_hom(x, y) != ctx.dim_hom(y, s) {
                return Some(format!("dim_hom({x},{y}) != dim_hom({y},{s})"));
            }
        }
    }
    None
}

fn bad_nu(q: &DynkinQuiver) -> SerreData {
    let mut s = SerreData::standard(q);
    if s.nu.len() > 2 {
        s.nu.swap(1, 2);
    }
    s
}

struct QuiverOutcome {
    label: String,
    serre: Option<String>,
    reports: Vec<qq_core::qchar::BetaReport>,
    error: Option<String>,
}

fn check_quiver(q: &DynkinQuiver, inject_bad_nu: bool) -> QuiverOutcome {
    let base = match Context::new(q.clone()) {
        Ok(c) => c,
        Err(e) => {
            return QuiverOutcome { label: q.label(), serre: None, reports: Vec::new(), error: Some(e.to_string()) }
        }
    };
    let ctx = if inject_bad_nu { Context::with_serre(q.clone(), base.xi().clone(), bad_nu(q)) } else { base };
    let serre = serre_duality_holds(&ctx);
    if serre.is_some() {
        let error = Some("route checks skipped: the Serre table is inconsistent".to_string());
        return QuiverOutcome { label: q.label(), serre, reports: Vec::new(), error };
    }
    match QcharEngine::new(&ctx) {
        Ok(engine) => {
            QuiverOutcome { label: q.label(), serre, reports: engine.verify_all(&sorted_roots(q)), error: None }
        }
        Err(e) => QuiverOutcome { label: q.label(), serre, reports: Vec::new(), error: Some(e.to_string()) },
    }
}

pub fn verify(spec: &SweepSpec) -> CliResult<Output> {
    let quivers = sweep_quivers(spec)?;
    let outcomes: Vec<QuiverOutcome> = quivers.par_iter().map(|q| check_quiver(q, spec.inject_bad_nu)).collect();
    let mut clauses = Clauses::default();
    let mut failures = Vec::new();
    let mut roots = 0;
    for o in &outcomes {
        clauses.serre_duality.add(o.serre.is_none());
        if let Some(d) = &o.serre {
            failures.push(Failure { quiver: o.label.clone(), beta: None, detail: format!("serre duality: {d}") });
        }
        if let Some(e) = &o.error {
            failures.push(Failure { quiver: o.label.clone(), beta: None, detail: e.clone() });
        }
        for r in &o.reports {
            roots += 1;
            clauses.routes_equal.add(r.routes_equal);
            clauses.highest_is_dominant.add(r.highest_is_dominant);
            clauses.lowest_matches.add(r.lowest_matches);
            clauses.positive.add(r.positive);
            clauses.top_coefficient_one.add(r.top_coefficient_one);
            if !r.passed() {
                failures.push(Failure {
                    quiver: o.label.clone(),
                    beta: Some(r.beta.clone()),
                    detail: format!("{r:?}"),
                });
            }
        }
    }
    let report = SweepReport {
        seed: spec.seed,
        types: spec.types.iter().map(|t| t.to_string()).collect(),
        max_rank: spec.max_rank,
        orientations: match spec.orientations {
            Orientations::All => "all".into(),
            Orientations::Random(k) => format!("random:{k}"),
        },
        quivers: quivers.len(),
        roots,
        clauses,
        passed: failures.is_empty(),
        failures,
    };
    let passed = report.passed;
    Ok(Output { body: serde_json::to_string_pretty(&report)? + "\n", passed })
}
