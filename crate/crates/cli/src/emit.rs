//! Text, TSV, JSON and DOT renderings shared by the subcommands.

use std::fmt::Write as _;

use qq_core::hammock::Grid;
use qq_core::laurent::{Laurent, Monomial, Var};
use qq_core::objects::{KVar, Obj};
use qq_core::repetition::{zq_arrows, Direction};
use qq_core::{Context, ZVertex};
use serde_json::{json, Map, Value};

pub fn monomial_json<V: Var>(m: &Monomial<V>, key: impl Fn(&V) -> String) -> Value {
    let map: Map<String, Value> = m.iter().map(|(v, e)| (key(v), json!(e))).collect();
    Value::Object(map)
}

/// `[{"coeff": c, "mono": {"Y:i:p": e, ...}}, ...]`
pub fn poly_json(p: &Laurent<KVar>) -> Value {
    Value::Array(p.terms().map(|(m, c)| json!({"coeff": c, "mono": monomial_json(m, KVar::key)})).collect())
}

/// One `coeff<TAB>monomial` line per term, sorted by the monomial text.
pub fn poly_tsv<V: Var>(p: &Laurent<V>) -> String {
    let mut rows: Vec<(String, i64)> = p.terms().map(|(m, c)| (m.to_string(), c)).collect();
    rows.sort();
    rows.into_iter().map(|(m, c)| format!("{c}\t{m}\n")).collect()
}

fn pairs_json(map: impl Iterator<Item = (String, i64)>) -> Value {
    Value::Array(map.map(|(k, v)| json!([k, v])).collect())
}

pub fn object_json(o: &Obj) -> Value {
    json!({
        "multiset": pairs_json(o.multiset.iter().map(|(x, m)| (x.key(), i64::from(*m)))),
        "gens": pairs_json(o.fun.gens.iter().map(|(x, c)| (x.key(), *c))),
        "deltas": pairs_json(o.fun.deltas.iter().map(|(x, c)| (x.key(), *c))),
        "kclass": o.kclass.as_ref().map(|k| monomial_json(k, KVar::key)),
    })
}

pub fn object_text(o: &Obj) -> String {
    match &o.kclass {
        Some(k) => format!("[{k}]"),
        None => {
            let parts: Vec<String> =
                o.multiset.iter().map(|(x, m)| if *m == 1 { x.to_string() } else { format!("{x}^{m}") }).collect();
            format!("{{{}}}", parts.join(" "))
        }
    }
}

/// DOT drawing of the vertices of ZQ in the window, with optional values.
pub fn window_dot(ctx: &Context, p_min: i32, p_max: i32, values: Option<&Grid>, highlight: Option<ZVertex>) -> String {
    let vertices = ctx.window(p_min, p_max);
    let mut s = String::from("digraph ZQ {\n  node [shape=plaintext];\n");
    for y in &vertices {
        let mut label = y.to_string();
        if let Some(v) = values.and_then(|g| g.get(*y)) {
            let _ = write!(label, "\\n{v}");
        }
        let colour = if Some(*y) == highlight { ", fontcolor=red" } else { "" };
        let _ = writeln!(s, "  \"{}\" [label=\"{label}\", pos=\"{},{}!\"{colour}];", y.key(), y.p, -(y.i as i64));
    }
    for y in &vertices {
        for z in zq_arrows(ctx.quiver(), *y, Direction::Out) {
            if z.p <= p_max {
                let _ = writeln!(s, "  \"{}\" -> \"{}\";", y.key(), z.key());
            }
        }
    }
    s.push_str("}\n");
    s
}
