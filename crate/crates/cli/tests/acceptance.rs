//! One line per acceptance criterion. Exits nonzero when any criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use qq::commands::{self, Format};
use qq_core::cluster::enumerate_cluster_variables;
use qq_core::complexes::FractionComplex;
use qq_core::hammock::QFun;
use qq_core::laurent::{Laurent, Monomial};
use qq_core::objects::{KVar, Obj};
use qq_core::qchar::{QcharEngine, Target};
use qq_core::quiver::{beta_combinatorics, dynkin_edges, positive_roots, DynkinQuiver, DynkinType, Root};
use qq_core::repetition::{zq_arrows, Direction};
use qq_core::{Context, ZVertex};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = Result<String, String>;

fn all(kind: DynkinType, n: usize) -> Vec<DynkinQuiver> {
    DynkinQuiver::all_orientations(kind, n).unwrap()
}

/// A_1..A_5 and D_4 in every orientation, plus every orientation of D_5.
fn object_quivers() -> Vec<DynkinQuiver> {
    let mut qs = support::every_test_quiver();
    qs.extend(all(DynkinType::D, 5));
    qs
}

/// A_1..A_5 and D_4 in every orientation, plus eight seeded D_5 orientations.
fn sweep_quivers() -> Vec<DynkinQuiver> {
    let mut qs = support::every_test_quiver();
    let edges = dynkin_edges(DynkinType::D, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20240);
    let mut masks = sample(&mut rng, 1 << edges.len(), 8).into_vec();
    masks.sort_unstable();
    for m in masks {
        qs.push(DynkinQuiver::from_mask(DynkinType::D, 5, &edges, m as u64).unwrap());
    }
    qs
}

fn first_failures(fails: Vec<String>, total: usize) -> Check {
    if fails.is_empty() {
        Ok(format!("{total} checks"))
    } else {
        Err(format!("{} of {total} failed, first: {}", fails.len(), fails[0]))
    }
}

fn within(limit: Duration, took: Duration, r: Check) -> Check {
    let r = r?;
    if took > limit {
        Err(format!("{r}, but took {took:?} (limit {limit:?})"))
    } else {
        Ok(r)
    }
}

/// Values printed for h_x on A_4 (1→2→3←4) with x = (3,-1); rows are
/// vertices 1..4 over p = -3..5.
const FIGURE: [&[(i32, i64)]; 4] = [
    &[(-1, 0), (1, 1), (3, 0), (5, -1)],
    &[(-2, 0), (0, 1), (2, 1), (4, -1)],
    &[(-3, 0), (-1, 1), (1, 1), (3, 0)],
    &[(-2, 0), (0, 1), (2, 0), (4, 0)],
];

fn criterion_1() -> Check {
    let start = Instant::now();
    let q = DynkinQuiver::new(DynkinType::A, 4, &[(1, 2), (2, 3), (4, 3)]).unwrap();
    let c = Context::new(q).unwrap();
    let out = commands::hammock(&c, ZVertex::new(3, -1), (-3, 5), Format::Tsv).map_err(|e| e.to_string())?;
    let mut lines = out.body.lines();
    let header: Vec<i32> = lines.next().unwrap().split('\t').skip(1).map(|t| t.parse().unwrap()).collect();
    let mut fails = Vec::new();
    let mut total = 0;
    for (row, expected) in lines.zip(FIGURE.iter()) {
        let cells: Vec<&str> = row.split('\t').skip(1).collect();
        for &(p, v) in expected.iter() {
            total += 1;
            let col = header.iter().position(|h| *h == p).unwrap();
            if cells.get(col).copied() != Some(v.to_string().as_str()) {
                fails.push(format!("row {row:?} p={p}"));
            }
        }
    }
    within(Duration::from_secs(1), start.elapsed(), first_failures(fails, total))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut qs = Vec::new();
    for n in 2..=5 {
        qs.extend(all(DynkinType::A, n));
    }
    qs.extend(all(DynkinType::D, 4));
    qs.extend(all(DynkinType::D, 5));
    let results: Vec<(usize, Vec<String>)> = qs
        .par_iter()
        .map(|q| {
            let c = Context::new(q.clone()).unwrap();
            let h = c.coxeter();
            let mut fails = Vec::new();
            let xs = c.window(-h, 2 * h - 1);
            for &x in &xs {
                let lhs = QFun::hammock(x).plus(&QFun::hammock(x.tau(-1)));
                let mut rhs = QFun::delta(x);
                for y in zq_arrows(q, x, Direction::Out) {
                    rhs.add_gen(y, 1);
                }
                if !c.qfun_equal(&lhs, &rhs) {
                    fails.push(format!("{} at {x}", q.label()));
                }
            }
            (xs.len(), fails)
        })
        .collect();
    let total = results.iter().map(|r| r.0).sum();
    let fails = results.into_iter().flat_map(|r| r.1).collect();
    within(Duration::from_secs(30), start.elapsed(), first_failures(fails, total))
}

fn criterion_3() -> Check {
    let mut fails = Vec::new();
    let mut total = 0;
    for n in [2, 3] {
        for q in all(DynkinType::A, n) {
            let c = Context::new(q.clone()).unwrap();
            let h = c.coxeter();
            let model = support::IntervalModel::new(&q, c.xi().get(1), 3 * h);
            let xs = c.window(-2 * h, 2 * h);
            let ys = c.window(-3 * h, 4 * h);
            for &x in &xs {
                total += 1;
                if c.dim_hom(x, x) != 1 {
                    fails.push(format!("{} dim_hom({x},{x}) != 1", q.label()));
                }
                let support = c.hom_support(x);
                if support.iter().any(|(y, _)| y.p < x.p || y.p > x.p + 2 * h) {
                    fails.push(format!("{} support of {x} is not bounded", q.label()));
                }
                for &y in &ys {
                    total += 1;
                    let d = c.dim_hom(x, y);
                    if d < 0 {
                        fails.push(format!("{} dim_hom({x},{y}) < 0", q.label()));
                    }
                    if d != c.dim_hom(y, c.serre(x)) {
                        fails.push(format!("{} Serre symmetry at {x},{y}", q.label()));
                    }
                    if d != model.dim_hom(&q, x, y) {
                        fails.push(format!("{} oracle mismatch at {x},{y}", q.label()));
                    }
                    if (y.p < x.p - 2 * h || y.p > x.p + 2 * h) && d != 0 {
                        fails.push(format!("{} dim_hom({x},{y}) far away", q.label()));
                    }
                }
            }
        }
    }
    first_failures(fails, total)
}

fn object_lemmas(q: &DynkinQuiver) -> (usize, Vec<String>) {
    let c = Context::new(q.clone()).unwrap();
    let mut fails = Vec::new();
    let mut total = 0;
    for x in c.window(-2, 2 * c.coxeter()) {
        total += 1;
        let a = c.hammock_object(x).tensor(&c.hammock_object(x.tau(-1)));
        let lhs = c.serre_tilt(&a, &[(x, 1)].into()).unwrap();
        let rhs =
            zq_arrows(q, x, Direction::Out).into_iter().fold(c.f_object(x), |acc, y| acc.tensor(&c.hammock_object(y)));
        if !c.is_iso(&lhs, &rhs) {
            fails.push(format!("{} mutation identity at {x}", q.label()));
        }
    }
    for beta in positive_roots(q) {
        let lead = c.leading_object(&beta);
        for i in beta.support() {
            total += 2;
            let ab = c.absorb_frontier(&beta, i).unwrap();
            let extras =
                ab.extra.iter().fold(Obj::unit(), |acc, (j, e)| acc.tensor(&c.hammock_object(c.x(*j)).pow(*e)));
            let lhs = lead.tensor(&c.hammock_object(c.x(i)));
            let rhs = c.k_object(i).pow(ab.epsilon).tensor(&extras).tensor(&c.leading_object(&ab.gamma));
            if !c.is_iso(&lhs, &rhs) {
                fails.push(format!("{} absorb β={beta} i={i}", q.label()));
            }
            let ok = match (c.tilt_leading(&beta, i), c.tilt_set(&beta, i)) {
                (Ok(f), Ok(z)) => c.serre_tilt(&lhs, &z).is_ok_and(|t| c.is_iso(&t, &c.factorization_object(&f))),
                _ => false,
            };
            if !ok {
                fails.push(format!("{} tilt β={beta} i={i}", q.label()));
            }
        }
    }
    (total, fails)
}

fn criterion_4() -> Check {
    let results: Vec<(usize, Vec<String>)> = object_quivers().par_iter().map(object_lemmas).collect();
    let total = results.iter().map(|r| r.0).sum();
    first_failures(results.into_iter().flat_map(|r| r.1).collect(), total)
}

fn criterion_5() -> Check {
    let results: Vec<(usize, Vec<String>)> = object_quivers()
        .par_iter()
        .map(|q| {
            let c = Context::new(q.clone()).unwrap();
            let orthant = Root::orthant(q.rank(), 12);
            let fails = orthant
                .iter()
                .filter(|b| c.omega(&c.leading_object(b)).ok().as_ref() != Some(*b))
                .map(|b| format!("{} β={b}", q.label()))
                .collect();
            (orthant.len(), fails)
        })
        .collect();
    let total = results.iter().map(|r| r.0).sum();
    first_failures(results.into_iter().flat_map(|r| r.1).collect(), total)
}

struct SweepOutcome {
    roots: usize,
    routes: Vec<String>,
    monomials: Vec<String>,
    complexes: Vec<String>,
    complex_checks: usize,
    choice_checks: usize,
}

fn chi(c: &Context, fc: &FractionComplex) -> Result<Laurent<KVar>, String> {
    c.euler_char(fc, Some(-1)).map_err(|e| e.to_string())
}

fn sweep_one(q: &DynkinQuiver) -> SweepOutcome {
    let c = Context::new(q.clone()).unwrap();
    let engine = QcharEngine::new(&c).unwrap();
    let roots = positive_roots(q);
    let mut out = SweepOutcome {
        roots: roots.len(),
        routes: vec![],
        monomials: vec![],
        complexes: vec![],
        complex_checks: 0,
        choice_checks: 0,
    };
    for r in engine.verify_all(&roots) {
        if !r.routes_equal || !r.errors.is_empty() {
            out.routes.push(format!("{} β={} {:?}", q.label(), r.beta, r.errors));
        }
        if !(r.highest_is_dominant && r.lowest_matches && r.positive && r.top_coefficient_one) {
            out.monomials.push(format!("{} β={}", q.label(), r.beta));
        }
    }
    for beta in &roots {
        out.complex_checks += 1;
        let fc = engine.builder().build(beta).unwrap();
        if !fc.num.verify_d_squared(q).passed() {
            out.complexes.push(format!("{} β={beta}: d²", q.label()));
        }
        if !c.degree_zero_matches(&fc, beta) {
            out.complexes.push(format!("{} β={beta}: degree 0", q.label()));
        }
        let reference = match chi(&c, &fc) {
            Ok(p) => p,
            Err(e) => {
                out.complexes.push(format!("{} β={beta}: {e}", q.label()));
                continue;
            }
        };
        let data = beta_combinatorics(q, c.xi(), beta).unwrap();
        if data.candidates.len() > 1 {
            for &i in &data.candidates {
                out.choice_checks += 1;
                let other = engine.builder().build_at(beta, i).map_err(|e| e.to_string()).and_then(|fc| chi(&c, &fc));
                if other.as_ref() != Ok(&reference) {
                    out.complexes.push(format!("{} β={beta}: choice {i}", q.label()));
                }
            }
        }
    }
    out
}

fn criterion_8() -> Check {
    let results: Vec<(usize, Vec<String>)> = sweep_quivers()
        .par_iter()
        .map(|q| {
            let roots: BTreeSet<Root> = positive_roots(q).into_iter().collect();
            let mut fails = Vec::new();
            match enumerate_cluster_variables(q) {
                Err(e) => fails.push(format!("{}: {e}", q.label())),
                Ok(t) => {
                    if t.len() != roots.len() + q.rank() {
                        fails.push(format!("{}: {} variables", q.label(), t.len()));
                    }
                    if !t.anomalies.is_empty() || t.positive.keys().cloned().collect::<BTreeSet<_>>() != roots {
                        fails.push(format!("{}: d-vectors {:?}", q.label(), t.anomalies));
                    }
                }
            }
            (1, fails)
        })
        .collect();
    let total = results.iter().map(|r| r.0).sum();
    first_failures(results.into_iter().flat_map(|r| r.1).collect(), total)
}

fn mono(pairs: &[(usize, i32, i32)]) -> Laurent<KVar> {
    Laurent::from(Monomial::from_pairs(pairs.iter().map(|&(i, p, e)| (KVar::Y(i, p), e))))
}

fn criterion_10() -> Check {
    // [DERIVED] ξ(1) = 1 in A_1; ξ = {1:1, 2:0} in A_2 with 1 → 2.
    let cases = [
        (DynkinQuiver::new(DynkinType::A, 1, &[]).unwrap(), "1", &mono(&[(1, -1, 1)]) + &mono(&[(1, 1, -1)])),
        (
            DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap(),
            "1,0",
            &mono(&[(1, -1, 1)]) + &mono(&[(2, 0, 1), (1, 1, -1)]),
        ),
        (
            DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap(),
            "1,1",
            &(&mono(&[(2, -2, 1)]) + &mono(&[(1, -1, 1), (2, 0, -1)])) + &mono(&[(1, 1, -1)]),
        ),
    ];
    let mut fails = Vec::new();
    for (q, beta, expected) in &cases {
        let c = Context::new(q.clone()).unwrap();
        let e = QcharEngine::new(&c).unwrap();
        let t: Target = beta.parse().unwrap();
        for (name, got) in
            [("euler", e.qchar_euler(&t)), ("cluster", e.qchar_cluster(&t)), ("recursion", e.qchar_recursion(&t))]
        {
            if got.as_ref() != Ok(expected) {
                fails.push(format!("{} β={beta} {name}", q.label()));
            }
        }
    }
    first_failures(fails, 3 * cases.len())
}

fn report(n: usize, title: &str, r: &Check, took: Duration) -> bool {
    let (verdict, detail) = match r {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {n:>2} {verdict} {title} [{:.1}s] {detail}", took.as_secs_f64());
    r.is_ok()
}

fn timed(f: impl FnOnce() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn main() {
    let mut ok = true;
    let (r, t) = timed(criterion_1);
    ok &= report(1, "figure reproduction", &r, t);
    let (r, t) = timed(criterion_2);
    ok &= report(2, "hammock identity", &r, t);
    let (r, t) = timed(criterion_3);
    ok &= report(3, "dim_hom oracle", &r, t);
    let (r, t) = timed(criterion_4);
    ok &= report(4, "object lemmas", &r, t);
    let (r, t) = timed(criterion_5);
    ok &= report(5, "omega round trip", &r, t);

    let start = Instant::now();
    let outcomes: Vec<SweepOutcome> = sweep_quivers().par_iter().map(sweep_one).collect();
    let took = start.elapsed();
    let roots: usize = outcomes.iter().map(|o| o.roots).sum();
    let collect = |f: fn(&SweepOutcome) -> &Vec<String>| outcomes.iter().flat_map(|o| f(o).clone()).collect::<Vec<_>>();
    let r6 = within(Duration::from_secs(300), took, first_failures(collect(|o| &o.routes), roots));
    ok &= report(6, "route equality", &r6, took);
    let r7 = first_failures(collect(|o| &o.monomials), roots);
    ok &= report(7, "monomial theorems", &r7, took);

    let (r, t) = timed(criterion_8);
    ok &= report(8, "cluster engine", &r, t);

    let complex_checks: usize = outcomes.iter().map(|o| o.complex_checks + o.choice_checks).sum();
    let choices: usize = outcomes.iter().map(|o| o.choice_checks).sum();
    let r9 = first_failures(collect(|o| &o.complexes), complex_checks)
        .map(|d| format!("{d}, {choices} alternative choices"));
    ok &= report(9, "complex structure", &r9, took);

    let (r, t) = timed(criterion_10);
    ok &= report(10, "golden values", &r, t);

    if !ok {
        std::process::exit(1);
    }
}
