//! Quasi-additive functions on ZQ.
//!
//! A [`QFun`] is a finite integer combination of hammock functions `h_x` and
//! delta functions `δ_x`. Values are obtained by knitting: `h_x` vanishes on
//! every section strictly left of the section `Q_x` through `x`, takes the
//! value 1 on `(j, ·) ∈ Q_x` iff `j ~> i`, and satisfies the mesh relation
//! `f(v) + f(τv) - Σ_{y→v} f(y) = [v = x]`.
//!
//! Hammock functions are invariant under translation by `τ`, so one knitting
//! table per quiver vertex suffices; tables grow on demand and are cached in
//! the [`Context`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::quiver::Vertex;
use crate::repetition::{section_through, zq_arrows, Direction, Section, ZVertex};

pub type DefectMap = BTreeMap<ZVertex, i64>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QFun {
    pub gens: BTreeMap<ZVertex, i64>,
    pub deltas: BTreeMap<ZVertex, i64>,
}

fn bump(map: &mut BTreeMap<ZVertex, i64>, x: ZVertex, c: i64) {
    if c == 0 {
        return;
    }
    let slot = map.entry(x).or_insert(0);
    *slot += c;
    if *slot == 0 {
        map.remove(&x);
    }
}

impl QFun {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn hammock(x: ZVertex) -> Self {
        let mut f = Self::zero();
        f.add_gen(x, 1);
        f
    }

    pub fn delta(x: ZVertex) -> Self {
        let mut f = Self::zero();
        f.add_delta(x, 1);
        f
    }

    pub fn add_gen(&mut self, x: ZVertex, c: i64) {
        bump(&mut self.gens, x, c);
    }

    pub fn add_delta(&mut self, x: ZVertex, c: i64) {
        bump(&mut self.deltas, x, c);
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty() && self.deltas.is_empty()
    }

    pub fn plus(&self, other: &QFun) -> QFun {
        let mut out = self.clone();
        for (x, c) in &other.gens {
            out.add_gen(*x, *c);
        }
        for (x, c) in &other.deltas {
            out.add_delta(*x, *c);
        }
        out
    }

    pub fn scaled(&self, k: i64) -> QFun {
        let mut out = QFun::zero();
        for (x, c) in &self.gens {
            out.add_gen(*x, c * k);
        }
        for (x, c) in &self.deltas {
            out.add_delta(*x, c * k);
        }
        out
    }

    pub fn minus(&self, other: &QFun) -> QFun {
        self.plus(&other.scaled(-1))
    }

    /// Smallest and largest `p` occurring in the presentation.
    pub fn p_range(&self) -> Option<(i32, i32)> {
        let ps = self.gens.keys().chain(self.deltas.keys()).map(|x| x.p);
        ps.fold(None, |acc, p| match acc {
            None => Some((p, p)),
            Some((lo, hi)) => Some((lo.min(p), hi.max(p))),
        })
    }
}

impl fmt::Display for QFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (x, c) in &self.gens {
            parts.push(format!("{c}*h{x}"));
        }
        for (x, c) in &self.deltas {
            parts.push(format!("{c}*d{x}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Values of a function on the vertices of a p-window, row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub p_min: i32,
    pub p_max: i32,
    pub rows: Vec<(Vertex, Vec<(i32, i64)>)>,
}

impl Grid {
    pub fn get(&self, y: ZVertex) -> Option<i64> {
        let (_, row) = self.rows.iter().find(|(i, _)| *i == y.i)?;
        row.iter().find(|(p, _)| *p == y.p).map(|(_, v)| *v)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|(_, r)| r.is_empty())
    }

    /// Tab separated layout with one row per vertex and one column per p.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("vertex");
        for p in self.p_min..=self.p_max {
            s.push_str(&format!("\t{p}"));
        }
        s.push('\n');
        for (i, row) in &self.rows {
            s.push_str(&i.to_string());
            for p in self.p_min..=self.p_max {
                s.push('\t');
                if let Some((_, v)) = row.iter().find(|(q, _)| *q == p) {
                    s.push_str(&v.to_string());
                }
            }
            s.push('\n');
        }
        s
    }
}

impl Context {
    /// Offsets of the section through `(i, 0)` and the order in which a level
    /// is knitted (targets of arrows before their sources).
    fn section_offsets(&self, i: Vertex) -> Section {
        section_through(self.quiver(), ZVertex::new(i, 0))
    }

    fn knit_order(&self) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = self.quiver().vertices().collect();
        order.sort_by_key(|&j| (self.xi().get(j), j));
        order
    }

    fn profile(&self, i: Vertex, levels: usize) -> Arc<Vec<Vec<i64>>> {
        if let Some(p) = self.profiles.read().expect("cache lock").get(&i) {
            if p.len() >= levels {
                return Arc::clone(p);
            }
        }
        let q = self.quiver();
        let n = q.rank();
        let mut table: Vec<Vec<i64>> =
            self.profiles.read().expect("cache lock").get(&i).map(|p| p.as_ref().clone()).unwrap_or_default();
        if table.is_empty() {
            let mut seed = vec![0i64; n + 1];
            for j in q.vertices() {
                seed[j] = i64::from(q.reaches(j, i));
            }
            table.push(seed);
        }
        let order = self.knit_order();
        let target = levels.max(table.len()).next_power_of_two();
        while table.len() < target {
            let prev = table.last().expect("seeded").clone();
            let mut cur = vec![0i64; n + 1];
            for &j in &order {
                let same: i64 = q.successors(j).iter().map(|&l| cur[l]).sum();
                let before: i64 = q.predecessors(j).iter().map(|&l| prev[l]).sum();
                cur[j] = same + before - prev[j];
            }
            table.push(cur);
        }
        let arc = Arc::new(table);
        self.profiles.write().expect("cache lock").insert(i, Arc::clone(&arc));
        arc
    }

    /// `h_x(y)`.
    pub fn hammock_value(&self, x: ZVertex, y: ZVertex) -> i64 {
        let offsets = self.section_offsets(x.i);
        let diff = y.p - (x.p + offsets.p(y.i));
        if diff < 0 || diff % 2 != 0 {
            return 0;
        }
        let k = (diff / 2) as usize;
        self.profile(x.i, k + 1)[k][y.i]
    }

    pub fn eval(&self, f: &QFun, y: ZVertex) -> i64 {
        let from_gens: i64 = f.gens.iter().map(|(x, c)| c * self.hammock_value(*x, y)).sum();
        from_gens + f.deltas.get(&y).copied().unwrap_or(0)
    }

    pub fn eval_window(&self, f: &QFun, p_min: i32, p_max: i32) -> Grid {
        let mut rows: Vec<(Vertex, Vec<(i32, i64)>)> = self.quiver().vertices().map(|i| (i, Vec::new())).collect();
        for y in self.window(p_min, p_max) {
            rows[y.i - 1].1.push((y.p, self.eval(f, y)));
        }
        Grid { p_min, p_max, rows }
    }

    /// The defect `f̃(v) = f(v) + f(τv) - Σ_{y→v} f(y)` from the presentation.
    pub fn defect(&self, f: &QFun) -> DefectMap {
        let mut d = DefectMap::new();
        for (x, c) in &f.gens {
            bump(&mut d, *x, *c);
        }
        for (z, c) in &f.deltas {
            bump(&mut d, *z, *c);
            bump(&mut d, z.tau(-1), *c);
            for y in zq_arrows(self.quiver(), *z, Direction::Out) {
                bump(&mut d, y, -c);
            }
        }
        d
    }

    /// The defect at a single vertex, recomputed from values.
    pub fn defect_from_values(&self, f: &QFun, v: ZVertex) -> i64 {
        let preds: i64 = zq_arrows(self.quiver(), v, Direction::In).iter().map(|y| self.eval(f, *y)).sum();
        self.eval(f, v) + self.eval(f, v.tau(1)) - preds
    }

    /// A section strictly left of every vertex occurring in `fs`.
    fn far_left_section(&self, fs: &[&QFun]) -> Section {
        let lo = fs.iter().filter_map(|f| f.p_range()).map(|(lo, _)| lo).min().unwrap_or(0);
        let n = self.rank() as i32;
        let mut p = lo - 2 * n - 4;
        if p.rem_euclid(2) != self.quiver().epsilon(1) {
            p -= 1;
        }
        section_through(self.quiver(), ZVertex::new(1, p))
    }

    pub fn qfun_equal(&self, f: &QFun, g: &QFun) -> bool {
        if self.defect(f) != self.defect(g) {
            return false;
        }
        let s = self.far_left_section(&[f, g]);
        let agree = s.vertices().all(|y| self.eval(f, y) == self.eval(g, y));
        agree
    }

    /// Whether `f ≼ g` along a chain of coverings removing the elements of
    /// `z` one at a time, each at a vertex of positive defect.
    pub fn preceq(&self, f: &QFun, g: &QFun, z: &BTreeMap<ZVertex, u32>, bound: usize) -> Result<bool> {
        let size: usize = z.values().map(|m| *m as usize).sum();
        if size > bound {
            return Err(Error::TooLarge { size, bound });
        }
        let mut expected = g.clone();
        for (x, m) in z {
            expected.add_delta(*x, -(*m as i64));
        }
        if !self.qfun_equal(f, &expected) {
            return Err(Error::PresentationMismatch(format!("{f} != {expected}")));
        }
        Ok(self.covering_chain(g, &mut z.clone()))
    }

    fn covering_chain(&self, g: &QFun, remaining: &mut BTreeMap<ZVertex, u32>) -> bool {
        if remaining.values().all(|m| *m == 0) {
            return true;
        }
        let d = self.defect(g);
        let keys: Vec<ZVertex> = remaining.iter().filter(|(_, m)| **m > 0).map(|(x, _)| *x).collect();
        for x in keys {
            if d.get(&x).copied().unwrap_or(0) <= 0 {
                continue;
            }
            *remaining.get_mut(&x).expect("present") -= 1;
            let mut next = g.clone();
            next.add_delta(x, -1);
            let ok = self.covering_chain(&next, remaining);
            *remaining.get_mut(&x).expect("present") += 1;
            if ok {
                return true;
            }
        }
        false
    }

    /// The function `y ↦ dim Hom(M_x, M_y)`: defect `δ_x + δ_{τ^{-1}Sx}`,
    /// vanishing left of `Q_x`.
    pub fn hom_fun(&self, x: ZVertex) -> QFun {
        let mut f = QFun::hammock(x);
        f.add_gen(self.serre(x).tau(-1), 1);
        f
    }

    pub fn dim_hom(&self, x: ZVertex, y: ZVertex) -> i64 {
        self.eval(&self.hom_fun(x), y)
    }

    /// Vertices `y` with `dim_hom(x, y) != 0`, with their dimensions.
    pub fn hom_support(&self, x: ZVertex) -> Vec<(ZVertex, i64)> {
        let n = self.rank() as i32;
        self.window(x.p - n - 1, x.p + self.coxeter() + n + 1)
            .into_iter()
            .map(|y| (y, self.dim_hom(x, y)))
            .filter(|(_, d)| *d != 0)
            .collect()
    }
}
