//! Dynkin quivers, adapted height functions, positive roots and the index
//! sets attached to an element of the positive orthant.
//!
//! Vertices are labelled `1..=n`. Type D uses the chain `1 - 2 - ... - (n-2)`
//! with fork vertices `n-1` and `n` both attached to `n-2`. Type E uses the
//! chain `1 - ... - (n-1)` with vertex `n` attached to vertex 3.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use itertools::Itertools;

pub type Vertex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DynkinType {
    A,
    D,
    E,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DynkinType::A => "A",
            DynkinType::D => "D",
            DynkinType::E => "E",
        };
        write!(f, "{s}")
    }
}

impl FromStr for DynkinType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(DynkinType::A),
            "D" | "d" => Ok(DynkinType::D),
            "E" | "e" => Ok(DynkinType::E),
            other => Err(Error::Parse(format!("unknown Dynkin type {other:?}"))),
        }
    }
}

/// Undirected edges of the labelled Dynkin diagram, each as `(min, max)`.
pub fn dynkin_edges(kind: DynkinType, rank: usize) -> Result<Vec<(Vertex, Vertex)>> {
    let name = format!("{kind}{rank}");
    let chain = |len: usize| (1..len).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match kind {
        DynkinType::A if rank >= 1 => Ok(chain(rank)),
        DynkinType::D if rank >= 4 => {
            let mut e = chain(rank - 2);
            e.push((rank - 2, rank - 1));
            e.push((rank - 2, rank));
            Ok(e)
        }
        DynkinType::E if (6..=8).contains(&rank) => {
            let mut e = chain(rank - 1);
            e.push((3, rank));
            Ok(e)
        }
        _ => Err(Error::WrongShape(format!("{name} is not a Dynkin diagram"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynkinQuiver {
    kind: DynkinType,
    rank: usize,
    arrows: Vec<(Vertex, Vertex)>,
    succ: Vec<Vec<Vertex>>,
    pred: Vec<Vec<Vertex>>,
    reach: Vec<Vec<bool>>,
    colour: Vec<i32>,
}

impl DynkinQuiver {
    pub fn new(kind: DynkinType, rank: usize, arrows: &[(Vertex, Vertex)]) -> Result<Self> {
        let expected: BTreeSet<(Vertex, Vertex)> = dynkin_edges(kind, rank)?.into_iter().collect();
        let mut seen = BTreeSet::new();
        for &(s, t) in arrows {
            if s == 0 || t == 0 || s > rank || t > rank || s == t {
                return Err(Error::WrongShape(format!("{kind}{rank}: bad arrow {s}->{t}")));
            }
            let e = (s.min(t), s.max(t));
            if !seen.insert(e) {
                if expected.contains(&e) {
                    return Err(Error::Reorientation(e.0, e.1));
                }
                return Err(Error::WrongShape(format!("{kind}{rank}: repeated edge {}-{}", e.0, e.1)));
            }
        }
        if seen != expected {
            return Err(Error::WrongShape(format!("{kind}{rank}")));
        }
        let mut succ = vec![Vec::new(); rank + 1];
        let mut pred = vec![Vec::new(); rank + 1];
        for &(s, t) in arrows {
            succ[s].push(t);
            pred[t].push(s);
        }
        for v in succ.iter_mut().chain(pred.iter_mut()) {
            v.sort_unstable();
        }
        let mut reach = vec![vec![false; rank + 1]; rank + 1];
        for (i, row) in reach.iter_mut().enumerate().skip(1) {
            let mut queue = VecDeque::from([i]);
            while let Some(v) = queue.pop_front() {
                if !row[v] {
                    row[v] = true;
                    queue.extend(succ[v].iter().copied());
                }
            }
        }
        let mut colour = vec![-1i32; rank + 1];
        colour[1] = 1;
        let mut queue = VecDeque::from([1]);
        while let Some(v) = queue.pop_front() {
            for &w in succ[v].iter().chain(pred[v].iter()) {
                if colour[w] < 0 {
                    colour[w] = 1 - colour[v];
                    queue.push_back(w);
                }
            }
        }
        let mut arrows = arrows.to_vec();
        arrows.sort_unstable();
        Ok(DynkinQuiver { kind, rank, arrows, succ, pred, reach, colour })
    }

    /// Every orientation of the labelled diagram, in a fixed order.
    pub fn all_orientations(kind: DynkinType, rank: usize) -> Result<Vec<Self>> {
        let edges = dynkin_edges(kind, rank)?;
        let m = edges.len();
        (0u64..(1 << m)).map(|mask| Self::from_mask(kind, rank, &edges, mask)).collect()
    }

    /// The orientation where edge `k` points from the larger label to the
    /// smaller one iff bit `k` of `mask` is set.
    pub fn from_mask(kind: DynkinType, rank: usize, edges: &[(Vertex, Vertex)], mask: u64) -> Result<Self> {
        let arrows: Vec<_> =
            edges.iter().enumerate().map(|(k, &(a, b))| if mask >> k & 1 == 1 { (b, a) } else { (a, b) }).collect();
        Self::new(kind, rank, &arrows)
    }

    pub fn kind(&self) -> DynkinType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.rank
    }

    pub fn arrows(&self) -> &[(Vertex, Vertex)] {
        &self.arrows
    }

    pub fn successors(&self, i: Vertex) -> &[Vertex] {
        &self.succ[i]
    }

    pub fn predecessors(&self, i: Vertex) -> &[Vertex] {
        &self.pred[i]
    }

    pub fn neighbors(&self, i: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.succ[i].iter().chain(self.pred[i].iter()).copied()
    }

    pub fn has_arrow(&self, s: Vertex, t: Vertex) -> bool {
        self.succ[s].contains(&t)
    }

    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.has_arrow(a, b) || self.has_arrow(b, a)
    }

    /// Whether there is an oriented path `i ~> j` (the trivial path included).
    pub fn reaches(&self, i: Vertex, j: Vertex) -> bool {
        self.reach[i][j]
    }

    pub fn sinks(&self) -> Vec<Vertex> {
        self.vertices().filter(|&i| self.succ[i].is_empty()).collect()
    }

    pub fn sources(&self) -> Vec<Vertex> {
        self.vertices().filter(|&i| self.pred[i].is_empty()).collect()
    }

    /// The fixed proper 2-colouring with `epsilon(1) = 1`.
    pub fn epsilon(&self, i: Vertex) -> i32 {
        self.colour[i]
    }

    pub fn coxeter_number(&self) -> i32 {
        let n = self.rank as i32;
        match (self.kind, self.rank) {
            (DynkinType::A, _) => n + 1,
            (DynkinType::D, _) => 2 * n - 2,
            (DynkinType::E, 6) => 12,
            (DynkinType::E, 7) => 18,
            _ => 30,
        }
    }

    /// The diagram automorphism induced by `-w0`.
    pub fn nu(&self, i: Vertex) -> Vertex {
        let n = self.rank;
        match self.kind {
            DynkinType::A => n + 1 - i,
            DynkinType::D if n % 2 == 1 && i >= n - 1 => 2 * n - 1 - i,
            DynkinType::E if n == 6 => match i {
                1 => 5,
                2 => 4,
                4 => 2,
                5 => 1,
                other => other,
            },
            _ => i,
        }
    }

    /// Paths `i ~> j` that stay inside `support`.
    pub fn reaches_within(&self, i: Vertex, j: Vertex, support: &BTreeSet<Vertex>) -> bool {
        if !support.contains(&i) || !support.contains(&j) {
            return false;
        }
        let mut stack = vec![i];
        let mut seen = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if v == j {
                return true;
            }
            if seen.insert(v) {
                stack.extend(self.succ[v].iter().filter(|w| support.contains(w)));
            }
        }
        false
    }

    /// Symmetric Euler form of the underlying graph, `(a, b)`.
    pub fn cartan_pairing(&self, a: &Root, b: &Root) -> i64 {
        let mut s = 0i64;
        for i in self.vertices() {
            s += 2 * a.get(i) as i64 * b.get(i) as i64;
        }
        for &(x, y) in &self.arrows {
            s -= a.get(x) as i64 * b.get(y) as i64 + a.get(y) as i64 * b.get(x) as i64;
        }
        s
    }

    pub fn label(&self) -> String {
        format!("{}{}[{}]", self.kind, self.rank, self.arrows.iter().map(|(s, t)| format!("{s}>{t}")).join(","))
    }
}

/// An element of the positive orthant of the root lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Root(Vec<u32>);

impl Root {
    pub fn zero(rank: usize) -> Self {
        Root(vec![0; rank])
    }

    pub fn simple(rank: usize, i: Vertex) -> Self {
        let mut r = Self::zero(rank);
        r.0[i - 1] = 1;
        r
    }

    pub fn from_coeffs(coeffs: Vec<u32>) -> Self {
        Root(coeffs)
    }

    pub fn from_sum<I: IntoIterator<Item = Vertex>>(rank: usize, vertices: I) -> Self {
        let mut r = Self::zero(rank);
        for v in vertices {
            r.0[v - 1] += 1;
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: Vertex) -> u32 {
        self.0[i - 1]
    }

    pub fn set(&mut self, i: Vertex, value: u32) {
        self.0[i - 1] = value;
    }

    pub fn height(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| *a == 0)
    }

    pub fn support(&self) -> BTreeSet<Vertex> {
        (1..=self.rank()).filter(|&i| self.get(i) > 0).collect()
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Root) -> Option<Root> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Root)
    }

    /// Every element of the positive orthant with height at most `max_height`.
    pub fn orthant(rank: usize, max_height: u32) -> Vec<Root> {
        let mut out = vec![Root::zero(rank)];
        for i in 1..=rank {
            let mut next = Vec::new();
            for r in &out {
                for a in 0..=max_height - r.height() {
                    let mut s = r.clone();
                    s.set(i, a);
                    next.push(s);
                }
            }
            out = next;
        }
        out.sort_by(|a, b| (a.height(), &a.0).cmp(&(b.height(), &b.0)));
        out
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

impl FromStr for Root {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(Root)
    }
}

/// An adapted height function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Height {
    xi: Vec<i32>,
}

impl Height {
    pub fn get(&self, i: Vertex) -> i32 {
        self.xi[i - 1]
    }

    pub fn values(&self) -> &[i32] {
        &self.xi
    }

    pub fn min(&self) -> i32 {
        self.xi.iter().copied().min().unwrap_or(0)
    }
}

/// Propagate `xi(j) = xi(i) - 1` along arrows from the anchor, which
/// defaults to `(1, 1)`.
pub fn default_height(q: &DynkinQuiver, anchor: Option<(Vertex, i32)>) -> Result<Height> {
    let (v0, val) = anchor.unwrap_or((1, 1));
    if v0 == 0 || v0 > q.rank() {
        return Err(Error::UnknownVertex(v0));
    }
    if val.rem_euclid(2) != q.epsilon(v0) {
        return Err(Error::ParityViolation { vertex: v0, value: val });
    }
    let mut xi: Vec<Option<i32>> = vec![None; q.rank() + 1];
    xi[v0] = Some(val);
    let mut queue = VecDeque::from([v0]);
    while let Some(v) = queue.pop_front() {
        let here = xi[v].expect("visited");
        for &w in q.successors(v) {
            if xi[w].is_none() {
                xi[w] = Some(here - 1);
                queue.push_back(w);
            }
        }
        for &w in q.predecessors(v) {
            if xi[w].is_none() {
                xi[w] = Some(here + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(Height { xi: xi[1..].iter().map(|x| x.expect("connected")).collect() })
}

/// Positive roots by closing the simple roots under simple reflections.
pub fn positive_roots(q: &DynkinQuiver) -> Vec<Root> {
    let n = q.rank();
    let mut found: BTreeSet<Root> = q.vertices().map(|i| Root::simple(n, i)).collect();
    let mut queue: VecDeque<Root> = found.iter().cloned().collect();
    while let Some(r) = queue.pop_front() {
        for i in q.vertices() {
            let pairing = q.cartan_pairing(&r, &Root::simple(n, i));
            let ai = r.get(i) as i64 - pairing;
            if ai < 0 {
                continue;
            }
            let mut s = r.clone();
            s.set(i, ai as u32);
            if !s.is_zero() && found.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    let mut roots: Vec<Root> = found.into_iter().collect();
    roots.sort_by(|a, b| (a.height(), a.coeffs()).cmp(&(b.height(), b.coeffs())));
    roots
}

/// Index sets attached to `beta` (see the module docs of `complexes`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaData {
    pub beta: Root,
    pub support: BTreeSet<Vertex>,
    pub out: BTreeMap<Vertex, BTreeSet<Vertex>>,
    pub inn: BTreeMap<Vertex, BTreeSet<Vertex>>,
    pub dim_p: BTreeMap<Vertex, Root>,
    pub dim_i: BTreeMap<Vertex, Root>,
    pub r: BTreeMap<Vertex, i32>,
    pub r_beta: BTreeMap<Vertex, i32>,
    pub minimal: BTreeSet<Vertex>,
    pub candidates: BTreeSet<Vertex>,
}

impl BetaData {
    pub fn pick(&self) -> Vertex {
        *self.candidates.iter().next().expect("nonzero root")
    }
}

/// `r_i`: the sum of `xi(i) - xi(j)` over sinks `j` of `Q` reachable from `i`.
pub fn r_values(q: &DynkinQuiver, xi: &Height) -> BTreeMap<Vertex, i32> {
    let sinks = q.sinks();
    q.vertices()
        .map(|i| {
            let r = sinks.iter().filter(|&&j| q.reaches(i, j)).map(|&j| xi.get(i) - xi.get(j)).sum();
            (i, r)
        })
        .collect()
}

pub fn beta_combinatorics(q: &DynkinQuiver, xi: &Height, beta: &Root) -> Result<BetaData> {
    if beta.rank() != q.rank() {
        return Err(Error::RankMismatch { expected: q.rank(), found: beta.rank() });
    }
    let support = beta.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let n = q.rank();
    let mut out = BTreeMap::new();
    let mut inn = BTreeMap::new();
    let mut dim_p = BTreeMap::new();
    let mut dim_i = BTreeMap::new();
    let mut r_beta = BTreeMap::new();
    for &i in &support {
        let o: BTreeSet<Vertex> = support.iter().copied().filter(|&j| q.reaches_within(i, j, &support)).collect();
        let n_in: BTreeSet<Vertex> = support.iter().copied().filter(|&j| q.reaches_within(j, i, &support)).collect();
        dim_p.insert(i, Root::from_sum(n, o.iter().copied()));
        dim_i.insert(i, Root::from_sum(n, n_in.iter().copied()));
        r_beta.insert(i, o.iter().map(|&j| xi.get(i) - xi.get(j)).sum());
        out.insert(i, o);
        inn.insert(i, n_in);
    }
    let amin = support.iter().map(|&i| beta.get(i)).min().expect("nonempty");
    let minimal: BTreeSet<Vertex> = support.iter().copied().filter(|&i| beta.get(i) == amin).collect();
    let rmin = minimal.iter().map(|i| r_beta[i]).min().expect("nonempty");
    let candidates = minimal.iter().copied().filter(|i| r_beta[i] == rmin).collect();
    Ok(BetaData {
        beta: beta.clone(),
        support,
        out,
        inn,
        dim_p,
        dim_i,
        r: r_values(q, xi),
        r_beta,
        minimal,
        candidates,
    })
}
