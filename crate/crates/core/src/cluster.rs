use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::quiver::{DynkinQuiver, Root, Vertex};
use itertools::Itertools;

/// Initial variables: `x_i` (mutable) and `X_i` (frozen).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CVar {
    X(Vertex),
    Frozen(Vertex),
}

impl fmt::Display for CVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CVar::X(i) => write!(f, "x_{i}"),
            CVar::Frozen(i) => write!(f, "X_{i}"),
        }
    }
}

pub type ClusterPoly = Laurent<CVar>;

/// A seed on the vertex set `I × {0, 1}`. Index `i - 1` is `(i, 0)` and
/// index `n + i - 1` is `(i, 1)`. `b[u][v]` counts arrows `u → v` minus
/// arrows `v → u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub n: usize,
    pub b: Vec<Vec<i64>>,
    pub cluster: Vec<ClusterPoly>,
}

impl Seed {
    pub fn initial(q: &DynkinQuiver) -> Self {
        let n = q.rank();
        let mut b = vec![vec![0i64; 2 * n]; 2 * n];
        let mut arrow = |u: usize, v: usize| {
            b[u][v] += 1;
            b[v][u] -= 1;
        };
        for i in q.vertices() {
            arrow(i - 1, n + i - 1);
        }
        for &(i, j) in q.arrows() {
            arrow(j - 1, i - 1);
            arrow(n + j - 1, n + i - 1);
            arrow(n + i - 1, j - 1);
        }
        let cluster =
            (1..=n).map(|i| Laurent::var(CVar::X(i))).chain((1..=n).map(|i| Laurent::var(CVar::Frozen(i)))).collect();
        Seed { n, b, cluster }
    }

    /// `(u, v)` pairs with `u → v`, listed once per arrow, as `((i, layer), (j, layer))`.
    pub fn arrows(&self) -> Vec<((Vertex, u8), (Vertex, u8))> {
        let label = |u: usize| if u < self.n { (u + 1, 0u8) } else { (u + 1 - self.n, 1u8) };
        let mut out = Vec::new();
        for u in 0..2 * self.n {
            for v in 0..2 * self.n {
                for _ in 0..self.b[u][v].max(0) {
                    out.push((label(u), label(v)));
                }
            }
        }
        out
    }

    /// Mutation at the mutable vertex `(k, 0)`.
    pub fn mutate(&self, k: Vertex) -> Result<Seed> {
        if k == 0 || k > self.n {
            return Err(Error::UnknownVertex(k));
        }
        let kk = k - 1;
        let size = 2 * self.n;
        let mut plus = Laurent::one();
        let mut minus = Laurent::one();
        for u in 0..size {
            let e = self.b[u][kk];
            if e > 0 {
                plus = &plus * &self.cluster[u].pow(e as u32);
            } else if e < 0 {
                minus = &minus * &self.cluster[u].pow((-e) as u32);
            }
        }
        let numerator = &plus + &minus;
        let fresh = numerator.div_exact(&self.cluster[kk])?;
        let old = &self.b;
        let b = (0..size)
            .map(|u| {
                (0..size)
                    .map(|v| {
                        if u == kk || v == kk {
                            -old[u][v]
                        } else {
                            let (a, c) = (old[u][kk], old[kk][v]);
                            old[u][v] + (a.abs() * c + a * c.abs()) / 2
                        }
                    })
                    .collect()
            })
            .collect();
        let mut cluster = self.cluster.clone();
        cluster[kk] = fresh;
        Ok(Seed { n: self.n, b, cluster })
    }

    fn key(&self) -> Vec<String> {
        self.cluster[..self.n].iter().map(|p| p.to_string()).sorted().collect()
    }
}

/// `d_i = max(0, -min exponent of x_i)`.
pub fn denominator_vector(p: &ClusterPoly, n: usize) -> Vec<i64> {
    (1..=n)
        .map(|i| {
            let lo = p.monomials().map(|m| m.exponent(&CVar::X(i))).min().unwrap_or(0);
            i64::from((-lo).max(0))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterTable {
    pub positive: BTreeMap<Root, ClusterPoly>,
    pub initial: BTreeMap<Vertex, ClusterPoly>,
    pub seeds: usize,
    pub mutations: usize,
    /// Denominator vectors that were not positive roots, or collided.
    pub anomalies: Vec<String>,
}

impl ClusterTable {
    pub fn len(&self) -> usize {
        self.positive.len() + self.initial.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, beta: &Root) -> Result<&ClusterPoly> {
        self.positive.get(beta).ok_or_else(|| Error::UnknownRoot(beta.to_string()))
    }
}

/// Breadth-first closure of the initial seed under mutation.
pub fn enumerate_cluster_variables(q: &DynkinQuiver) -> Result<ClusterTable> {
    let n = q.rank();
    let start = Seed::initial(q);
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut vars: BTreeMap<String, ClusterPoly> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.key());
    queue.push_back(start);
    let mut mutations = 0;
    while let Some(seed) = queue.pop_front() {
        for p in &seed.cluster[..n] {
            vars.entry(p.to_string()).or_insert_with(|| p.clone());
        }
        for k in 1..=n {
            let next = seed.mutate(k)?;
            mutations += 1;
            if seen.insert(next.key()) {
                queue.push_back(next);
            }
        }
    }
    let mut table = ClusterTable {
        positive: BTreeMap::new(),
        initial: BTreeMap::new(),
        seeds: seen.len(),
        mutations,
        anomalies: Vec::new(),
    };
    for p in vars.into_values() {
        if let Some(m) = p.as_monomial() {
            if let Some((CVar::X(i), 1)) = m.iter().next().map(|(v, e)| (*v, e)) {
                if m.iter().count() == 1 {
                    table.initial.insert(i, p.clone());
                    continue;
                }
            }
        }
        let d = denominator_vector(&p, n);
        let root = Root::from_coeffs(d.iter().map(|&v| v as u32).collect());
        if root.is_zero() || table.positive.insert(root.clone(), p).is_some() {
            table.anomalies.push(format!("denominator vector {root}"));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::DynkinType;

    #[test]
    fn a1_mutation() {
        let q = DynkinQuiver::new(DynkinType::A, 1, &[]).unwrap();
        let s = Seed::initial(&q);
        assert_eq!(s.arrows(), vec![((1, 0), (1, 1))]);
        let m = s.mutate(1).unwrap();
        let one = Laurent::<CVar>::one();
        let expected = (&Laurent::var(CVar::Frozen(1)) + &one).div_exact(&Laurent::var(CVar::X(1))).unwrap();
        assert_eq!(m.cluster[0], expected);
        assert_eq!(m.mutate(1).unwrap().cluster[0], s.cluster[0]);
        assert!(s.mutate(2).is_err());
    }
}
