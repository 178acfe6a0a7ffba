//! The repetition quiver ZQ.
//!
//! Vertices are pairs `(i, p)` with `p ≡ epsilon(i) (mod 2)`. For every
//! arrow `s -> t` of `Q` there are arrows `(t, p) -> (s, p + 1)` and
//! `(s, p) -> (t, p + 1)`, so the out-neighbours of `(i, p)` are the
//! `(j, p + 1)` with `j` adjacent to `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{DynkinQuiver, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZVertex {
    pub i: Vertex,
    pub p: i32,
}

impl ZVertex {
    pub const fn new(i: Vertex, p: i32) -> Self {
        ZVertex { i, p }
    }

    /// `tau^k`.
    pub fn tau(self, k: i32) -> Self {
        ZVertex::new(self.i, self.p - 2 * k)
    }

    pub fn key(&self) -> String {
        format!("{},{}", self.i, self.p)
    }
}

impl fmt::Display for ZVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.p)
    }
}

impl FromStr for ZVertex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = t.split_once(',').ok_or_else(|| Error::Parse(format!("vertex {s:?}")))?;
        let i = a.trim().parse().map_err(|_| Error::Parse(format!("vertex {s:?}")))?;
        let p = b.trim().parse().map_err(|_| Error::Parse(format!("vertex {s:?}")))?;
        Ok(ZVertex::new(i, p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

pub fn is_valid(q: &DynkinQuiver, x: ZVertex) -> bool {
    (1..=q.rank()).contains(&x.i) && x.p.rem_euclid(2) == q.epsilon(x.i)
}

pub fn zq_arrows(q: &DynkinQuiver, x: ZVertex, direction: Direction) -> Vec<ZVertex> {
    let dp = match direction {
        Direction::Out => 1,
        Direction::In => -1,
    };
    let mut v: Vec<ZVertex> = q.neighbors(x.i).map(|j| ZVertex::new(j, x.p + dp)).collect();
    v.sort();
    v
}

/// A copy of `Q` inside ZQ, stored as the p-value of each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    p: BTreeMap<Vertex, i32>,
}

impl Section {
    pub fn p(&self, i: Vertex) -> i32 {
        self.p[&i]
    }

    pub fn vertices(&self) -> impl Iterator<Item = ZVertex> + '_ {
        self.p.iter().map(|(i, p)| ZVertex::new(*i, *p))
    }

    pub fn as_map(&self) -> &BTreeMap<Vertex, i32> {
        &self.p
    }

    /// Signed number of tau^{-1} steps from the section to `y`; negative
    /// values lie strictly to the left.
    pub fn level(&self, y: ZVertex) -> i32 {
        (y.p - self.p(y.i)).div_euclid(2)
    }
}

pub fn section_through(q: &DynkinQuiver, x: ZVertex) -> Section {
    let mut p = BTreeMap::from([(x.i, x.p)]);
    let mut stack = vec![x.i];
    while let Some(v) = stack.pop() {
        let here = p[&v];
        for &w in q.successors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = p.entry(w) {
                e.insert(here - 1);
                stack.push(w);
            }
        }
        for &w in q.predecessors(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = p.entry(w) {
                e.insert(here + 1);
                stack.push(w);
            }
        }
    }
    Section { p }
}

/// Coxeter number and Nakayama permutation, overridable so that a wrong
/// table can be injected as a negative control.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreData {
    pub h: i32,
    pub nu: Vec<Vertex>,
}

impl SerreData {
    pub fn standard(q: &DynkinQuiver) -> Self {
        SerreData { h: q.coxeter_number(), nu: std::iter::once(0).chain(q.vertices().map(|i| q.nu(i))).collect() }
    }

    pub fn sigma(&self, x: ZVertex) -> ZVertex {
        ZVertex::new(self.nu[x.i], x.p + self.h)
    }

    pub fn serre(&self, x: ZVertex) -> ZVertex {
        ZVertex::new(self.nu[x.i], x.p + self.h - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::DynkinType;

    #[test]
    fn arrows_of_zq() {
        let a2 = DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap();
        assert_eq!(zq_arrows(&a2, ZVertex::new(2, 0), Direction::Out), vec![ZVertex::new(1, 1)]);
        let a1 = DynkinQuiver::new(DynkinType::A, 1, &[]).unwrap();
        assert!(zq_arrows(&a1, ZVertex::new(1, 5), Direction::Out).is_empty());
        let a4 = DynkinQuiver::new(DynkinType::A, 4, &[(1, 2), (2, 3), (4, 3)]).unwrap();
        assert_eq!(zq_arrows(&a4, ZVertex::new(3, -1), Direction::Out), vec![ZVertex::new(2, 0), ZVertex::new(4, 0)]);
    }

    #[test]
    fn tau_moves_two_columns() {
        assert_eq!(ZVertex::new(1, 3).tau(1), ZVertex::new(1, 1));
        assert_eq!(ZVertex::new(2, 0).tau(-1), ZVertex::new(2, 2));
        assert_eq!(ZVertex::new(3, -1).tau(2), ZVertex::new(3, -5));
    }

    #[test]
    fn sections() {
        let a2 = DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap();
        let s = section_through(&a2, ZVertex::new(1, 1));
        assert_eq!(s.as_map(), &BTreeMap::from([(1, 1), (2, 0)]));
        let a4 = DynkinQuiver::new(DynkinType::A, 4, &[(1, 2), (2, 3), (4, 3)]).unwrap();
        let s = section_through(&a4, ZVertex::new(3, -1));
        assert_eq!(s.as_map(), &BTreeMap::from([(1, 1), (2, 0), (3, -1), (4, 0)]));
    }

    #[test]
    fn serre_tables() {
        let a1 = DynkinQuiver::new(DynkinType::A, 1, &[]).unwrap();
        assert_eq!(SerreData::standard(&a1).serre(ZVertex::new(1, 7)), ZVertex::new(1, 7));
        let a2 = DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap();
        assert_eq!(SerreData::standard(&a2).serre(ZVertex::new(1, 1)), ZVertex::new(2, 2));
        let d4 = DynkinQuiver::new(DynkinType::D, 4, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(SerreData::standard(&d4).sigma(ZVertex::new(1, 1)), ZVertex::new(1, 7));
    }

    #[test]
    fn sigma_and_serre_preserve_parity() {
        for kind in [DynkinType::A, DynkinType::D, DynkinType::E] {
            for n in 1..=8 {
                let Ok(qs) = DynkinQuiver::all_orientations(kind, n) else { continue };
                let q = &qs[0];
                let sd = SerreData::standard(q);
                for i in q.vertices() {
                    let x = ZVertex::new(i, q.epsilon(i));
                    assert!(is_valid(q, sd.sigma(x)) && is_valid(q, sd.serre(x)));
                    assert_eq!(sd.sigma(x.tau(1)), sd.sigma(x).tau(1));
                }
            }
        }
    }
}
