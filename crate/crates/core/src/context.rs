use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::quiver::{default_height, DynkinQuiver, Height, Vertex};
use crate::repetition::{SerreData, ZVertex};

/// Hammock support of a vertex, with `p` stored relative to the vertex.
type HammockOffsets = Vec<(ZVertex, u32)>;

/// A Dynkin quiver together with its height function and the Serre data of
/// its derived category. Knitting tables are cached here; the caches never
/// change observable results.
#[derive(Debug)]
pub struct Context {
    quiver: DynkinQuiver,
    xi: Height,
    serre: SerreData,
    pub(crate) profiles: RwLock<BTreeMap<Vertex, Arc<Vec<Vec<i64>>>>>,
    pub(crate) hammocks: RwLock<BTreeMap<Vertex, Arc<HammockOffsets>>>,
}

impl Clone for Context {
    fn clone(&self) -> Self {
        Context::with_serre(self.quiver.clone(), self.xi.clone(), self.serre.clone())
    }
}

impl Context {
    pub fn new(quiver: DynkinQuiver) -> Result<Self> {
        let xi = default_height(&quiver, None)?;
        Ok(Self::with_height(quiver, xi))
    }

    pub fn with_height(quiver: DynkinQuiver, xi: Height) -> Self {
        let serre = SerreData::standard(&quiver);
        Self::with_serre(quiver, xi, serre)
    }

    pub fn with_serre(quiver: DynkinQuiver, xi: Height, serre: SerreData) -> Self {
        Context { quiver, xi, serre, profiles: RwLock::new(BTreeMap::new()), hammocks: RwLock::new(BTreeMap::new()) }
    }

    pub fn quiver(&self) -> &DynkinQuiver {
        &self.quiver
    }

    pub fn rank(&self) -> usize {
        self.quiver.rank()
    }

    pub fn xi(&self) -> &Height {
        &self.xi
    }

    pub fn serre_data(&self) -> &SerreData {
        &self.serre
    }

    pub fn coxeter(&self) -> i32 {
        self.serre.h
    }

    /// The frontier vertex `x_i = (i, xi(i))`.
    pub fn x(&self, i: Vertex) -> ZVertex {
        ZVertex::new(i, self.xi.get(i))
    }

    /// `tau x_i = (i, xi(i) - 2)`.
    pub fn tx(&self, i: Vertex) -> ZVertex {
        ZVertex::new(i, self.xi.get(i) - 2)
    }

    pub fn sigma(&self, x: ZVertex) -> ZVertex {
        self.serre.sigma(x)
    }

    pub fn serre(&self, x: ZVertex) -> ZVertex {
        self.serre.serre(x)
    }

    /// Vertices of ZQ with `p` in the inclusive range, ordered by `(p, i)`.
    pub fn window(&self, p_min: i32, p_max: i32) -> Vec<ZVertex> {
        let mut out = Vec::new();
        for p in p_min..=p_max {
            for i in self.quiver.vertices() {
                if p.rem_euclid(2) == self.quiver.epsilon(i) {
                    out.push(ZVertex::new(i, p));
                }
            }
        }
        out
    }
}
