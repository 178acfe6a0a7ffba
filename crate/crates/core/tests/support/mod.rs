//! Brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use qq_core::quiver::{DynkinQuiver, DynkinType, Root};
use qq_core::ZVertex;

/// Rank of an integer matrix by fraction-free Gaussian elimination.
fn rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&k| m[k][c] != 0) else { continue };
        m.swap(r, piv);
        for k in 0..rows {
            if k != r && m[k][c] != 0 {
                let (a, b) = (m[r][c], m[k][c]);
                let pivot = m[r].clone();
                for (x, y) in m[k].iter_mut().zip(&pivot) {
                    *x = *x * a - y * b;
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim Hom(M, N)` for thin representations with identity maps on every
/// arrow inside the support (interval modules in type A).
pub fn hom_thin(q: &DynkinQuiver, m: &[u32], n: &[u32]) -> usize {
    let both: Vec<usize> = q.vertices().filter(|&v| m[v - 1] > 0 && n[v - 1] > 0).collect();
    let idx: BTreeMap<usize, usize> = both.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let mut eqs = Vec::new();
    for &(s, t) in q.arrows() {
        if m[s - 1] == 0 || n[t - 1] == 0 {
            continue;
        }
        let mut row = vec![0i128; both.len()];
        if n[s - 1] > 0 {
            if let Some(&k) = idx.get(&s) {
                row[k] += 1;
            }
        }
        if m[t - 1] > 0 {
            if let Some(&k) = idx.get(&t) {
                row[k] -= 1;
            }
        }
        eqs.push(row);
    }
    both.len() - rank(eqs)
}

pub fn euler_form(q: &DynkinQuiver, a: &[u32], b: &[u32]) -> i64 {
    let diag: i64 = q.vertices().map(|v| a[v - 1] as i64 * b[v - 1] as i64).sum();
    let off: i64 = q.arrows().iter().map(|&(s, t)| a[s - 1] as i64 * b[t - 1] as i64).sum();
    diag - off
}

/// Indecomposables of D^b(rep Q) in type A, placed on ZQ: the projective
/// `P_i` sits at `(i, s_i)` on the section through `(1, p0)`, and the rest
/// is knitted with signed dimension vectors; the shift grows by one at each
/// sign change along a tau-orbit.
pub struct IntervalModel {
    pub objects: BTreeMap<ZVertex, (i32, Vec<u32>)>,
}

impl IntervalModel {
    pub fn new(q: &DynkinQuiver, p0: i32, levels: i32) -> Self {
        assert_eq!(q.kind(), DynkinType::A);
        let n = q.rank();
        let mut sec = BTreeMap::from([(1usize, p0)]);
        let mut stack = vec![1usize];
        while let Some(v) = stack.pop() {
            for &w in q.successors(v) {
                if !sec.contains_key(&w) {
                    sec.insert(w, sec[&v] - 1);
                    stack.push(w);
                }
            }
            for &w in q.predecessors(v) {
                if !sec.contains_key(&w) {
                    sec.insert(w, sec[&v] + 1);
                    stack.push(w);
                }
            }
        }
        let mut class: BTreeMap<ZVertex, Vec<i64>> = BTreeMap::new();
        for i in q.vertices() {
            let dim: Vec<i64> = q.vertices().map(|j| i64::from(q.reaches(i, j))).collect();
            class.insert(ZVertex::new(i, sec[&i]), dim);
        }
        let mut order: Vec<usize> = q.vertices().collect();
        order.sort_by_key(|&j| sec[&j]);
        let preds = |y: ZVertex| -> Vec<ZVertex> { q.neighbors(y.i).map(|j| ZVertex::new(j, y.p - 1)).collect() };
        let succs = |y: ZVertex| -> Vec<ZVertex> { q.neighbors(y.i).map(|j| ZVertex::new(j, y.p + 1)).collect() };
        for k in 1..=levels {
            for &j in &order {
                let v = ZVertex::new(j, sec[&j] + 2 * k);
                let mut c: Vec<i64> = vec![0; n];
                for y in preds(v) {
                    let cy = class.get(&y).cloned().expect("knitted in order");
                    c.iter_mut().zip(cy).for_each(|(a, b)| *a += b);
                }
                let ct = &class[&v.tau(1)];
                c.iter_mut().zip(ct).for_each(|(a, b)| *a -= b);
                class.insert(v, c);
            }
            for &j in order.iter().rev() {
                let v = ZVertex::new(j, sec[&j] - 2 * k);
                let w = v.tau(-1);
                let mut c: Vec<i64> = vec![0; n];
                for y in succs(v) {
                    let cy = class.get(&y).cloned().expect("knitted in order");
                    c.iter_mut().zip(cy).for_each(|(a, b)| *a += b);
                }
                let cw = &class[&w];
                c.iter_mut().zip(cw).for_each(|(a, b)| *a -= b);
                class.insert(v, c);
            }
        }
        let mut objects = BTreeMap::new();
        for i in q.vertices() {
            let mut shift = 0;
            let mut prev_pos = true;
            for k in 0..=levels {
                let v = ZVertex::new(i, sec[&i] + 2 * k);
                let c = &class[&v];
                let pos = c.iter().all(|a| *a >= 0);
                if pos != prev_pos {
                    shift += 1;
                }
                prev_pos = pos;
                objects.insert(v, (shift, c.iter().map(|a| a.unsigned_abs() as u32).collect()));
            }
            let mut shift = 0;
            let mut prev_pos = true;
            for k in 1..=levels {
                let v = ZVertex::new(i, sec[&i] - 2 * k);
                let c = &class[&v];
                let pos = c.iter().all(|a| *a >= 0);
                if pos != prev_pos {
                    shift -= 1;
                }
                prev_pos = pos;
                objects.insert(v, (shift, c.iter().map(|a| a.unsigned_abs() as u32).collect()));
            }
        }
        IntervalModel { objects }
    }

    /// `dim Hom_{D^b}(M_x, M_y)` from module Hom and Ext^1.
    pub fn dim_hom(&self, q: &DynkinQuiver, x: ZVertex, y: ZVertex) -> i64 {
        let (kx, mx) = &self.objects[&x];
        let (ky, my) = &self.objects[&y];
        let hom = hom_thin(q, mx, my) as i64;
        match ky - kx {
            0 => hom,
            1 => hom - euler_form(q, mx, my),
            _ => 0,
        }
    }
}

/// Positive roots as the vectors with Tits form 1 and bounded coefficients.
pub fn roots_by_tits_form(q: &DynkinQuiver, bound: u32) -> Vec<Root> {
    let n = q.rank();
    let mut out = Vec::new();
    let total = (bound + 1).pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let coeffs: Vec<u32> = (0..n)
            .map(|_| {
                let d = c % (bound + 1);
                c /= bound + 1;
                d
            })
            .collect();
        let r = Root::from_coeffs(coeffs);
        if q.cartan_pairing(&r, &r) == 2 {
            out.push(r);
        }
    }
    out.sort();
    out
}

pub fn every_test_quiver() -> Vec<DynkinQuiver> {
    let mut qs = Vec::new();
    for n in 1..=5 {
        qs.extend(DynkinQuiver::all_orientations(DynkinType::A, n).unwrap());
    }
    qs.extend(DynkinQuiver::all_orientations(DynkinType::D, 4).unwrap());
    qs
}
