//! Objects `(X, h)`: a finite multiset of vertices of ZQ together with a
//! quasi-additive function, plus a tracked Grothendieck class.
//!
//! Classes are attached by constructors only. Hammock objects `Y(i,p)` carry
//! `Y[i,p]`, the frozen-pair objects `F(τx_i)` carry `f_i`, tensor products
//! multiply, and Serre tiltings forget the class. Tilted objects regain a
//! class only through the factorizations [`Context::tilt_leading`] and
//! [`Context::factor_dominant`].
//!
//! Dominance is read off the defect: an object is dominant when its defect
//! is nonnegative and supported on the frontier pairs `{τx_i, x_i}`. With
//! `c_i = h̃(τx_i)` and `d_i = h̃(x_i)`, the recursion
//! `a_i = max(0, c_i - d_i + Σ_{i→j} a_j)` (processed by increasing `r_i`)
//! defines `ω`.
//!
//! # Clipping
//!
//! When the maximum in the recursion clips at `k`, the object carries more
//! `Y(x_k)` factors than the leading object of its `ω`. The factorizations
//! here record those factors in `h_exp`, so that
//! `a ≅ K^{k_exp} ⊗ Y(x)^{h_exp} ⊗ Y[ω(a)]` holds for every dominant `a`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::hammock::QFun;
use crate::laurent::Monomial;
use crate::quiver::{beta_combinatorics, r_values, Root, Vertex};
use crate::repetition::ZVertex;

pub type Multiset = BTreeMap<ZVertex, u32>;
pub type Exps = BTreeMap<Vertex, u32>;

/// Variables of the Grothendieck ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KVar {
    /// The class of `Y(i, p)`.
    Y(Vertex, i32),
    /// The class of `F(τx_i)`.
    F(Vertex),
    /// The class of `F(i, p)` away from the frontier.
    FAt(Vertex, i32),
}

impl KVar {
    /// Key used in JSON output: `Y:i:p`, `f:i` or `F:i:p`.
    pub fn key(&self) -> String {
        match self {
            KVar::Y(i, p) => format!("Y:{i}:{p}"),
            KVar::F(i) => format!("f:{i}"),
            KVar::FAt(i, p) => format!("F:{i}:{p}"),
        }
    }

    pub fn parse_key(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<i64>().map_err(|_| Error::Parse(format!("variable {s:?}")));
        match parts.as_slice() {
            ["Y", i, p] => Ok(KVar::Y(num(i)? as Vertex, num(p)? as i32)),
            ["f", i] => Ok(KVar::F(num(i)? as Vertex)),
            ["F", i, p] => Ok(KVar::FAt(num(i)? as Vertex, num(p)? as i32)),
            _ => Err(Error::Parse(format!("variable {s:?}"))),
        }
    }
}

impl fmt::Display for KVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KVar::Y(i, p) => write!(f, "Y[{i},{p}]"),
            KVar::F(i) => write!(f, "f_{i}"),
            KVar::FAt(i, p) => write!(f, "F[{i},{p}]"),
        }
    }
}

pub type KClass = Monomial<KVar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obj {
    pub multiset: Multiset,
    pub fun: QFun,
    pub kclass: Option<KClass>,
}

impl Obj {
    pub fn unit() -> Self {
        Obj { multiset: Multiset::new(), fun: QFun::zero(), kclass: Some(KClass::one()) }
    }

    pub fn size(&self) -> usize {
        self.multiset.values().map(|m| *m as usize).sum()
    }

    pub fn contains(&self, x: ZVertex) -> bool {
        self.multiset.get(&x).copied().unwrap_or(0) > 0
    }

    pub fn tensor(&self, other: &Obj) -> Obj {
        let mut multiset = self.multiset.clone();
        for (x, m) in &other.multiset {
            *multiset.entry(*x).or_insert(0) += m;
        }
        let kclass = match (&self.kclass, &other.kclass) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        Obj { multiset, fun: self.fun.plus(&other.fun), kclass }
    }

    pub fn pow(&self, k: u32) -> Obj {
        (0..k).fold(Obj::unit(), |acc, _| acc.tensor(self))
    }

    pub fn with_class(mut self, kclass: Option<KClass>) -> Obj {
        self.kclass = kclass;
        self
    }
}

/// `⊗ F(τx_j)^{f_list} ⊗ K_j^{k_exp} ⊗ Y(x_l)^{h_exp} ⊗ Y[remainder]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub f_list: Exps,
    pub k_exp: Exps,
    pub h_exp: Exps,
    pub remainder: Root,
}

/// Result of absorbing `Y(x_i)` into `Y[β]`:
/// `Y[β] ⊗ Y(x_i) ≅ K_i^{ε} ⊗ Y(x)^{extra} ⊗ Y[γ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Absorption {
    pub epsilon: u32,
    pub gamma: Root,
    pub extra: Exps,
}

fn add_exp(e: &mut Exps, i: Vertex, k: u32) {
    if k > 0 {
        *e.entry(i).or_insert(0) += k;
    }
}

impl Context {
    /// `H(x)`: `dim_hom(x, y)` copies of each `y`.
    pub fn hammock_multiset(&self, x: ZVertex) -> Multiset {
        let cached = self.hammocks.read().expect("cache lock").get(&x.i).cloned();
        let offsets = match cached {
            Some(o) => o,
            None => {
                let base = ZVertex::new(x.i, self.quiver().epsilon(x.i));
                let o: Vec<(ZVertex, u32)> = self
                    .hom_support(base)
                    .into_iter()
                    .map(|(y, d)| (ZVertex::new(y.i, y.p - base.p), d as u32))
                    .collect();
                let o = Arc::new(o);
                self.hammocks.write().expect("cache lock").insert(x.i, Arc::clone(&o));
                o
            }
        };
        offsets.iter().map(|(y, m)| (ZVertex::new(y.i, y.p + x.p), *m)).collect()
    }

    pub fn hammock_object(&self, x: ZVertex) -> Obj {
        Obj { multiset: self.hammock_multiset(x), fun: QFun::hammock(x), kclass: Some(KClass::var(KVar::Y(x.i, x.p))) }
    }

    /// `F(x) = ({Sx, Σx}, 0)`.
    pub fn f_object(&self, x: ZVertex) -> Obj {
        let mut multiset = Multiset::new();
        *multiset.entry(self.serre(x)).or_insert(0) += 1;
        *multiset.entry(self.sigma(x)).or_insert(0) += 1;
        let var = if x == self.tx(x.i) { KVar::F(x.i) } else { KVar::FAt(x.i, x.p) };
        Obj { multiset, fun: QFun::zero(), kclass: Some(KClass::var(var)) }
    }

    /// `K_i = Y(τx_i) ⊗ Y(x_i)`.
    pub fn k_object(&self, i: Vertex) -> Obj {
        self.hammock_object(self.tx(i)).tensor(&self.hammock_object(self.x(i)))
    }

    pub fn serre_tilt(&self, a: &Obj, z: &Multiset) -> Result<Obj> {
        let mut out = a.clone();
        for (x, m) in z {
            if *m == 0 {
                continue;
            }
            let have = out.multiset.get(x).copied().unwrap_or(0);
            if have < *m {
                return Err(Error::NotContained(x.to_string()));
            }
            if have == *m {
                out.multiset.remove(x);
            } else {
                out.multiset.insert(*x, have - m);
            }
            *out.multiset.entry(self.serre(*x)).or_insert(0) += m;
            out.fun.add_delta(*x, -(*m as i64));
        }
        if z.values().any(|m| *m > 0) {
            out.kclass = None;
        }
        Ok(out)
    }

    /// `μ_{τx_i}`: the Serre tilting at one copy of `τx_i`.
    pub fn mu(&self, a: &Obj, i: Vertex) -> Result<Obj> {
        self.serre_tilt(a, &Multiset::from([(self.tx(i), 1)]))
    }

    pub fn is_iso(&self, a: &Obj, b: &Obj) -> bool {
        a.multiset == b.multiset && self.qfun_equal(&a.fun, &b.fun)
    }

    /// `(c, d)` with `c_i = h̃(τx_i)`, `d_i = h̃(x_i)` for a dominant object.
    pub fn dominant_exponents(&self, a: &Obj) -> Result<(Exps, Exps)> {
        let defect = self.defect(&a.fun);
        let mut c = Exps::new();
        let mut d = Exps::new();
        let mut seen = 0usize;
        for i in self.quiver().vertices() {
            for (x, target) in [(self.tx(i), &mut c), (self.x(i), &mut d)] {
                let v = defect.get(&x).copied().unwrap_or(0);
                if v < 0 {
                    return Err(Error::NotDominant);
                }
                if v > 0 {
                    seen += 1;
                    target.insert(i, v as u32);
                }
            }
        }
        if seen != defect.len() {
            return Err(Error::NotDominant);
        }
        Ok((c, d))
    }

    /// `ω` from frontier exponents.
    pub fn omega_exponents(&self, c: &Exps, d: &Exps) -> Root {
        let q = self.quiver();
        let r = r_values(q, self.xi());
        let mut order: Vec<Vertex> = q.vertices().collect();
        order.sort_by_key(|i| (r[i], *i));
        let mut a = Root::zero(q.rank());
        for i in order {
            let below: i64 = q.successors(i).iter().map(|&j| a.get(j) as i64).sum();
            let v = c.get(&i).copied().unwrap_or(0) as i64 - d.get(&i).copied().unwrap_or(0) as i64 + below;
            a.set(i, v.max(0) as u32);
        }
        a
    }

    pub fn omega(&self, a: &Obj) -> Result<Root> {
        let (c, d) = self.dominant_exponents(a)?;
        Ok(self.omega_exponents(&c, &d))
    }

    pub fn supp(&self, a: &Obj) -> Result<BTreeSet<Vertex>> {
        Ok(self.omega(a)?.support())
    }

    /// `Σ(X, h) = {i : τx_i ∈ X and h̃(τx_i) > 0}`.
    pub fn tiltable(&self, a: &Obj) -> BTreeSet<Vertex> {
        let defect = self.defect(&a.fun);
        self.quiver()
            .vertices()
            .filter(|&i| a.contains(self.tx(i)) && defect.get(&self.tx(i)).copied().unwrap_or(0) > 0)
            .collect()
    }

    /// `c_i = (b_i)_+`, `d_i = (b_i)_-` with `b_i = a_i - Σ_{i→j} a_j`.
    pub fn leading_exponents(&self, beta: &Root) -> (Exps, Exps) {
        let q = self.quiver();
        let mut c = Exps::new();
        let mut d = Exps::new();
        for i in q.vertices() {
            let b = beta.get(i) as i64 - q.successors(i).iter().map(|&j| beta.get(j) as i64).sum::<i64>();
            if b > 0 {
                c.insert(i, b as u32);
            } else if b < 0 {
                d.insert(i, (-b) as u32);
            }
        }
        (c, d)
    }

    /// `m_β = Π Y[i, ξ(i)-2]^{c_i} Y[i, ξ(i)]^{d_i}`.
    pub fn dominant_monomial(&self, beta: &Root) -> KClass {
        let (c, d) = self.leading_exponents(beta);
        self.frontier_class(&c, &d)
    }

    pub fn frontier_class(&self, c: &Exps, d: &Exps) -> KClass {
        let mut m = KClass::one();
        for (i, e) in c {
            m.mul_var(KVar::Y(*i, self.xi().get(*i) - 2), *e as i32);
        }
        for (i, e) in d {
            m.mul_var(KVar::Y(*i, self.xi().get(*i)), *e as i32);
        }
        m
    }

    /// The dominant object with the given frontier exponents.
    pub fn frontier_object(&self, c: &Exps, d: &Exps) -> Obj {
        let mut out = Obj::unit();
        for (i, e) in c {
            out = out.tensor(&self.hammock_object(self.tx(*i)).pow(*e));
        }
        for (i, e) in d {
            out = out.tensor(&self.hammock_object(self.x(*i)).pow(*e));
        }
        out
    }

    /// The leading object `Y[β]`.
    pub fn leading_object(&self, beta: &Root) -> Obj {
        let (c, d) = self.leading_exponents(beta);
        self.frontier_object(&c, &d)
    }

    /// Split frontier exponents as `K^{min(c,d)} ⊗ Y(x)^{extra} ⊗ Y[ω]`.
    pub fn factor_exponents(&self, c: &Exps, d: &Exps) -> Factorization {
        let mut k_exp = Exps::new();
        let mut c1 = Exps::new();
        let mut d1 = Exps::new();
        for i in self.quiver().vertices() {
            let (ci, di) = (c.get(&i).copied().unwrap_or(0), d.get(&i).copied().unwrap_or(0));
            let k = ci.min(di);
            add_exp(&mut k_exp, i, k);
            add_exp(&mut c1, i, ci - k);
            add_exp(&mut d1, i, di - k);
        }
        let remainder = self.omega_exponents(&c1, &d1);
        let (cw, dw) = self.leading_exponents(&remainder);
        debug_assert_eq!(c1, cw, "clipping never removes τx factors");
        let mut h_exp = Exps::new();
        for (i, e) in &d1 {
            add_exp(&mut h_exp, *i, e - dw.get(i).copied().unwrap_or(0));
        }
        Factorization { f_list: Exps::new(), k_exp, h_exp, remainder }
    }

    pub fn factor_dominant(&self, a: &Obj) -> Result<Factorization> {
        let (c, d) = self.dominant_exponents(a)?;
        Ok(self.factor_exponents(&c, &d))
    }

    /// Rebuild the object described by a factorization, with its class.
    pub fn factorization_object(&self, f: &Factorization) -> Obj {
        let mut out = Obj::unit();
        for (j, e) in &f.f_list {
            out = out.tensor(&self.f_object(self.tx(*j)).pow(*e));
        }
        for (j, e) in &f.k_exp {
            out = out.tensor(&self.k_object(*j).pow(*e));
        }
        for (j, e) in &f.h_exp {
            out = out.tensor(&self.hammock_object(self.x(*j)).pow(*e));
        }
        out.tensor(&self.leading_object(&f.remainder))
    }

    pub fn absorb_frontier(&self, beta: &Root, i: Vertex) -> Result<Absorption> {
        let data = beta_combinatorics(self.quiver(), self.xi(), beta)?;
        if !data.support.contains(&i) {
            return Err(Error::NotInSupport(i));
        }
        let (c, _) = self.leading_exponents(beta);
        let epsilon = u32::from(c.get(&i).copied().unwrap_or(0) > 0);
        let gamma = beta.checked_sub(&data.dim_i[&i]).expect("dimI <= beta");
        let q = self.quiver();
        let mut extra = Exps::new();
        for k in q.vertices().filter(|k| !data.support.contains(k)) {
            let hits = q.successors(k).iter().filter(|j| data.inn[&i].contains(j)).count() as u32;
            add_exp(&mut extra, k, hits);
        }
        Ok(Absorption { epsilon, gamma, extra })
    }

    /// `Z = {τx_j : j ∈ out_{Q_β}(i)}`.
    pub fn tilt_set(&self, beta: &Root, i: Vertex) -> Result<Multiset> {
        let data = beta_combinatorics(self.quiver(), self.xi(), beta)?;
        let out = data.out.get(&i).ok_or(Error::NotInSupport(i))?;
        Ok(out.iter().map(|&j| (self.tx(j), 1)).collect())
    }

    pub fn tilt_leading(&self, beta: &Root, i: Vertex) -> Result<Factorization> {
        let data = beta_combinatorics(self.quiver(), self.xi(), beta)?;
        if !data.support.contains(&i) {
            return Err(Error::NotInSupport(i));
        }
        let q = self.quiver();
        let out = &data.out[&i];
        let (c, d) = self.leading_exponents(beta);
        let mut f_list = Exps::new();
        for &j in out {
            add_exp(&mut f_list, j, 1);
        }
        let mut h_exp = Exps::new();
        for l in q.vertices().filter(|l| !data.support.contains(l)) {
            let hits = q.predecessors(l).iter().filter(|j| out.contains(j)).count() as u32;
            add_exp(&mut h_exp, l, hits);
        }
        let mut c2 = Exps::new();
        let mut d2 = Exps::new();
        for k in q.vertices() {
            let ck = c.get(&k).copied().unwrap_or(0) as i64;
            let dk = d.get(&k).copied().unwrap_or(0) as i64;
            let into_out = q.successors(k).iter().filter(|j| out.contains(j)).count() as i64;
            let from_out = q.predecessors(k).iter().filter(|j| out.contains(j)).count() as i64;
            let c_new = ck - i64::from(out.contains(&k)) + into_out;
            let d_new = if out.contains(&k) && k != i { dk - 1 + from_out } else { dk };
            if c_new < 0 || d_new < 0 {
                return Err(Error::PresentationMismatch(format!("negative exponent at {k}")));
            }
            add_exp(&mut c2, k, c_new as u32);
            add_exp(&mut d2, k, d_new as u32);
        }
        let inner = self.factor_exponents(&c2, &d2);
        let expected = beta.checked_sub(&data.dim_p[&i]).expect("dimP <= beta");
        if inner.remainder != expected || !inner.h_exp.is_empty() {
            return Err(Error::PresentationMismatch(format!(
                "tilt of {beta} at {i}: remainder {} expected {expected}",
                inner.remainder
            )));
        }
        Ok(Factorization { f_list, k_exp: inner.k_exp, h_exp, remainder: expected })
    }

    /// `Σ_σ Π_k dim_hom(x_k, y_σ(k))` when `b` is a Serre tilting of `a`.
    pub fn hom_dim_mq(&self, a: &Obj, b: &Obj, bound: usize) -> Result<u64> {
        let size = a.size();
        if size > bound || b.size() > bound {
            return Err(Error::TooLarge { size: size.max(b.size()), bound });
        }
        if size != b.size() {
            return Ok(0);
        }
        let diff = a.fun.minus(&b.fun);
        let mut z = Multiset::new();
        for (x, m) in &a.multiset {
            let v = self.eval(&diff, *x);
            if v < 0 || v > *m as i64 {
                return Ok(0);
            }
            if v > 0 {
                z.insert(*x, v as u32);
            }
        }
        let mut deltas = QFun::zero();
        for (x, m) in &z {
            deltas.add_delta(*x, *m as i64);
        }
        if !self.qfun_equal(&diff, &deltas) {
            return Ok(0);
        }
        let tilted = self.serre_tilt(a, &z)?;
        if tilted.multiset != b.multiset {
            return Ok(0);
        }
        let xs: Vec<ZVertex> = a.multiset.iter().flat_map(|(x, m)| std::iter::repeat_n(*x, *m as usize)).collect();
        let ys: Vec<ZVertex> = b.multiset.iter().flat_map(|(y, m)| std::iter::repeat_n(*y, *m as usize)).collect();
        let n = xs.len();
        let mut dp = vec![0u64; 1 << n];
        dp[0] = 1;
        for mask in 0usize..(1 << n) {
            let k = mask.count_ones() as usize;
            if k == n || dp[mask] == 0 {
                continue;
            }
            for (l, y) in ys.iter().enumerate() {
                if mask >> l & 1 == 0 {
                    let h = self.dim_hom(xs[k], *y);
                    if h > 0 {
                        dp[mask | 1 << l] += dp[mask] * h as u64;
                    }
                }
            }
        }
        Ok(dp[(1 << n) - 1])
    }

    /// The vertex `y` of smallest `p` (then label) with `Hom(τx_i, y) ≠ 0`
    /// for every `i`.
    pub fn anchor_vertex(&self) -> Option<ZVertex> {
        let lo = self.xi().min();
        let mut cands = self.window(lo - 2, lo + 2 * self.coxeter());
        cands.sort_by_key(|y| (y.p, y.i));
        cands.into_iter().find(|&y| self.quiver().vertices().all(|i| self.dim_hom(self.tx(i), y) >= 1))
    }
}
