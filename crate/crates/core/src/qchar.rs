//! Truncated q-characters computed along three independent routes, and the
//! Nakajima-order checks on the results.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{enumerate_cluster_variables, CVar, ClusterTable};
use crate::complexes::ComplexBuilder;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::laurent::{Laurent, Monomial};
use crate::objects::{Exps, KClass, KVar};
use crate::quiver::{beta_combinatorics, Root, Vertex};

pub type QPoly = Laurent<KVar>;

/// A positive root or a negative simple root `-α_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Positive(Root),
    NegativeSimple(Vertex),
}

impl FromStr for Target {
    type Err = Error;

    /// `"a1,...,an"` for a positive root, `"-i"` for `-α_i`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.strip_prefix('-') {
            Some(rest) => rest.parse().map(Target::NegativeSimple).map_err(|_| Error::Parse(s.to_string())),
            None => s.parse().map(Target::Positive),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Positive(r) => write!(f, "{r}"),
            Target::NegativeSimple(i) => write!(f, "-{i}"),
        }
    }
}

impl Context {
    /// `A_i = Y[i,ξ(i)-2] Y[i,ξ(i)] Π_{j∼i} Y[j,ξ(i)-1]^{-1}`.
    pub fn variable_a(&self, i: Vertex) -> KClass {
        let xi = self.xi().get(i);
        let mut m = Monomial::from_pairs([(KVar::Y(i, xi - 2), 1), (KVar::Y(i, xi), 1)]);
        for j in self.quiver().neighbors(i) {
            m.mul_var(KVar::Y(j, xi - 1), -1);
        }
        m
    }

    /// `X_i ↦ Y[i,ξ(i)-2] Y[i,ξ(i)]`.
    pub fn frozen_class(&self, i: Vertex) -> KClass {
        self.frontier_class(&[(i, 1)].into(), &[(i, 1)].into())
    }

    /// Exponents `k` with `m'/m = Π A_i^{k_i}`, if the ratio is such a product.
    pub fn a_exponents(&self, m: &KClass, m2: &KClass) -> Option<BTreeMap<Vertex, i64>> {
        let q = self.quiver();
        let ratio = m2.div(m);
        let mut k: BTreeMap<Vertex, i64> = BTreeMap::new();
        while k.len() < q.rank() {
            let before = k.len();
            for i in q.vertices() {
                if !k.contains_key(&i) && q.successors(i).iter().all(|l| k.contains_key(l)) {
                    let e = i64::from(ratio.exponent(&KVar::Y(i, self.xi().get(i) - 2)));
                    let below: i64 = q.successors(i).iter().map(|l| k[l]).sum();
                    k.insert(i, e + below);
                }
            }
            if k.len() == before {
                return None;
            }
        }
        let rebuilt = k.iter().fold(Monomial::one(), |acc, (i, e)| &acc * &self.variable_a(*i).pow(*e as i32));
        (rebuilt == ratio).then_some(k)
    }

    /// `m ≤_N m'`.
    pub fn nakajima_leq(&self, m: &KClass, m2: &KClass) -> bool {
        self.a_exponents(m, m2).is_some_and(|k| k.values().all(|e| *e >= 0))
    }

    /// The unique `≤_N`-greatest and least monomials of `p`.
    pub fn extremal_monomials(&self, p: &QPoly) -> Result<(KClass, KClass)> {
        let monos: Vec<&KClass> = p.monomials().collect();
        let find = |top: bool| {
            monos
                .iter()
                .find(|m| monos.iter().all(|o| if top { self.nakajima_leq(o, m) } else { self.nakajima_leq(m, o) }))
                .map(|m| (*m).clone())
                .ok_or(Error::Incomparable)
        };
        Ok((find(true)?, find(false)?))
    }

    /// `m_β · Π A_i^{-a_i}`.
    pub fn lowest_monomial(&self, beta: &Root) -> KClass {
        self.quiver()
            .vertices()
            .fold(self.dominant_monomial(beta), |acc, i| &acc * &self.variable_a(i).pow(-(beta.get(i) as i32)))
    }

    fn substitute_cluster(&self, p: &Laurent<CVar>) -> Result<QPoly> {
        p.substitute(|v| match v {
            CVar::X(i) => Laurent::var(KVar::Y(*i, self.xi().get(*i))),
            CVar::Frozen(i) => Laurent::from(self.frozen_class(*i)),
        })
    }
}

/// Per-root outcome of the route comparison.
#[derive(Clone, Debug, Serialize)]
pub struct BetaReport {
    pub beta: String,
    pub routes_equal: bool,
    pub highest_is_dominant: bool,
    pub lowest_matches: bool,
    pub positive: bool,
    pub top_coefficient_one: bool,
    pub errors: Vec<String>,
    /// Ratio of dominant terms between routes, reported when they disagree.
    pub rescaling_hint: Option<String>,
}

impl BetaReport {
    pub fn passed(&self) -> bool {
        self.routes_equal
            && self.highest_is_dominant
            && self.lowest_matches
            && self.positive
            && self.top_coefficient_one
            && self.errors.is_empty()
    }
}

/// Holds the per-quiver state shared by the three routes.
pub struct QcharEngine<'a> {
    ctx: &'a Context,
    builder: ComplexBuilder<'a>,
    cluster: ClusterTable,
    memo: Mutex<BTreeMap<Root, QPoly>>,
}

impl<'a> QcharEngine<'a> {
    pub fn new(ctx: &'a Context) -> Result<Self> {
        Ok(QcharEngine {
            ctx,
            builder: ComplexBuilder::new(ctx),
            cluster: enumerate_cluster_variables(ctx.quiver())?,
            memo: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn with_builder(ctx: &'a Context, builder: ComplexBuilder<'a>) -> Result<Self> {
        Ok(QcharEngine { builder, ..Self::new(ctx)? })
    }

    pub fn context(&self) -> &Context {
        self.ctx
    }

    pub fn builder(&self) -> &ComplexBuilder<'a> {
        &self.builder
    }

    pub fn cluster_table(&self) -> &ClusterTable {
        &self.cluster
    }

    fn negative_simple(&self, i: Vertex) -> Result<QPoly> {
        if !self.ctx.quiver().vertices().any(|v| v == i) {
            return Err(Error::UnknownVertex(i));
        }
        Ok(Laurent::var(KVar::Y(i, self.ctx.xi().get(i))))
    }

    pub fn qchar_euler(&self, t: &Target) -> Result<QPoly> {
        match t {
            Target::NegativeSimple(i) => self.negative_simple(*i),
            Target::Positive(beta) => self.ctx.euler_char(&*self.builder.build(beta)?, Some(-1)),
        }
    }

    pub fn qchar_cluster(&self, t: &Target) -> Result<QPoly> {
        let p = match t {
            Target::NegativeSimple(i) => {
                self.cluster.initial.get(i).ok_or_else(|| Error::UnknownRoot(t.to_string()))?
            }
            Target::Positive(beta) => self.cluster.get(beta)?,
        };
        self.ctx.substitute_cluster(p)
    }

    pub fn qchar_recursion(&self, t: &Target) -> Result<QPoly> {
        match t {
            Target::NegativeSimple(i) => self.negative_simple(*i),
            Target::Positive(beta) => self.recursion(beta),
        }
    }

    fn recursion(&self, beta: &Root) -> Result<QPoly> {
        let ctx = self.ctx;
        if beta.rank() != ctx.rank() {
            return Err(Error::RankMismatch { expected: ctx.rank(), found: beta.rank() });
        }
        if beta.is_zero() {
            return Ok(Laurent::one());
        }
        if let Some(hit) = self.memo.lock().expect("memo lock").get(beta) {
            return Ok(hit.clone());
        }
        let data = beta_combinatorics(ctx.quiver(), ctx.xi(), beta)?;
        let i = data.pick();
        let absorb = ctx.absorb_frontier(beta, i)?;
        let tilt = ctx.tilt_leading(beta, i)?;
        let mut first = ctx.frozen_class(i).pow(absorb.epsilon as i32);
        first = &first * &ctx.frontier_class(&Exps::new(), &absorb.extra);
        let mut second = ctx.frontier_class(&Exps::new(), &tilt.h_exp);
        for (k, e) in &tilt.k_exp {
            second = &second * &ctx.frozen_class(*k).pow(*e as i32);
        }
        let sum = &self.recursion(&absorb.gamma)?.mul_monomial(&first)
            + &self.recursion(&tilt.remainder)?.mul_monomial(&second);
        let out = sum.div_exact(&Laurent::var(KVar::Y(i, ctx.xi().get(i))))?;
        self.memo.lock().expect("memo lock").insert(beta.clone(), out.clone());
        Ok(out)
    }

    pub fn verify_beta(&self, beta: &Root) -> BetaReport {
        let ctx = self.ctx;
        let t = Target::Positive(beta.clone());
        let mut report = BetaReport {
            beta: beta.to_string(),
            routes_equal: false,
            highest_is_dominant: false,
            lowest_matches: false,
            positive: false,
            top_coefficient_one: false,
            errors: Vec::new(),
            rescaling_hint: None,
        };
        let mut routes = Vec::new();
        for (name, r) in [
            ("euler", self.qchar_euler(&t)),
            ("cluster", self.qchar_cluster(&t)),
            ("recursion", self.qchar_recursion(&t)),
        ] {
            match r {
                Ok(p) => routes.push(p),
                Err(e) => report.errors.push(format!("{name}: {e}")),
            }
        }
        let Some(p) = routes.first() else { return report };
        report.routes_equal = routes.len() == 3 && routes.iter().all(|r| r == p);
        if !report.routes_equal && routes.len() >= 2 {
            let tops: Vec<String> = routes
                .iter()
                .map(|r| ctx.extremal_monomials(r).map(|(h, _)| h.to_string()).unwrap_or_else(|_| "?".into()))
                .collect();
            report.rescaling_hint = Some(format!("highest monomials by route: {}", tops.join(" | ")));
        }
        report.positive = p.all_coefficients_positive();
        let m_beta = ctx.dominant_monomial(beta);
        match ctx.extremal_monomials(p) {
            Ok((hi, lo)) => {
                report.highest_is_dominant = hi == m_beta;
                report.lowest_matches = lo == ctx.lowest_monomial(beta);
                report.top_coefficient_one = p.coefficient(&hi) == 1;
            }
            Err(e) => report.errors.push(format!("extremal: {e}")),
        }
        report
    }

    /// `verify_beta` over many roots in parallel, results in input order.
    pub fn verify_all(&self, roots: &[Root]) -> Vec<BetaReport> {
        roots.par_iter().map(|b| self.verify_beta(b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{DynkinQuiver, DynkinType};

    #[test]
    fn a_variables_on_a2() {
        let c = Context::new(DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap()).unwrap();
        let a1 = Monomial::from_pairs([(KVar::Y(1, -1), 1), (KVar::Y(1, 1), 1), (KVar::Y(2, 0), -1)]);
        let a2 = Monomial::from_pairs([(KVar::Y(2, -2), 1), (KVar::Y(2, 0), 1), (KVar::Y(1, -1), -1)]);
        assert_eq!(c.variable_a(1), a1);
        assert_eq!(c.variable_a(2), a2);
        let m = c.dominant_monomial(&"1,1".parse().unwrap());
        assert!(c.nakajima_leq(&m.div(&a1), &m));
        assert!(!c.nakajima_leq(&m, &m.div(&a1)));
        assert_eq!("-2".parse::<Target>().unwrap(), Target::NegativeSimple(2));
    }
}
