//! Bounded complexes of objects with tag-level differentials, and the
//! recursive mapping-cone construction of `C•[β]`.
//!
//! A differential is a list of elementary components between summands of
//! consecutive degrees. Each component carries a tag naming the `η_i` it
//! realizes and a sign. Scalars are never modelled.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::objects::{Exps, KVar, Obj};
use crate::quiver::{beta_combinatorics, DynkinQuiver, Root, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    Eta(Vertex),
    Connector(Vertex),
    Identity,
}

impl Tag {
    /// The vertex `i` of the `η_i` realized by this component.
    pub fn vertex(&self) -> Option<Vertex> {
        match self {
            Tag::Eta(i) | Tag::Connector(i) => Some(*i),
            Tag::Identity => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Eta(i) => write!(f, "eta_{i}"),
            Tag::Connector(i) => write!(f, "u:eta_{i}"),
            Tag::Identity => write!(f, "id"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub from: usize,
    pub to: usize,
    pub tag: Tag,
    pub sign: i8,
}

/// `terms[n]` is the list of summands in degree `n`; `diffs[n]` holds the
/// components of `d_n : C_n → C_{n+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Complex {
    pub terms: Vec<Vec<Obj>>,
    pub diffs: Vec<Vec<Component>>,
}

impl Complex {
    pub fn zero() -> Self {
        Complex::default()
    }

    pub fn concentrated(obj: Obj, degree: usize) -> Self {
        let mut c = Complex::zero();
        c.terms = vec![Vec::new(); degree + 1];
        c.diffs = vec![Vec::new(); degree + 1];
        c.terms[degree].push(obj);
        c
    }

    pub fn unit() -> Self {
        Complex::concentrated(Obj::unit(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.terms.iter().rposition(|t| !t.is_empty())
    }

    pub fn term(&self, n: usize) -> &[Obj] {
        self.terms.get(n).map_or(&[], |t| t.as_slice())
    }

    pub fn diff(&self, n: usize) -> &[Component] {
        self.diffs.get(n).map_or(&[], |d| d.as_slice())
    }

    pub fn num_summands(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Component)> {
        self.diffs.iter().enumerate().flat_map(|(n, d)| d.iter().map(move |c| (n, c)))
    }

    fn normalize(mut self) -> Self {
        while self.terms.last().is_some_and(|t| t.is_empty()) {
            self.terms.pop();
        }
        self.diffs.resize(self.terms.len(), Vec::new());
        self
    }

    /// Move every term from degree `n` to `n + k`.
    pub fn shift(&self, k: i64) -> Result<Complex> {
        if self.is_zero() {
            return Ok(Complex::zero());
        }
        let low = self.terms.iter().position(|t| !t.is_empty()).expect("nonzero") as i64;
        if low + k < 0 {
            return Err(Error::NegativeDegree);
        }
        let mut out = Complex::zero();
        let len = (self.terms.len() as i64 + k).max(0) as usize;
        out.terms = vec![Vec::new(); len];
        out.diffs = vec![Vec::new(); len];
        for n in 0..self.terms.len() {
            let m = n as i64 + k;
            if m >= 0 {
                out.terms[m as usize] = self.terms[n].clone();
                out.diffs[m as usize] = self.diffs[n].clone();
            }
        }
        Ok(out.normalize())
    }

    /// Tensor every term with an object placed in degree zero.
    pub fn tensor_obj(&self, obj: &Obj) -> Complex {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            for s in t.iter_mut() {
                *s = s.tensor(obj);
            }
        }
        out
    }

    /// `(C ⊗ D)_n = ⊕_{a+b=n} C_a ⊗ D_b` with `d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy`.
    pub fn tensor(&self, other: &Complex) -> Complex {
        if self.is_zero() || other.is_zero() {
            return Complex::zero();
        }
        let len = self.terms.len() + other.terms.len() - 1;
        let mut index: BTreeMap<(usize, usize, usize, usize), (usize, usize)> = BTreeMap::new();
        let mut terms: Vec<Vec<Obj>> = vec![Vec::new(); len];
        for (a, ta) in self.terms.iter().enumerate() {
            for (b, tb) in other.terms.iter().enumerate() {
                for (s, x) in ta.iter().enumerate() {
                    for (t, y) in tb.iter().enumerate() {
                        index.insert((a, b, s, t), (a + b, terms[a + b].len()));
                        terms[a + b].push(x.tensor(y));
                    }
                }
            }
        }
        let mut diffs: Vec<Vec<Component>> = vec![Vec::new(); len];
        for (&(a, b, s, t), &(n, pos)) in &index {
            for c in self.diff(a).iter().filter(|c| c.from == s) {
                let (_, to) = index[&(a + 1, b, c.to, t)];
                diffs[n].push(Component { from: pos, to, tag: c.tag, sign: c.sign });
            }
            let koszul: i8 = if a % 2 == 0 { 1 } else { -1 };
            for c in other.diff(b).iter().filter(|c| c.from == t) {
                let (_, to) = index[&(a, b + 1, s, c.to)];
                diffs[n].push(Component { from: pos, to, tag: c.tag, sign: c.sign * koszul });
            }
        }
        Complex { terms, diffs }.normalize()
    }

    /// `E_n = dom_{n+1} ⊕ cod_n` with differential `[[d_dom, 0], [u, -d_cod]]`.
    /// `connectors[n]` lists the components of `u_n : dom_n → cod_n`.
    pub fn cone(dom: &Complex, cod: &Complex, connectors: &[Vec<Component>]) -> Result<Complex> {
        if !dom.term(0).is_empty() {
            return Err(Error::NegativeDegree);
        }
        for (n, comps) in connectors.iter().enumerate() {
            for c in comps {
                if c.from >= dom.term(n).len() || c.to >= cod.term(n).len() {
                    return Err(Error::InconsistentConnector(format!("degree {n}: {} -> {}", c.from, c.to)));
                }
            }
        }
        let len = dom.terms.len().saturating_sub(1).max(cod.terms.len());
        let mut out = Complex { terms: vec![Vec::new(); len], diffs: vec![Vec::new(); len] };
        for n in 0..len {
            out.terms[n] = dom.term(n + 1).iter().chain(cod.term(n)).cloned().collect();
        }
        for n in 0..len {
            let off_here = dom.term(n + 1).len();
            let off_next = dom.term(n + 2).len();
            for c in dom.diff(n + 1) {
                out.diffs[n].push(*c);
            }
            for c in connectors.get(n + 1).map_or(&[][..], |v| v.as_slice()) {
                out.diffs[n].push(Component { from: c.from, to: off_next + c.to, tag: c.tag, sign: c.sign });
            }
            for c in cod.diff(n) {
                out.diffs[n].push(Component {
                    from: off_here + c.from,
                    to: off_next + c.to,
                    tag: c.tag,
                    sign: -c.sign,
                });
            }
        }
        Ok(out.normalize())
    }

    pub fn inject_component(&mut self, n: usize, c: Component) {
        if self.diffs.len() <= n {
            self.diffs.resize(n + 1, Vec::new());
        }
        self.diffs[n].push(c);
    }

    /// Tag-level check of `d∘d = 0`.
    ///
    /// A composite `η_a` then `η_b` vanishes identically when `b ⇝ a` with
    /// `b ≠ a`. All other composites from a summand `s` to a summand `u`
    /// with the same unordered pair of tags must have signs summing to zero.
    pub fn verify_d_squared(&self, q: &DynkinQuiver) -> DSquaredReport {
        let mut report = DSquaredReport::default();
        for n in 0..self.terms.len() {
            let mut groups: BTreeMap<(usize, usize, Tag, Tag), i64> = BTreeMap::new();
            for c1 in self.diff(n) {
                for c2 in self.diff(n + 1).iter().filter(|c| c.from == c1.to) {
                    report.paths += 1;
                    if let (Some(a), Some(b)) = (c1.tag.vertex(), c2.tag.vertex()) {
                        if a != b && q.reaches(b, a) {
                            report.vanishing += 1;
                            continue;
                        }
                    }
                    let (t1, t2) = pair_key(c1.tag, c2.tag);
                    *groups.entry((c1.from, c2.to, t1, t2)).or_insert(0) += (c1.sign * c2.sign) as i64;
                }
            }
            for ((s, u, a, b), total) in groups {
                if total != 0 {
                    report.violations.push(format!("degree {n}: {a},{b} from summand {s} to {u} sums to {total}"));
                }
            }
        }
        report
    }
}

fn plain(t: Tag) -> Tag {
    match t {
        Tag::Connector(i) => Tag::Eta(i),
        other => other,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DSquaredReport {
    pub paths: usize,
    pub vanishing: usize,
    pub violations: Vec<String>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A complex with a denominator: the formal quotient of `num` by
/// `⊗ Y(x_i)^{den_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionComplex {
    pub num: Complex,
    pub den: Exps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PickRule {
    #[default]
    MinLabel,
    MaxLabel,
}

impl PickRule {
    fn choose(self, candidates: &BTreeSet<Vertex>) -> Vertex {
        match self {
            PickRule::MinLabel => *candidates.iter().next().expect("nonempty"),
            PickRule::MaxLabel => *candidates.iter().next_back().expect("nonempty"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub nonnegative_and_dominant: bool,
    pub tags_in_support: bool,
    pub factorization_supply: bool,
    pub failures: Vec<String>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.nonnegative_and_dominant && self.tags_in_support && self.factorization_supply
    }
}

impl Context {
    pub fn initial_h(&self, i: Vertex) -> Complex {
        Complex::concentrated(self.hammock_object(self.x(i)), 0)
    }

    pub fn initial_k(&self, i: Vertex) -> Complex {
        Complex::concentrated(self.k_object(i), 0)
    }

    pub fn initial_f(&self, i: Vertex) -> Complex {
        Complex::concentrated(self.f_object(self.tx(i)), 1)
    }

    fn den_object(&self, den: &Exps) -> Obj {
        den.iter().fold(Obj::unit(), |acc, (j, e)| acc.tensor(&self.hammock_object(self.x(*j)).pow(*e)))
    }

    /// `Σ (-1)^n [C_n] / Π Y[i, ξ(i)]^{den_i}`, optionally with every `f_i`
    /// specialized first.
    pub fn euler_char(&self, fc: &FractionComplex, specialize_f: Option<i64>) -> Result<Laurent<KVar>> {
        let mut chi = Laurent::zero();
        for (n, t) in fc.num.terms.iter().enumerate() {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            for s in t {
                let class = s.kclass.clone().ok_or_else(|| Error::PresentationMismatch("term without class".into()))?;
                chi.add_term(sign, class);
            }
        }
        if let Some(v) = specialize_f {
            chi = chi.specialize(|x| matches!(x, KVar::F(_) | KVar::FAt(..)).then_some(v));
        }
        let divisor = self.frontier_class(&Exps::new(), &fc.den);
        chi.div_exact(&Laurent::from(divisor))
    }

    /// Components `s → t` tagged `η_j` for every `t ≅ μ_{τx_j}(s)`.
    fn tilt_components(&self, sources: &[Obj], targets: &[Obj], make: fn(Vertex) -> Tag) -> Vec<Component> {
        let mut out = Vec::new();
        for (a, s) in sources.iter().enumerate() {
            let defect = self.defect(&s.fun);
            for j in self.quiver().vertices() {
                let z = self.tx(j);
                if !s.contains(z) || defect.get(&z).copied().unwrap_or(0) <= 0 {
                    continue;
                }
                let tilted = self.mu(s, j).expect("contained");
                for (b, t) in targets.iter().enumerate() {
                    if t.multiset == tilted.multiset && self.qfun_equal(&t.fun, &tilted.fun) {
                        out.push(Component { from: a, to: b, tag: make(j), sign: 1 });
                    }
                }
            }
        }
        out
    }

    /// Structural exactness checks on a built complex.
    pub fn verify_exactness(&self, fc: &FractionComplex, beta: &Root) -> ExactnessReport {
        let mut r = ExactnessReport {
            nonnegative_and_dominant: true,
            tags_in_support: true,
            factorization_supply: true,
            ..Default::default()
        };
        let supp = beta.support();
        let q = self.quiver();
        if fc.num.term(0).len() != 1 || self.dominant_exponents(&fc.num.term(0)[0]).is_err() {
            r.nonnegative_and_dominant = false;
            r.failures.push("degree zero is not a single dominant object".into());
        }
        for (n, c) in fc.num.components() {
            match c.tag.vertex() {
                Some(i) if supp.contains(&i) => {}
                _ => {
                    r.tags_in_support = false;
                    r.failures.push(format!("degree {n}: tag {} outside Supp", c.tag));
                }
            }
        }
        let anchor = self.anchor_vertex();
        for (n, c) in fc.num.components() {
            let Some(i) = c.tag.vertex() else { continue };
            let src = &fc.num.term(n)[c.from];
            let t = &fc.num.term(n + 1)[c.to];
            let sigma = self.tiltable(t);
            if !src.contains(self.tx(i)) || anchor.is_some_and(|x| !src.contains(x)) {
                r.factorization_supply = false;
                r.failures.push(format!("degree {n}: summand {} lacks τx_{i} or the anchor", c.from));
            }
            for &j in q.predecessors(i) {
                if !sigma.contains(&j) {
                    r.factorization_supply = false;
                    r.failures.push(format!("degree {}: {j} not tiltable after {}", n + 1, c.tag));
                }
            }
        }
        for (n, t) in fc.num.terms.iter().enumerate() {
            for (k, s) in t.iter().enumerate() {
                if !self.supply_holds(s) {
                    r.factorization_supply = false;
                    r.failures.push(format!("degree {n}: summand {k} misses part of ⊔ H_i"));
                }
            }
        }
        r
    }

    /// `⊔_i H_i^{h̃(τx_i)} ⊆ X` with `H_i = {τx_j : j ⇝ i}`.
    pub fn supply_holds(&self, a: &Obj) -> bool {
        let defect = self.defect(&a.fun);
        let q = self.quiver();
        let mut need: BTreeMap<crate::ZVertex, i64> = BTreeMap::new();
        for i in q.vertices() {
            let e = defect.get(&self.tx(i)).copied().unwrap_or(0);
            if e < 0 {
                return false;
            }
            for j in q.vertices().filter(|&j| q.reaches(j, i)) {
                *need.entry(self.tx(j)).or_insert(0) += e;
            }
        }
        need.iter().all(|(z, m)| a.multiset.get(z).copied().unwrap_or(0) as i64 >= *m)
    }

    /// Every component's target is the tilting of its source at its tag.
    pub fn verify_component_tilts(&self, c: &Complex) -> Vec<String> {
        let mut bad = Vec::new();
        for (n, comp) in c.components() {
            let s = &c.term(n)[comp.from];
            let t = &c.term(n + 1)[comp.to];
            let ok = match comp.tag.vertex() {
                Some(j) => self.mu(s, j).map(|m| self.is_iso(&m, t)).unwrap_or(false),
                None => self.is_iso(s, t),
            };
            if !ok {
                bad.push(format!("degree {n}: {} -> {} tagged {}", comp.from, comp.to, comp.tag));
            }
        }
        bad
    }

    /// `C_0 ≅ Y[β] ⊗ Y(x)^{den}`.
    pub fn degree_zero_matches(&self, fc: &FractionComplex, beta: &Root) -> bool {
        let expected = self.leading_object(beta).tensor(&self.den_object(&fc.den));
        fc.num.term(0).len() == 1 && self.is_iso(&fc.num.term(0)[0], &expected)
    }
}

/// Memoized builder for `C•[β]`.
pub struct ComplexBuilder<'a> {
    ctx: &'a Context,
    rule: PickRule,
    memo: Mutex<BTreeMap<Root, Arc<FractionComplex>>>,
}

impl<'a> ComplexBuilder<'a> {
    pub fn new(ctx: &'a Context) -> Self {
        Self::with_rule(ctx, PickRule::MinLabel)
    }

    pub fn with_rule(ctx: &'a Context, rule: PickRule) -> Self {
        ComplexBuilder { ctx, rule, memo: Mutex::new(BTreeMap::new()) }
    }

    pub fn context(&self) -> &Context {
        self.ctx
    }

    /// `C•[-α_i]`: the hammock object `Y(x_i)` in degree zero.
    pub fn build_negative_simple(&self, i: Vertex) -> Result<FractionComplex> {
        if !self.ctx.quiver().vertices().any(|v| v == i) {
            return Err(Error::UnknownVertex(i));
        }
        Ok(FractionComplex { num: self.ctx.initial_h(i), den: Exps::new() })
    }

    pub fn build(&self, beta: &Root) -> Result<Arc<FractionComplex>> {
        if let Some(hit) = self.memo.lock().expect("memo lock").get(beta) {
            return Ok(Arc::clone(hit));
        }
        let fc = if beta.is_zero() {
            if beta.rank() != self.ctx.rank() {
                return Err(Error::RankMismatch { expected: self.ctx.rank(), found: beta.rank() });
            }
            FractionComplex { num: Complex::unit(), den: Exps::new() }
        } else {
            let data = beta_combinatorics(self.ctx.quiver(), self.ctx.xi(), beta)?;
            self.build_at(beta, self.rule.choose(&data.candidates))?
        };
        let fc = Arc::new(fc);
        self.memo.lock().expect("memo lock").insert(beta.clone(), Arc::clone(&fc));
        Ok(fc)
    }

    /// Build every root in parallel; results in input order.
    pub fn build_all(&self, roots: &[Root]) -> Vec<Result<Arc<FractionComplex>>> {
        roots.par_iter().map(|b| self.build(b)).collect()
    }

    /// One cone step at a chosen `i ∈ Supp(β)`, recursing with the pick rule.
    pub fn build_at(&self, beta: &Root, i: Vertex) -> Result<FractionComplex> {
        let ctx = self.ctx;
        let data = beta_combinatorics(ctx.quiver(), ctx.xi(), beta)?;
        if !data.support.contains(&i) {
            return Err(Error::NotInSupport(i));
        }
        let absorb = ctx.absorb_frontier(beta, i)?;
        let tilt = ctx.tilt_leading(beta, i)?;
        let lower = self.build(&absorb.gamma)?;
        let upper = self.build(&tilt.remainder)?;

        let mut den = Exps::new();
        for j in ctx.quiver().vertices() {
            let l = lower.den.get(&j).copied().unwrap_or(0).max(upper.den.get(&j).copied().unwrap_or(0));
            if l > 0 {
                den.insert(j, l);
            }
        }
        let pad = |have: &Exps| -> Exps {
            den.iter()
                .filter_map(|(j, l)| {
                    let e = l - have.get(j).copied().unwrap_or(0);
                    (e > 0).then_some((*j, e))
                })
                .collect()
        };

        let mut dom_obj = ctx.k_object(i).pow(absorb.epsilon);
        for (k, e) in &absorb.extra {
            dom_obj = dom_obj.tensor(&ctx.hammock_object(ctx.x(*k)).pow(*e));
        }
        dom_obj = dom_obj.tensor(&ctx.den_object(&pad(&lower.den)));
        let dom = lower.num.tensor_obj(&dom_obj).shift(1)?;

        let m = tilt.f_list.values().sum::<u32>() as usize;
        let f_obj = tilt.f_list.iter().fold(Obj::unit(), |acc, (j, e)| acc.tensor(&ctx.f_object(ctx.tx(*j)).pow(*e)));
        let mut side = Obj::unit();
        for (l, e) in &tilt.h_exp {
            side = side.tensor(&ctx.hammock_object(ctx.x(*l)).pow(*e));
        }
        for (k, e) in &tilt.k_exp {
            side = side.tensor(&ctx.k_object(*k).pow(*e));
        }
        side = side.tensor(&ctx.den_object(&pad(&upper.den)));
        let cod = Complex::concentrated(f_obj, m).tensor(&upper.num.tensor_obj(&side));

        let mut connectors: Vec<Vec<Component>> = vec![Vec::new(); dom.terms.len().max(cod.terms.len())];
        for (n, slot) in connectors.iter_mut().enumerate() {
            *slot = ctx.tilt_components(dom.term(n), cod.term(n), Tag::Connector);
        }
        if !solve_connectors(ctx.quiver(), &dom, &cod, &mut connectors) {
            return Err(Error::InconsistentConnector(format!("no tag-level chain map for {beta} at {i}")));
        }
        let num = Complex::cone(&dom, &cod, &connectors)?;
        *den.entry(i).or_insert(0) += 1;
        Ok(FractionComplex { num, den })
    }
}

/// Degree, source summand, target summand and unordered tag pair.
type GroupKey = (usize, usize, usize, Tag, Tag);

/// Choose connector components so that the cone squares to zero.
///
/// Each candidate component takes a value in `{+1, -1, 0}`. Every group of
/// composites from a domain summand to a codomain summand with a common
/// unordered tag pair must sum to zero. Nonzero values are tried first, so
/// the search returns the solution that keeps the most components in
/// lexicographic order. Returns `false` when the search budget runs out.
fn solve_connectors(q: &DynkinQuiver, dom: &Complex, cod: &Complex, connectors: &mut [Vec<Component>]) -> bool {
    let mut vars: Vec<(usize, usize)> = Vec::new();
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (n, comps) in connectors.iter().enumerate() {
        for k in 0..comps.len() {
            ids.insert((n, k), vars.len());
            vars.push((n, k));
        }
    }
    let mut groups: BTreeMap<GroupKey, Vec<(usize, i8)>> = BTreeMap::new();
    for n in 0..connectors.len() {
        for (k, u) in connectors[n].iter().enumerate() {
            for d in cod.diff(n).iter().filter(|d| d.from == u.to) {
                if !skip(q, u.tag, d.tag) {
                    let (a, b) = pair_key(u.tag, d.tag);
                    groups.entry((n, u.from, d.to, a, b)).or_default().push((ids[&(n, k)], -d.sign));
                }
            }
        }
        if n + 1 < connectors.len() {
            for d in dom.diff(n) {
                for (k, u) in connectors[n + 1].iter().enumerate().filter(|(_, u)| u.from == d.to) {
                    if !skip(q, d.tag, u.tag) {
                        let (a, b) = pair_key(d.tag, u.tag);
                        groups.entry((n, d.from, u.to, a, b)).or_default().push((ids[&(n + 1, k)], d.sign));
                    }
                }
            }
        }
    }
    let equations: Vec<Vec<(usize, i8)>> = groups.into_values().collect();
    let mut closes_at: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    for (e, eq) in equations.iter().enumerate() {
        if let Some(last) = eq.iter().map(|(v, _)| *v).max() {
            closes_at[last].push(e);
        }
    }
    let mut values = vec![0i8; vars.len()];
    let mut budget: u64 = 2_000_000;
    fn search(
        v: usize,
        values: &mut [i8],
        equations: &[Vec<(usize, i8)>],
        closes_at: &[Vec<usize>],
        budget: &mut u64,
    ) -> Option<bool> {
        if v == values.len() {
            return Some(true);
        }
        for val in [1i8, -1, 0] {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            values[v] = val;
            let ok = closes_at[v]
                .iter()
                .all(|&e| equations[e].iter().map(|(w, c)| (values[*w] * c) as i64).sum::<i64>() == 0);
            if ok {
                match search(v + 1, values, equations, closes_at, budget) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
        }
        values[v] = 0;
        Some(false)
    }
    let solved = search(0, &mut values, &equations, &closes_at, &mut budget) == Some(true);
    if !solved {
        return false;
    }
    for (id, &(n, k)) in vars.iter().enumerate() {
        connectors[n][k].sign = values[id];
    }
    for comps in connectors.iter_mut() {
        comps.retain(|c| c.sign != 0);
    }
    true
}

fn skip(q: &DynkinQuiver, first: Tag, second: Tag) -> bool {
    match (first.vertex(), second.vertex()) {
        (Some(a), Some(b)) => a != b && q.reaches(b, a),
        _ => false,
    }
}

fn pair_key(a: Tag, b: Tag) -> (Tag, Tag) {
    let (a, b) = (plain(a), plain(b));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::DynkinType;

    #[test]
    fn shift_and_tensor_degrees() {
        let u = Complex::unit().shift(1).unwrap();
        assert_eq!(u.top_degree(), Some(1));
        assert!(u.term(0).is_empty());
        assert_eq!(Complex::unit().shift(-1), Err(Error::NegativeDegree));
        let c = Context::new(DynkinQuiver::new(DynkinType::A, 2, &[(1, 2)]).unwrap()).unwrap();
        let t = c.initial_f(1).tensor(&c.initial_f(2));
        assert_eq!(t.top_degree(), Some(2));
        assert_eq!(t.num_summands(), 1);
    }

    #[test]
    fn cone_edge_cases() {
        let c = Context::new(DynkinQuiver::new(DynkinType::A, 1, &[]).unwrap()).unwrap();
        let dom = c.initial_k(1).shift(1).unwrap();
        let e = Complex::cone(&dom, &Complex::zero(), &[]).unwrap();
        assert_eq!(e, c.initial_k(1));
        let f = c.initial_f(1);
        assert_eq!(Complex::cone(&Complex::zero(), &f, &[]).unwrap(), f);
        let bad = vec![vec![], vec![Component { from: 3, to: 0, tag: Tag::Eta(1), sign: 1 }]];
        assert!(matches!(Complex::cone(&dom, &f, &bad), Err(Error::InconsistentConnector(_))));
    }

    #[test]
    fn a1_complex() {
        let c = Context::new(DynkinQuiver::new(DynkinType::A, 1, &[]).unwrap()).unwrap();
        let b = ComplexBuilder::new(&c);
        let fc = b.build(&Root::simple(1, 1)).unwrap();
        assert_eq!(fc.den, Exps::from([(1, 1)]));
        assert!(c.is_iso(&fc.num.term(0)[0], &c.k_object(1)));
        assert!(c.is_iso(&fc.num.term(1)[0], &c.f_object(c.tx(1))));
        assert_eq!(fc.num.diff(0).len(), 1);
        assert!(fc.num.verify_d_squared(c.quiver()).passed());
    }
}
