//! Sparse Laurent polynomials with integer coefficients.
//!
//! A [`Monomial`] is a finitely supported map from variables to nonzero
//! integer exponents. A [`Laurent`] is a finitely supported map from
//! monomials to nonzero coefficients. Both are kept canonical at all times,
//! so derived equality is equality of Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use itertools::Itertools;

/// Marker trait for polynomial variables.
pub trait Var: Ord + Clone + fmt::Debug + fmt::Display + Send + Sync {}
impl<T: Ord + Clone + fmt::Debug + fmt::Display + Send + Sync> Var for T {}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial<V: Var> {
    exps: BTreeMap<V, i32>,
}

impl<V: Var> Default for Monomial<V> {
    fn default() -> Self {
        Self::one()
    }
}

impl<V: Var> Monomial<V> {
    pub fn one() -> Self {
        Monomial { exps: BTreeMap::new() }
    }

    pub fn var(v: V) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: V, e: i32) -> Self {
        let mut m = Self::one();
        m.mul_var(v, e);
        m
    }

    pub fn from_pairs<I: IntoIterator<Item = (V, i32)>>(pairs: I) -> Self {
        let mut m = Self::one();
        for (v, e) in pairs {
            m.mul_var(v, e);
        }
        m
    }

    pub fn mul_var(&mut self, v: V, e: i32) {
        if e == 0 {
            return;
        }
        let slot = self.exps.entry(v.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&v);
        }
    }

    pub fn exponent(&self, v: &V) -> i32 {
        self.exps.get(v).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&V, i32)> {
        self.exps.iter().map(|(v, e)| (v, *e))
    }

    pub fn inverse(&self) -> Self {
        Monomial { exps: self.exps.iter().map(|(v, e)| (v.clone(), -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one();
        }
        Monomial { exps: self.exps.iter().map(|(v, e)| (v.clone(), e * k)).collect() }
    }

    pub fn div(&self, other: &Self) -> Self {
        self * &other.inverse()
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.exps.values().all(|e| *e >= 0)
    }

    pub fn map_vars<W: Var>(&self, f: impl Fn(&V) -> W) -> Monomial<W> {
        Monomial::from_pairs(self.exps.iter().map(|(v, e)| (f(v), *e)))
    }
}

impl<V: Var> Mul for &Monomial<V> {
    type Output = Monomial<V>;
    fn mul(self, rhs: &Monomial<V>) -> Monomial<V> {
        let mut out = self.clone();
        for (v, e) in &rhs.exps {
            out.mul_var(v.clone(), *e);
        }
        out
    }
}

impl<V: Var> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.exps {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Laurent<V: Var> {
    terms: BTreeMap<Monomial<V>, i64>,
}

impl<V: Var> Default for Laurent<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Var> From<Monomial<V>> for Laurent<V> {
    fn from(m: Monomial<V>) -> Self {
        Self::term(1, m)
    }
}

impl<V: Var> Laurent<V> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: V) -> Self {
        Self::term(1, Monomial::var(v))
    }

    pub fn term(c: i64, m: Monomial<V>) -> Self {
        let mut p = Self::zero();
        p.add_term(c, m);
        p
    }

    pub fn add_term(&mut self, c: i64, m: Monomial<V>) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, i64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial<V>> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial<V>) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// The single monomial of a one-term polynomial with coefficient 1.
    pub fn as_monomial(&self) -> Option<&Monomial<V>> {
        match self.terms.iter().next() {
            Some((m, 1)) if self.terms.len() == 1 => Some(m),
            _ => None,
        }
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| *c > 0)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero();
        for (m, k) in &self.terms {
            out.add_term(k * c, m.clone());
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial<V>) -> Self {
        Laurent { terms: self.terms.iter().map(|(n, c)| (n * m, *c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Ring homomorphism determined by the image of every variable. Negative
    /// exponents require the image to be a unit, i.e. a signed monomial.
    pub fn substitute<W: Var>(&self, image: impl Fn(&V) -> Laurent<W>) -> Result<Laurent<W>> {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            let mut t = Laurent::constant(*c);
            for (v, e) in m.iter() {
                let img = image(v);
                let factor = if e >= 0 {
                    img.pow(e as u32)
                } else {
                    let (sign, mono) = img.as_unit().ok_or(Error::InexactDivision)?;
                    Laurent::term(sign.pow(e.unsigned_abs()), mono.pow(e))
                };
                t = &t * &factor;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    fn as_unit(&self) -> Option<(i64, Monomial<V>)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        (c.abs() == 1).then(|| (*c, m.clone()))
    }

    /// Specialise each variable accepted by `pick` to the given integer.
    pub fn specialize(&self, pick: impl Fn(&V) -> Option<i64>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = *c;
            let mut rest = Monomial::one();
            for (v, e) in m.iter() {
                match pick(v) {
                    Some(val) if e >= 0 => coeff *= val.pow(e as u32),
                    Some(val) if val.abs() == 1 => coeff *= val.pow(e.unsigned_abs()),
                    _ => rest.mul_var(v.clone(), e),
                }
            }
            out.add_term(coeff, rest);
        }
        out
    }

    fn min_exponents(&self) -> BTreeMap<V, i32> {
        let mut mins: BTreeMap<V, i32> = BTreeMap::new();
        let vars: Vec<V> = self.terms.keys().flat_map(|m| m.exps.keys().cloned()).sorted().dedup().collect();
        for v in vars {
            let lo = self.terms.keys().map(|m| m.exponent(&v)).min().unwrap_or(0);
            mins.insert(v, lo);
        }
        mins
    }

    /// Exact division in the Laurent ring. Fails with `InexactDivision` when
    /// `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if let Some((m, c)) = divisor.terms.iter().next().filter(|_| divisor.terms.len() == 1) {
            let inv = m.inverse();
            let mut out = Self::zero();
            for (n, k) in &self.terms {
                if k % c != 0 {
                    return Err(Error::InexactDivision);
                }
                out.add_term(k / c, n * &inv);
            }
            return Ok(out);
        }
        // Clear monomial content so that both sides are polynomials without
        // monomial factors; the quotient is then a polynomial as well.
        let shift_a = Monomial { exps: self.min_exponents() }.inverse();
        let shift_b = Monomial { exps: divisor.min_exponents() }.inverse();
        let a = self.mul_monomial(&shift_a);
        let b = divisor.mul_monomial(&shift_b);

        let mut vars: Vec<V> = a.terms.keys().chain(b.terms.keys()).flat_map(|m| m.exps.keys().cloned()).collect();
        vars.sort();
        vars.dedup();
        let dense = |m: &Monomial<V>| -> Vec<i32> { vars.iter().map(|v| m.exponent(v)).collect() };
        let lead = |p: &Self| -> (Monomial<V>, i64) {
            let (m, c) = p.terms.iter().max_by(|x, y| dense(x.0).cmp(&dense(y.0))).expect("nonzero polynomial");
            (m.clone(), *c)
        };

        let (lb, cb) = lead(&b);
        let mut rem = a;
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let (lr, cr) = lead(&rem);
            let t = lr.div(&lb);
            if !t.is_polynomial() || cr % cb != 0 {
                return Err(Error::InexactDivision);
            }
            let q = Self::term(cr / cb, t);
            rem = &rem - &(&q * &b);
            quot = &quot + &q;
        }
        Ok(quot.mul_monomial(&shift_b.div(&shift_a)))
    }
}

impl<V: Var> Add for &Laurent<V> {
    type Output = Laurent<V>;
    fn add(self, rhs: &Laurent<V>) -> Laurent<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*c, m.clone());
        }
        out
    }
}

impl<V: Var> Sub for &Laurent<V> {
    type Output = Laurent<V>;
    fn sub(self, rhs: &Laurent<V>) -> Laurent<V> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(-*c, m.clone());
        }
        out
    }
}

impl<V: Var> Neg for &Laurent<V> {
    type Output = Laurent<V>;
    fn neg(self) -> Laurent<V> {
        self.scale(-1)
    }
}

impl<V: Var> Mul for &Laurent<V> {
    type Output = Laurent<V>;
    fn mul(self, rhs: &Laurent<V>) -> Laurent<V> {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(c * d, m * n);
            }
        }
        out
    }
}

impl<V: Var> fmt::Display for Laurent<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            if k > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            match (a, m.is_one()) {
                (_, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{m}")?,
                _ => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u8) -> Laurent<u8> {
        Laurent::var(i)
    }

    #[test]
    fn cancellation_keeps_canonical_form() {
        let p = &x(1) - &x(1);
        assert!(p.is_zero());
        assert_eq!(p, Laurent::zero());
    }

    #[test]
    fn exact_division_by_binomial() {
        let a = &x(1) + &x(2);
        let b = &x(1) - &x(2);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
    }

    #[test]
    fn exact_division_with_negative_exponents() {
        let a = &Laurent::term(1, Monomial::power(1u8, -2)) + &x(3);
        let b = &x(2) + &Laurent::term(2, Monomial::power(1u8, -1));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
    }

    #[test]
    fn inexact_division_is_reported() {
        let a = &x(1) + &Laurent::one();
        let b = &x(1) - &Laurent::one();
        assert_eq!(a.div_exact(&b), Err(Error::InexactDivision));
        assert_eq!(Laurent::<u8>::constant(3).div_exact(&Laurent::constant(2)), Err(Error::InexactDivision));
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let p = &Laurent::term(1, Monomial::power(1u8, -1)) + &x(2);
        let img = p.substitute(|v| if *v == 1 { Laurent::var(10u8) } else { x(11) * 2 }).unwrap();
        let expected = &Laurent::term(1, Monomial::power(10u8, -1)) + &Laurent::term(2, Monomial::var(11u8));
        assert_eq!(img, expected);
    }

    impl Mul<i64> for Laurent<u8> {
        type Output = Laurent<u8>;
        fn mul(self, rhs: i64) -> Laurent<u8> {
            self.scale(rhs)
        }
    }

    #[test]
    fn specialization_of_variables() {
        let p = &(&x(1) * &x(2)) + &x(2);
        let s = p.specialize(|v| (*v == 1).then_some(-1));
        assert!(s.is_zero());
    }
}
