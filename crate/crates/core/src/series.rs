//! Sparse multivariate power series truncated at a weighted total degree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};
use smallvec::SmallVec;
use thiserror::Error;

use crate::scalar::{CoeffRing, Rat};

pub type Exp = SmallVec<[u32; 4]>;

/// Products with more coefficient pairs than this are split across threads.
const PAR_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub weight: u32,
}

impl Var {
    pub fn new(name: &str, weight: u32) -> Self {
        assert!(weight >= 1, "series variables need positive weight");
        Var {
            name: name.to_string(),
            weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable lists differ")]
    VariableMismatch,
    #[error("truncation bounds differ ({0} vs {1})")]
    BoundMismatch(u32, u32),
    #[error("constant term {0} is not a unit")]
    NonUnitConstantTerm(String),
    #[error("inner series has nonzero constant term {0}")]
    NonzeroConstantTerm(String),
    #[error("series is not strict: linear coefficient is {0}")]
    NotStrict(String),
    #[error("division by {0} is undefined in the coefficient ring")]
    DivisionUndefined(i64),
    #[error("expected a univariate series, found {0} variables")]
    NotUnivariate(usize),
    #[error("bad series JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, PartialEq)]
pub struct MultiSeries<R> {
    vars: Vec<Var>,
    bound: u32,
    terms: BTreeMap<Exp, R>,
}

fn add_into<R: CoeffRing>(terms: &mut BTreeMap<Exp, R>, e: Exp, c: R) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add_ref(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl<R: CoeffRing> MultiSeries<R> {
    pub fn zero(vars: Vec<Var>, bound: u32) -> Self {
        MultiSeries {
            vars,
            bound,
            terms: BTreeMap::new(),
        }
    }

    /// Univariate zero series in `x` of weight one.
    pub fn zero_in(name: &str, bound: u32) -> Self {
        MultiSeries::zero(vec![Var::new(name, 1)], bound)
    }

    /// Series in the given variable names, all of weight one.
    pub fn zero_in_vars(names: &[&str], bound: u32) -> Self {
        MultiSeries::zero(names.iter().map(|n| Var::new(n, 1)).collect(), bound)
    }

    pub fn constant_like(&self, c: R) -> Self {
        let mut s = self.empty_like();
        s.add_term(Exp::from_elem(0, self.vars.len()), c);
        s
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(R::one())
    }

    pub fn empty_like(&self) -> Self {
        MultiSeries::zero(self.vars.clone(), self.bound)
    }

    /// The k-th variable as a series.
    pub fn var_like(&self, k: usize) -> Self {
        let mut e = Exp::from_elem(0, self.vars.len());
        e[k] = 1;
        let mut s = self.empty_like();
        s.add_term(e, R::one());
        s
    }

    /// Univariate series with the given coefficients `c_0, c_1, ...`.
    pub fn from_coeffs(name: &str, bound: u32, coeffs: &[R]) -> Self {
        let mut s = MultiSeries::zero_in(name, bound);
        for (n, c) in coeffs.iter().enumerate() {
            s.add_term(Exp::from_elem(n as u32, 1), c.clone());
        }
        s
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_of(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.vars).map(|(k, v)| k * v.weight).sum()
    }

    /// Adds `c` times the monomial `e`, silently dropping it beyond the bound.
    pub fn add_term(&mut self, e: Exp, c: R) {
        assert_eq!(e.len(), self.vars.len());
        if self.degree_of(&e) <= self.bound {
            add_into(&mut self.terms, e, c);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> R {
        self.terms.get(e).cloned().unwrap_or_else(R::zero)
    }

    /// Coefficient of `x^n` in a univariate series.
    pub fn coeff1(&self, n: u32) -> R {
        self.coeff(&[n])
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Exp::from_elem(0, self.vars.len()))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            return Err(SeriesError::VariableMismatch);
        }
        if self.bound != other.bound {
            return Err(SeriesError::BoundMismatch(self.bound, other.bound));
        }
        Ok(())
    }

    fn require_univariate(&self) -> Result<(), SeriesError> {
        if self.vars.len() != 1 {
            return Err(SeriesError::NotUnivariate(self.vars.len()));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other, false),
            ArithOp::Sub => self.add_unchecked(other, true),
            ArithOp::Mul => self.mul_unchecked(other),
        })
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            add_into(&mut out.terms, e.clone(), c);
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let rhs: Vec<(u32, &Exp, &R)> = {
            let mut v: Vec<_> = other
                .terms
                .iter()
                .map(|(e, c)| (other.degree_of(e), e, c))
                .collect();
            v.sort_by_key(|t| t.0);
            v
        };
        let lhs: Vec<(u32, &Exp, &R)> = self
            .terms
            .iter()
            .map(|(e, c)| (self.degree_of(e), e, c))
            .collect();
        let bound = self.bound;
        let partial = |chunk: &[(u32, &Exp, &R)]| {
            let mut acc: BTreeMap<Exp, R> = BTreeMap::new();
            for (d1, e1, c1) in chunk {
                for (d2, e2, c2) in &rhs {
                    if d1 + d2 > bound {
                        break;
                    }
                    let e: Exp = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                    add_into(&mut acc, e, c1.mul_ref(c2));
                }
            }
            acc
        };
        let terms = if lhs.len() * rhs.len() > PAR_THRESHOLD && lhs.len() > 1 {
            let chunk = lhs.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
            let parts: Vec<BTreeMap<Exp, R>> = lhs.par_chunks(chunk).map(partial).collect();
            let mut it = parts.into_iter();
            let mut acc = it.next().unwrap_or_default();
            for part in it {
                for (e, c) in part {
                    add_into(&mut acc, e, c);
                }
            }
            acc
        } else {
            partial(&lhs)
        };
        MultiSeries {
            vars: self.vars.clone(),
            bound,
            terms,
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = self.empty_like();
        for (e, a) in &self.terms {
            add_into(&mut out.terms, e.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn map_coeffs<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> MultiSeries<S> {
        let mut out = MultiSeries::zero(self.vars.clone(), self.bound);
        for (e, a) in &self.terms {
            add_into(&mut out.terms, e.clone(), f(a));
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Same series with a lower truncation bound.
    pub fn truncate(&self, bound: u32) -> Self {
        let mut out = MultiSeries::zero(self.vars.clone(), bound.min(self.bound));
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Same terms, reinterpreted with a different bound (terms beyond it are
    /// dropped).
    pub fn with_bound(&self, bound: u32) -> Self {
        let mut out = MultiSeries::zero(self.vars.clone(), bound);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Homogeneous component of weighted degree `d`.
    pub fn degree_part(&self, d: u32) -> Self {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            if self.degree_of(e) == d {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Multiplicative inverse by Newton iteration `r <- r (2 - a r)`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        let inv = c0
            .inverse()
            .ok_or_else(|| SeriesError::NonUnitConstantTerm(c0.to_string()))?;
        let two = self.constant_like(R::from_i64(2));
        let mut r = self.constant_like(inv);
        let mut correct = 1u32;
        while correct <= self.bound {
            r = &r * &(&two - &(self * &r));
            correct = correct.saturating_mul(2);
        }
        Ok(r)
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut f = e.clone();
                f[k] -= 1;
                add_into(&mut out.terms, f, c.mul_ref(&R::from_i64(e[k] as i64)));
            }
        }
        out
    }

    /// Term-wise antiderivative in variable `k` with zero constant.
    pub fn integrate(&self, k: usize) -> Result<Self, SeriesError> {
        let mut out = self.empty_like();
        for (e, c) in &self.terms {
            let n = e[k] as i64 + 1;
            let inv = R::from_i64(n)
                .inverse()
                .ok_or(SeriesError::DivisionUndefined(n))?;
            let mut f = e.clone();
            f[k] += 1;
            out.add_term(f, c.mul_ref(&inv));
        }
        Ok(out)
    }

    /// Divides by the k-th variable; terms not divisible by it are an error
    /// reported as a nonzero constant. The bound drops by the variable weight.
    pub fn div_by_var(&self, k: usize) -> Result<Self, SeriesError> {
        let w = self.vars[k].weight;
        let mut out = MultiSeries::zero(self.vars.clone(), self.bound.saturating_sub(w));
        for (e, c) in &self.terms {
            if e[k] == 0 {
                return Err(SeriesError::NonzeroConstantTerm(c.to_string()));
            }
            let mut f = e.clone();
            f[k] -= 1;
            out.terms.insert(f, c.clone());
        }
        Ok(out)
    }

    /// `outer(inner)` for univariate `outer`, by Horner's rule with
    /// truncation after every step. The result lives in the variables and
    /// bound of `inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, SeriesError> {
        outer.require_univariate()?;
        let c0 = inner.constant_term();
        if !c0.is_zero() {
            return Err(SeriesError::NonzeroConstantTerm(c0.to_string()));
        }
        let top = outer.terms.keys().map(|e| e[0]).max().unwrap_or(0);
        let mut acc = inner.constant_like(outer.coeff1(top));
        for n in (0..top).rev() {
            acc = &(&acc * inner) + &inner.constant_like(outer.coeff1(n));
        }
        Ok(acc)
    }

    /// Substitutes `images[k]` for the k-th variable. All images share one
    /// variable list and bound, which the result inherits.
    pub fn substitute(&self, images: &[Self]) -> Result<Self, SeriesError> {
        assert_eq!(images.len(), self.vars.len());
        let first = images.first().ok_or(SeriesError::VariableMismatch)?;
        for img in images {
            first.check_compatible(img)?;
            let c0 = img.constant_term();
            if !c0.is_zero() {
                return Err(SeriesError::NonzeroConstantTerm(c0.to_string()));
            }
        }
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(images.len());
        for (k, img) in images.iter().enumerate() {
            let top = self.terms.keys().map(|e| e[k]).max().unwrap_or(0);
            let mut row = vec![first.one_like()];
            for _ in 0..top {
                let next = row.last().unwrap() * img;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = first.empty_like();
        for (e, c) in &self.terms {
            let mut acc = first.constant_like(c.clone());
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    acc = &acc * &powers[k][ek as usize];
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    pub fn is_strict(&self) -> Result<(), SeriesError> {
        self.require_univariate()?;
        let c0 = self.coeff1(0);
        if !c0.is_zero() {
            return Err(SeriesError::NonzeroConstantTerm(c0.to_string()));
        }
        let c1 = self.coeff1(1);
        if !c1.is_one() {
            return Err(SeriesError::NotStrict(c1.to_string()));
        }
        Ok(())
    }

    /// Compositional inverse of a strict univariate series, by the fixed
    /// point iteration `h <- h - (g(h) - x)`, each step of which fixes at
    /// least one more coefficient.
    pub fn comp_inverse(&self) -> Result<Self, SeriesError> {
        self.is_strict()?;
        let x = self.var_like(0);
        let mut h = x.clone();
        for _ in 1..self.bound {
            let err = &Self::compose(self, &h)? - &x;
            if err.is_empty() {
                break;
            }
            h = &h - &err;
        }
        Ok(h)
    }
}

impl<R: CoeffRing> MultiSeries<R> {
    /// `c_n = [x^n] ((g/x)^{-(n+1)}) / (n+1)`, the `x^{n+1}` coefficient of
    /// the compositional inverse of the strict series `g`.
    pub fn residue_inverse_coeff(&self, n: u32) -> Result<R, SeriesError> {
        self.is_strict()?;
        let inv = R::from_i64(n as i64 + 1)
            .inverse()
            .ok_or(SeriesError::DivisionUndefined(n as i64 + 1))?;
        let q = self.div_by_var(0)?.with_bound(n);
        let r = q.reciprocal()?.pow(n + 1);
        Ok(r.coeff1(n).mul_ref(&inv))
    }
}

impl<R: CoeffRing> Add for &MultiSeries<R> {
    type Output = MultiSeries<R>;
    fn add(self, rhs: Self) -> MultiSeries<R> {
        self.arith(rhs, ArithOp::Add).expect("incompatible series")
    }
}

impl<R: CoeffRing> Sub for &MultiSeries<R> {
    type Output = MultiSeries<R>;
    fn sub(self, rhs: Self) -> MultiSeries<R> {
        self.arith(rhs, ArithOp::Sub).expect("incompatible series")
    }
}

impl<R: CoeffRing> Mul for &MultiSeries<R> {
    type Output = MultiSeries<R>;
    fn mul(self, rhs: Self) -> MultiSeries<R> {
        self.arith(rhs, ArithOp::Mul).expect("incompatible series")
    }
}

impl<R: CoeffRing> Neg for &MultiSeries<R> {
    type Output = MultiSeries<R>;
    fn neg(self) -> MultiSeries<R> {
        self.scale(&-R::one())
    }
}

impl<R: CoeffRing> fmt::Display for MultiSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| self.degree_of(a.0).cmp(&self.degree_of(b.0)).then(b.0.cmp(a.0)));
        for (k, (e, c)) in items.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(p, _)| **p > 0)
                .map(|(p, v)| if *p == 1 { v.name.clone() } else { format!("{}^{}", v.name, p) })
                .collect();
            let cs = c.to_string();
            let compound = cs.trim_start_matches('-').contains([' ', '+']);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(r) if !compound => (true, r.to_string()),
                _ => (false, cs.clone()),
            };
            let sep = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = match (mono.is_empty(), mag.as_str()) {
                (true, _) => mag.clone(),
                (false, "1") => mono.join("*"),
                (false, _) if compound => format!("({mag})*{}", mono.join("*")),
                (false, _) => format!("{mag}*{}", mono.join("*")),
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

impl<R: CoeffRing> fmt::Debug for MultiSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} | O({})]", self, self.bound + 1)
    }
}

pub fn series_arith<R: CoeffRing>(
    a: &MultiSeries<R>,
    b: &MultiSeries<R>,
    op: ArithOp,
) -> Result<MultiSeries<R>, SeriesError> {
    a.arith(b, op)
}

impl MultiSeries<Rat> {
    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.vars.iter().map(|v| json!({"name": v.name, "weight": v.weight})).collect::<Vec<_>>(),
            "bound": self.bound,
            "terms": self.terms.iter().map(|(e, c)| json!({
                "exp": e.to_vec(),
                "num": c.numer().to_string(),
                "den": c.denom().to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let bad = |m: &str| SeriesError::Json(m.to_string());
        let vars = v["vars"]
            .as_array()
            .ok_or_else(|| bad("vars"))?
            .iter()
            .map(|o| {
                let name = o["name"].as_str().ok_or_else(|| bad("var name"))?;
                let weight = o["weight"].as_u64().filter(|w| *w >= 1).ok_or_else(|| bad("var weight"))?;
                Ok(Var::new(name, weight as u32))
            })
            .collect::<Result<Vec<_>, SeriesError>>()?;
        let bound = v["bound"].as_u64().ok_or_else(|| bad("bound"))? as u32;
        let mut s = MultiSeries::zero(vars, bound);
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let exp: Exp = t["exp"]
                .as_array()
                .ok_or_else(|| bad("exp"))?
                .iter()
                .map(|k| k.as_u64().map(|k| k as u32).ok_or_else(|| bad("exponent")))
                .collect::<Result<_, _>>()?;
            if exp.len() != s.nvars() {
                return Err(bad("exponent length"));
            }
            if s.degree_of(&exp) > bound {
                return Err(bad("term beyond bound"));
            }
            let num: BigInt = t["num"].as_str().and_then(|n| n.parse().ok()).ok_or_else(|| bad("num"))?;
            let den: BigInt = t["den"].as_str().and_then(|n| n.parse().ok()).ok_or_else(|| bad("den"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            s.add_term(exp, Rat::new(num, den));
        }
        Ok(s)
    }
}
