//! Commutative polynomials in named, indexed symbols.
//!
//! `Poly<R>` is itself a [`CoeffRing`], so series over `Q[v, b1, b2, ...]` are
//! simply series with `Poly<Rat>` coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::scalar::{CoeffRing, Rat};

/// An indeterminate such as `v`, `b3`, `a21` or `d5`.
///
/// `i` and `j` are the indices; unused indices are zero. Ordering is by name
/// first, which fixes the monomial order used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: char,
    pub i: u16,
    pub j: u16,
}

impl Symbol {
    pub const fn new(name: char, i: u16, j: u16) -> Self {
        Symbol { name, i, j }
    }

    pub const fn plain(name: char) -> Self {
        Symbol::new(name, 0, 0)
    }

    pub const fn indexed(name: char, i: u16) -> Self {
        Symbol::new(name, i, 0)
    }

    /// `a_{ij}` with the indices sorted, encoding the symmetry `a_ij = a_ji`.
    pub fn a(i: u16, j: u16) -> Self {
        Symbol::new('a', i.min(j), i.max(j))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.i, self.j) {
            (0, 0) => write!(f, "{}", self.name),
            (i, 0) => write!(f, "{}{}", self.name, i),
            (i, j) if i < 10 && j < 10 => write!(f, "{}{}{}", self.name, i, j),
            (i, j) => write!(f, "{}_{}_{}", self.name, i, j),
        }
    }
}

/// Sorted list of `(symbol, exponent)` pairs with positive exponents.
pub type Monomial = SmallVec<[(Symbol, u32); 4]>;

pub fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Monomial::with_capacity(a.len() + b.len());
    let (mut p, mut q) = (0, 0);
    while p < a.len() && q < b.len() {
        match a[p].0.cmp(&b[q].0) {
            std::cmp::Ordering::Less => {
                out.push(a[p]);
                p += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[q]);
                q += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[p].0, a[p].1 + b[q].1));
                p += 1;
                q += 1;
            }
        }
    }
    out.extend_from_slice(&a[p..]);
    out.extend_from_slice(&b[q..]);
    out
}

pub fn mono_degree(m: &Monomial, weight: impl Fn(&Symbol) -> i64) -> i64 {
    m.iter().map(|(s, e)| weight(s) * *e as i64).sum()
}

fn mono_string(m: &Monomial) -> String {
    m.iter()
        .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Homotopy grading of `K_*MU`: `v` has weight 2, `u = 1/v` weight -2,
/// `b_i` and `d_i` weight `2i`, and Lazard coefficients `a_ij` weight
/// `2(i+j-1)`.
pub fn lazard_weight(s: &Symbol) -> i64 {
    match s.name {
        'v' => 2,
        'u' => -2,
        'a' => 2 * (s.i as i64 + s.j as i64 - 1),
        _ => 2 * s.i as i64,
    }
}

/// Grading of the 2-structure coefficients `a_ij = f_*(beta_i x beta_j)`:
/// `a_ij` has weight `2(i+j)`, and `u = 1/v` weight 2 so that
/// `x + y - u x y` is homogeneous when `x` has weight -2.
pub fn homology_weight(s: &Symbol) -> i64 {
    match s.name {
        'a' => 2 * (s.i as i64 + s.j as i64),
        'v' => -2,
        'u' => 2,
        _ => 2 * s.i as i64,
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: CoeffRing> Poly<R> {
    pub fn new() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: R) -> Self {
        let mut p = Poly::new();
        p.add_term(Monomial::new(), c);
        p
    }

    pub fn symbol(s: Symbol) -> Self {
        Poly::monomial(Monomial::from_slice(&[(s, 1)]), R::one())
    }

    pub fn monomial(m: Monomial, c: R) -> Self {
        let mut p = Poly::new();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Monomial::new())
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Poly::new();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn map_coeffs<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        let mut out = Poly::new();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), f(a));
        }
        out
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut s: Vec<Symbol> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(s, _)| *s))
            .collect();
        s.sort();
        s.dedup();
        s
    }

    /// Set of weighted degrees occurring in the polynomial.
    pub fn degrees(&self, weight: impl Fn(&Symbol) -> i64 + Copy) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|m| mono_degree(m, weight)).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self, weight: impl Fn(&Symbol) -> i64 + Copy) -> bool {
        self.degrees(weight).len() <= 1
    }

    pub fn degree_part(&self, d: i64, weight: impl Fn(&Symbol) -> i64 + Copy) -> Self {
        let mut out = Poly::new();
        for (m, a) in &self.terms {
            if mono_degree(m, weight) == d {
                out.add_term(m.clone(), a.clone());
            }
        }
        out
    }

    /// Ring map determined by the images of the symbols; symbols without an
    /// image are kept.
    pub fn substitute(&self, image: &impl Fn(&Symbol) -> Option<Poly<R>>) -> Self {
        let mut cache: BTreeMap<(Symbol, u32), Poly<R>> = BTreeMap::new();
        let mut out = Poly::new();
        for (m, a) in &self.terms {
            let mut acc = Poly::constant(a.clone());
            for &(s, e) in m.iter() {
                let f = match cache.get(&(s, e)) {
                    Some(f) => f.clone(),
                    None => {
                        let base = image(&s).unwrap_or_else(|| Poly::symbol(s));
                        let f = base.pow(e);
                        cache.insert((s, e), f.clone());
                        f
                    }
                };
                acc = acc.mul_ref(&f);
            }
            out = out.add_ref(&acc);
        }
        out
    }

    /// Substitutes a constant for every occurrence of one symbol.
    pub fn specialize(&self, s: Symbol, value: &R) -> Self {
        self.substitute(&|t: &Symbol| (*t == s).then(|| Poly::constant(value.clone())))
    }

    /// Drops every term containing a symbol for which `pred` holds.
    pub fn drop_terms_with(&self, pred: impl Fn(&Symbol) -> bool) -> Self {
        let mut out = Poly::new();
        for (m, a) in &self.terms {
            if !m.iter().any(|(s, _)| pred(s)) {
                out.add_term(m.clone(), a.clone());
            }
        }
        out
    }
}

impl<R: CoeffRing> Default for Poly<R> {
    fn default() -> Self {
        Poly::new()
    }
}

impl<R: CoeffRing> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: Poly<R>) -> Poly<R> {
        let (mut big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        for (m, c) in small.terms {
            big.add_term(m, c);
        }
        big
    }
}

impl<R: CoeffRing> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: Poly<R>) -> Poly<R> {
        self + (-rhs)
    }
}

impl<R: CoeffRing> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<R: CoeffRing> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Poly<R>) -> Poly<R> {
        self.mul_ref(&rhs)
    }
}

impl<R: CoeffRing> Zero for Poly<R> {
    fn zero() -> Self {
        Poly::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: CoeffRing> One for Poly<R> {
    fn one() -> Self {
        Poly::constant(R::one())
    }
}

impl<R: CoeffRing> CoeffRing for Poly<R> {
    fn from_bigint(n: &BigInt) -> Self {
        Poly::constant(R::from_bigint(n))
    }

    fn inverse(&self) -> Option<Self> {
        if self.len() == 1 {
            let c = self.terms.get(&Monomial::new())?;
            return c.inverse().map(Poly::constant);
        }
        None
    }

    fn from_rat(q: &Rat) -> Option<Self> {
        R::from_rat(q).map(Poly::constant)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = Poly::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(mono_mul(m1, m2), c1.mul_ref(c2));
            }
        }
        out
    }
}

impl<R: CoeffRing> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // total degree first, then the map order
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| m.iter().map(|(_, e)| *e).sum::<u32>());
        for (k, (m, c)) in items.into_iter().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            let sign = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = if m.is_empty() {
                mag
            } else if mag == "1" {
                mono_string(m)
            } else if mag.contains(' ') {
                format!("({mag})*{}", mono_string(m))
            } else {
                format!("{mag}*{}", mono_string(m))
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

impl<R: CoeffRing> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parses a symbol token: a letter followed by an optional index. Two-digit
/// indices on `a` denote `a_ij`.
pub fn parse_symbol(tok: &str) -> Option<Symbol> {
    let mut chars = tok.chars();
    let name = chars.next().filter(|c| c.is_ascii_alphabetic())?;
    let rest: &str = chars.as_str();
    if rest.is_empty() {
        return Some(Symbol::plain(name));
    }
    if let Some((i, j)) = rest.strip_prefix('_').and_then(|r| r.split_once('_')) {
        return Some(Symbol::new(name, i.parse().ok()?, j.parse().ok()?));
    }
    if !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if name == 'a' && rest.len() == 2 {
        let d: Vec<u16> = rest.bytes().map(|b| (b - b'0') as u16).collect();
        return Some(Symbol::new('a', d[0], d[1]));
    }
    Some(Symbol::indexed(name, rest.parse().ok()?))
}

impl FromStr for Poly<Rat> {
    type Err = ParseError;

    /// Grammar: sums of terms `coef*sym^e*sym...`, where the coefficient is an
    /// optional integer or fraction `p/q`. `a11` is `a_{1,1}` and `a12` is
    /// normalized to `a_{1,2} = a_{2,1}`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bytes = src.as_bytes();
        let err = |pos: usize, msg: &str| ParseError {
            pos,
            msg: msg.to_string(),
        };
        if bytes.is_empty() {
            return Err(err(0, "empty input"));
        }
        let mut out = Poly::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = BigInt::one();
            while pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let end = src[pos..]
                .find(['+', '-'])
                .map(|k| pos + k)
                .unwrap_or(bytes.len());
            let term = &src[pos..end];
            if term.is_empty() {
                return Err(err(pos, "empty term"));
            }
            let mut coef = Rat::from_integer(sign.clone());
            let mut mono = Monomial::new();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err(pos, "empty factor"));
                }
                if factor.as_bytes()[0].is_ascii_digit() {
                    let q = match factor.split_once('/') {
                        Some((n, d)) => {
                            let n: BigInt = n.parse().map_err(|_| err(pos, factor))?;
                            let d: BigInt = d.parse().map_err(|_| err(pos, factor))?;
                            if d.is_zero() {
                                return Err(err(pos, "zero denominator"));
                            }
                            Rat::new(n, d)
                        }
                        None => Rat::from_integer(factor.parse().map_err(|_| err(pos, factor))?),
                    };
                    coef *= q;
                } else {
                    let (name, e) = match factor.split_once('^') {
                        Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err(pos, factor))?),
                        None => (factor, 1),
                    };
                    let mut sym = parse_symbol(name).ok_or_else(|| err(pos, name))?;
                    if sym.name == 'a' {
                        sym = Symbol::a(sym.i, sym.j);
                    }
                    mono = mono_mul(&mono, &Monomial::from_slice(&[(sym, e)]));
                }
            }
            out.add_term(mono, coef);
            pos = end;
        }
        Ok(out)
    }
}

/// Convenience parser for literals in code and tests; panics on bad input.
pub fn p(s: &str) -> Poly<Rat> {
    s.parse().unwrap_or_else(|e| panic!("{e}: {s}"))
}
