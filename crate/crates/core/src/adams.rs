//! Adams operations on K-homology.
//!
//! `psi^{k^-1}` acts on `K_* CP^inf` through the Kronecker pairing with
//! `psi^k(x^j) = (1 - (1 - x)^k)^j`. On `K_* BSU` the images of
//! `a_ij = f_*(beta_i (x) beta_j)` are rewritten as polynomials in the
//! generators `d_k = sum_i n_k^i a_{i,k-i}` modulo the universal 2-structure
//! relations. Those relations are homogenized with the symbol `u = 1/v`
//! (weight 2, `a_ij` weight `2(i+j)`); printed forms set `u = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::linalg::{solve_any, solve_columns, Echelon};
use crate::poly::{homology_weight, mono_degree, Monomial, Poly, Symbol};
use crate::scalar::{rat_to_gf2, rat_to_padic, CoeffRing, Gf2, Padic2, Rat, ScalarError};
use crate::series::{MultiSeries, SeriesError};

pub type APoly = Poly<Rat>;
pub type DPoly<R = Rat> = Poly<R>;
/// `k -> psi^{3^-1} d_k`.
pub type PsiTable<R> = BTreeMap<u32, DPoly<R>>;

pub const U: Symbol = Symbol::plain('u');

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdamsError {
    #[error("no tabulated n_k^i for k = {0}; use extended-gcd mode")]
    UnsupportedK(u32),
    #[error("the relation set does not span the graded piece of weight {degree}")]
    NotReducible { degree: i64 },
    #[error("d-monomial {monomial} is dependent on the others modulo relations in weight {degree}")]
    Degenerate { degree: i64, monomial: String },
    #[error("expression is not homogeneous")]
    Inhomogeneous,
    #[error("psi table has no entry for d{0}")]
    InsufficientTable(u32),
    #[error("bootstrap correction is unsolvable at stage {stage}")]
    LiftObstruction { stage: u32 },
    #[error("class is not fixed modulo 2")]
    NotFixedMod2,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed d-polynomial JSON: {0}")]
    Json(String),
}

/// Choice of complex orientation for the line bundle `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `x = 1 - L`, so `psi^k x = 1 - (1 - x)^k`.
    #[default]
    OneMinusL,
    /// `x = L - 1`, so `psi^k x = (1 + x)^k - 1`.
    LMinusOne,
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// The `k`-series `[k](x)` of the multiplicative law in the given
/// orientation, truncated above `x^n`.
pub fn k_series(k: u32, n: usize, orient: Orientation) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); n + 1];
    for (i, c) in s.iter_mut().enumerate().skip(1) {
        let b = binom(k as u64, i as u64);
        *c = match orient {
            Orientation::OneMinusL if i % 2 == 0 => -b,
            _ => b,
        };
    }
    s
}

/// `M[i][j] = <psi^k x^j, beta_i> = [x^i] [k](x)^j` for `0 <= i, j <= n`.
pub fn psi_matrix(k: u32, n: usize, orient: Orientation) -> Vec<Vec<BigInt>> {
    let s = k_series(k, n, orient);
    let mut cols = Vec::with_capacity(n + 1);
    let mut pw = vec![BigInt::zero(); n + 1];
    pw[0] = BigInt::one();
    for _ in 0..=n {
        cols.push(pw.clone());
        pw = int_poly_mul(&pw, &s, n);
    }
    (0..=n).map(|i| (0..=n).map(|j| cols[j][i].clone()).collect()).collect()
}

/// `<psi^3 x^j, beta_i> = (-1)^{i-j} sum_{s+t=i-j} C(j,s) C(s,t) 3^{j-t}`.
pub fn psi3_closed(i: u32, j: u32) -> BigInt {
    if i < j {
        return BigInt::zero();
    }
    let d = i - j;
    let mut acc = BigInt::zero();
    for s in 0..=d {
        let t = d - s;
        if t > s || s > j {
            continue;
        }
        acc += binom(j as u64, s as u64) * binom(s as u64, t as u64) * BigInt::from(3).pow(j - t);
    }
    if d % 2 == 1 {
        -acc
    } else {
        acc
    }
}

/// `sum_i lambda_i beta_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaElt<R> {
    coeffs: Vec<R>,
}

impl<R: CoeffRing> BetaElt<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BetaElt { coeffs }
    }

    pub fn basis(i: usize) -> Self {
        let mut c = vec![R::zero(); i + 1];
        c[i] = R::one();
        BetaElt { coeffs: c }
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn map_coeffs<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> BetaElt<S> {
        BetaElt::new(self.coeffs.iter().map(f).collect())
    }

    /// Applies a matrix acting on basis vectors, `beta_i -> sum_j m[i][j] beta_j`.
    pub fn apply(&self, m: &[Vec<BigInt>]) -> Self {
        let n = m.len();
        let mut out = vec![R::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, e) in m[i].iter().enumerate() {
                if !e.is_zero() {
                    out[j] = out[j].add_ref(&c.mul_ref(&R::from_bigint(e)));
                }
            }
        }
        BetaElt::new(out)
    }
}

fn signed_terms<T: fmt::Display>(items: impl Iterator<Item = (String, T)>) -> String {
    let mut out = String::new();
    for (name, c) in items {
        let cs = c.to_string();
        let (neg, mag) = match cs.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, cs),
        };
        let sign = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        let body = match (name.is_empty(), mag.as_str()) {
            (true, _) => mag,
            (false, "1") => name,
            (false, _) => format!("{mag} {name}"),
        };
        out.push_str(sign);
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<R: CoeffRing> fmt::Display for BetaElt<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (format!("b{i}"), c));
        f.write_str(&signed_terms(items))
    }
}

/// `psi^{k^-1} beta_i = sum_j <psi^k x^j, beta_i> beta_j`.
pub fn psi_inv_beta(k: u32, i: usize, n: usize) -> BetaElt<BigInt> {
    assert!(i <= n, "index beyond bound");
    let m = psi_matrix(k, n, Orientation::OneMinusL);
    BetaElt::basis(i).apply(&m)
}

/// `sum lambda_ij beta_i (x) beta_j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BetaTensor<R> {
    terms: BTreeMap<(usize, usize), R>,
}

impl<R: CoeffRing> BetaTensor<R> {
    pub fn outer(a: &BetaElt<R>, b: &BetaElt<R>) -> Self {
        let mut terms = BTreeMap::new();
        for (i, x) in a.coeffs().iter().enumerate() {
            for (j, y) in b.coeffs().iter().enumerate() {
                let c = x.mul_ref(y);
                if !c.is_zero() {
                    terms.insert((i, j), c);
                }
            }
        }
        BetaTensor { terms }
    }

    pub fn coeff(&self, i: usize, j: usize) -> R {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(R::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &R)> {
        self.terms.iter()
    }

    pub fn map_coeffs<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> BetaTensor<S> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        BetaTensor { terms }
    }

    /// Image under `f_*`: `beta_i (x) beta_j -> a_ij`.
    pub fn push_forward(&self) -> Poly<R> {
        let mut p = Poly::new();
        for ((i, j), c) in &self.terms {
            p = p + a_poly::<R>(*i as u16, *j as u16).scale(c);
        }
        p
    }
}

pub fn psi_inv_tensor(k: u32, i: usize, j: usize, n: usize) -> BetaTensor<BigInt> {
    BetaTensor::outer(&psi_inv_beta(k, i, n), &psi_inv_beta(k, j, n))
}

/// Rows `1..=n` of `psi^{3^-1}` reduced mod 2: row `i` lists the `j` with odd
/// coefficient.
pub fn psi3_mod2_rows(n: usize) -> Vec<Vec<usize>> {
    let m = psi_matrix(3, n, Orientation::OneMinusL);
    (1..=n)
        .map(|i| (1..=n).filter(|&j| m[i][j].is_odd()).collect())
        .collect()
}

/// How the integers `n_k^i` with `sum_i n_k^i C(k,i) = gcd_i C(k,i)` are
/// chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NkiMode {
    #[default]
    Paper,
    ExtendedGcd,
}

impl FromStr for NkiMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(NkiMode::Paper),
            "extended-gcd" | "egcd" => Ok(NkiMode::ExtendedGcd),
            _ => Err(format!("unknown n_k mode {s:?}")),
        }
    }
}

impl fmt::Display for NkiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NkiMode::Paper => "paper",
            NkiMode::ExtendedGcd => "extended-gcd",
        })
    }
}

const NKI_TABLE: [&[i64]; 9] = [
    &[1],
    &[1, 0],
    &[-1, 1, 0],
    &[1, 0, 0, 0],
    &[1, 1, -1, 0, 0],
    &[1, 0, 0, 0, 0, 0],
    &[9, 0, 0, -1, 0, 0, 0],
    &[-9, 0, 1, 0, 0, 0, 0, 0],
    &[1, 11, 0, 0, -2, 0, 0, 0, 0],
];

/// `gcd{C(k,1), ..., C(k,k-1)}`.
pub fn binomial_gcd(k: u32) -> BigInt {
    (1..k).fold(BigInt::zero(), |g, i| g.gcd(&binom(k as u64, i as u64)))
}

/// `(n_k^1, ..., n_k^{k-1})`.
pub fn nki_coeffs(k: u32, mode: NkiMode) -> Result<Vec<BigInt>, AdamsError> {
    if k < 2 {
        return Err(AdamsError::UnsupportedK(k));
    }
    match mode {
        NkiMode::Paper => NKI_TABLE
            .get(k as usize - 2)
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .ok_or(AdamsError::UnsupportedK(k)),
        NkiMode::ExtendedGcd => {
            let mut v = vec![BigInt::zero(); k as usize - 1];
            v[0] = BigInt::one();
            let mut g = BigInt::from(k);
            let target = binomial_gcd(k);
            for i in 2..k {
                if g == target {
                    break;
                }
                let c = binom(k as u64, i as u64);
                let e = g.extended_gcd(&c);
                if e.gcd == g {
                    continue;
                }
                for x in v.iter_mut() {
                    *x *= &e.x;
                }
                v[i as usize - 1] = e.y;
                g = e.gcd;
            }
            if g.is_negative() {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
            Ok(v)
        }
    }
}

/// `n_k^i` for every `k`, with the tabulated choice where it exists and extended
/// gcd beyond.
#[derive(Debug, Clone, Copy, Default)]
pub struct NkiTable {
    pub mode: NkiMode,
}

impl NkiTable {
    pub fn new(mode: NkiMode) -> Self {
        NkiTable { mode }
    }

    pub fn coeffs(&self, k: u32) -> Vec<BigInt> {
        nki_coeffs(k, self.mode)
            .or_else(|_| nki_coeffs(k, NkiMode::ExtendedGcd))
            .expect("k >= 2")
    }
}

/// `a_ij` with `a_00 = 1` and `a_0i = a_i0 = 0` applied.
pub fn a_poly<R: CoeffRing>(i: u16, j: u16) -> Poly<R> {
    match (i, j) {
        (0, 0) => Poly::one(),
        (0, _) | (_, 0) => Poly::zero(),
        _ => Poly::symbol(Symbol::a(i, j)),
    }
}

pub fn d_symbol(k: u32) -> Symbol {
    Symbol::indexed('d', k as u16)
}

/// `d_k` written in the `a_ij`.
pub fn dk_apoly(k: u32, nki: &NkiTable) -> APoly {
    let mut p = APoly::zero();
    for (i, n) in nki.coeffs(k).iter().enumerate() {
        if !n.is_zero() {
            let i = i as u32 + 1;
            p = p + a_poly::<Rat>(i as u16, (k - i) as u16).scale(&Rat::from_integer(n.clone()));
        }
    }
    p
}

fn weight_units(s: &Symbol) -> i64 {
    homology_weight(s) / 2
}

/// `psi^{k^-1} a_ij = sum_{m,n} M[i][m] M[j][n] u^{i+j-m-n} a_mn`.
pub fn psi_a(k: u32, i: u16, j: u16) -> APoly {
    let n = i.max(j) as usize;
    let m = psi_matrix(k, n, Orientation::OneMinusL);
    let mut out = APoly::zero();
    for p in 0..=i as usize {
        for q in 0..=j as usize {
            let c = &m[i as usize][p] * &m[j as usize][q];
            if c.is_zero() {
                continue;
            }
            let shift = (i as usize + j as usize - p - q) as u32;
            let term = a_poly::<Rat>(p as u16, q as u16) * upow(shift);
            out = out + term.scale(&Rat::from_integer(c));
        }
    }
    out
}

pub(crate) fn upow(e: u32) -> APoly {
    if e == 0 {
        return APoly::one();
    }
    let mut m = Monomial::new();
    m.push((U, e));
    APoly::monomial(m, Rat::one())
}

/// Applies `psi^{k^-1}` to a polynomial in the `a_ij`.
pub fn psi_apoly(k: u32, p: &APoly) -> APoly {
    p.substitute(&|s: &Symbol| (s.name == 'a').then(|| psi_a(k, s.i, s.j)))
}

/// A relation `poly = 0` read off the coefficient of `x^a y^b z^c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub monomial: [u32; 3],
    pub poly: APoly,
}

impl Relation {
    /// Weight in units of 2.
    pub fn weight(&self) -> u32 {
        self.monomial.iter().sum()
    }

    /// The relation with `u = 1`.
    pub fn specialized(&self) -> APoly {
        self.poly.specialize(U, &Rat::one())
    }

    pub fn monomial_name(&self) -> String {
        let mut s = String::new();
        for (v, e) in ["x", "y", "z"].iter().zip(self.monomial) {
            match e {
                0 => {}
                1 => s.push_str(v),
                _ => s.push_str(&format!("{v}^{e}")),
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationSet {
    pub bound: u32,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn at(&self, monomial: [u32; 3]) -> Option<&Relation> {
        self.relations.iter().find(|r| r.monomial == monomial)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

/// Equality up to an overall sign.
pub fn same_up_to_sign(p: &APoly, q: &APoly) -> bool {
    p == q || *p == -q.clone()
}

/// The primitive integral multiple of `p`: denominators cleared and the
/// content divided out.
pub fn primitive(p: &APoly) -> APoly {
    let den = p.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let num = p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(&(c.numer() * &den / c.denom())));
    if num.is_zero() {
        return p.clone();
    }
    p.scale(&Rat::new(den, num))
}

/// Equality of relations after setting `u = 1`, up to a nonzero rational
/// multiple.
pub fn same_relation(p: &APoly, q: &APoly) -> bool {
    let one = Rat::one();
    same_up_to_sign(&primitive(&p.specialize(U, &one)), &primitive(&q.specialize(U, &one)))
}

fn two_structure(s: &MultiSeries<APoly>, t: &MultiSeries<APoly>, n: u32) -> Result<MultiSeries<APoly>, SeriesError> {
    let mut sp = vec![s.one_like()];
    let mut tp = vec![t.one_like()];
    for k in 1..n {
        sp.push(&sp[k as usize - 1] * s);
        tp.push(&tp[k as usize - 1] * t);
    }
    let mut f = s.one_like();
    for i in 1..n {
        for j in 1..=n - i {
            let term = (&sp[i as usize] * &tp[j as usize]).scale(&a_poly(i as u16, j as u16));
            f = f.arith(&term, crate::series::ArithOp::Add)?;
        }
    }
    Ok(f)
}

fn gm(s: &MultiSeries<APoly>, t: &MultiSeries<APoly>) -> MultiSeries<APoly> {
    let st = (s * t).scale(&APoly::symbol(U));
    &(s + t) - &st
}

/// Coefficients of `f(x,y) f(x +G y, z) - f(x, y +G z) f(y,z)` for
/// `f = 1 + sum a_ij x^i y^j` and `x +G y = x + y - u x y`, through total
/// degree `n`.
pub fn gen_2structure_relations(n: u32) -> Result<RelationSet, AdamsError> {
    let s3 = MultiSeries::<APoly>::zero_in_vars(&["x", "y", "z"], n);
    let (x, y, z) = (s3.var_like(0), s3.var_like(1), s3.var_like(2));
    let gxy = gm(&x, &y);
    let gyz = gm(&y, &z);
    let (lhs, rhs) = rayon::join(
        || -> Result<_, SeriesError> { Ok(&two_structure(&x, &y, n)? * &two_structure(&gxy, &z, n)?) },
        || -> Result<_, SeriesError> { Ok(&two_structure(&x, &gyz, n)? * &two_structure(&y, &z, n)?) },
    );
    let diff = &lhs? - &rhs?;
    let mut relations: Vec<Relation> = diff
        .terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| Relation {
            monomial: [e[0], e[1], e[2]],
            poly: c.clone(),
        })
        .collect();
    relations.sort_by_key(|r| (r.weight(), r.monomial));
    Ok(RelationSet { bound: n, relations })
}

/// Coefficients `a_ij` of the coboundary `g(x) g(y) / g(x +G y)` at `u = u0`,
/// for `g = 1 + g_1 x + g_2 x^2 + ...`.
pub fn coboundary_coeffs(g: &[Rat], u0: &Rat, n: u32) -> Result<BTreeMap<(u16, u16), Rat>, AdamsError> {
    let s2 = MultiSeries::<Rat>::zero_in_vars(&["x", "y"], n);
    let (x, y) = (s2.var_like(0), s2.var_like(1));
    let mut coeffs = vec![Rat::one()];
    coeffs.extend_from_slice(g);
    let gs = MultiSeries::from_coeffs("t", n, &coeffs);
    let sum = &(&x + &y) - &(&x * &y).scale(u0);
    let gx = MultiSeries::compose(&gs, &x)?;
    let gy = MultiSeries::compose(&gs, &y)?;
    let gsum = MultiSeries::compose(&gs, &sum)?;
    let f = &(&gx * &gy) * &gsum.reciprocal()?;
    let mut out = BTreeMap::new();
    for (e, c) in f.terms() {
        if e[0] >= 1 && e[1] >= 1 && e[0] <= e[1] {
            out.insert((e[0] as u16, e[1] as u16), c.clone());
        }
    }
    Ok(out)
}

/// Evaluates an `a`-polynomial at numeric `a_ij` and `u`.
pub fn evaluate_apoly(p: &APoly, a: &BTreeMap<(u16, u16), Rat>, u0: &Rat) -> Rat {
    let v = p.substitute(&|s: &Symbol| match s.name {
        'a' => Some(APoly::constant(a.get(&(s.i, s.j)).cloned().unwrap_or_default())),
        'u' => Some(APoly::constant(u0.clone())),
        _ => None,
    });
    v.constant_term()
}

/// Monomials in the given weighted symbols of total weight exactly `w`.
fn monomials_of_weight(symbols: &[(Symbol, i64)], w: i64) -> Vec<Monomial> {
    fn rec(symbols: &[(Symbol, i64)], idx: usize, w: i64, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if w == 0 {
            out.push(cur.clone());
            return;
        }
        if idx == symbols.len() {
            return;
        }
        let (s, sw) = symbols[idx];
        let mut e = 0;
        while e as i64 * sw <= w {
            if e > 0 {
                cur.push((s, e));
            }
            rec(symbols, idx + 1, w - e as i64 * sw, cur, out);
            if e > 0 {
                cur.pop();
            }
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(symbols, 0, w, &mut Monomial::new(), &mut out);
    out
}

/// Partitions of numbers `<= w` into parts `>= 2`, each as a list of parts.
fn d_partitions(w: u32) -> Vec<Vec<u32>> {
    fn rec(w: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for k in (2..=max.min(w)).rev() {
            cur.push(k);
            rec(w - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, w, &mut Vec::new(), &mut out);
    out
}

fn d_monomial_poly<R: CoeffRing>(parts: &[u32]) -> Poly<R> {
    parts.iter().fold(Poly::one(), |acc, k| acc * Poly::symbol(d_symbol(*k)))
}

struct GradedPiece {
    index: BTreeMap<Monomial, usize>,
    ideal: Echelon<Rat>,
    dparts: Vec<Vec<u32>>,
    dforms: Vec<Vec<Rat>>,
}

impl GradedPiece {
    fn vector(&self, p: &APoly) -> Option<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.index.len()];
        for (m, c) in p.terms() {
            v[*self.index.get(m)?] += c;
        }
        Some(v)
    }
}

/// Rewrites `a`-polynomials as `d`-polynomials modulo a relation set, one
/// graded piece at a time.
pub struct Reducer {
    rels: RelationSet,
    nki: NkiTable,
    pieces: std::sync::Mutex<BTreeMap<i64, std::sync::Arc<GradedPiece>>>,
}

impl Reducer {
    pub fn new(rels: RelationSet, nki: NkiTable) -> Self {
        Reducer {
            rels,
            nki,
            pieces: Default::default(),
        }
    }

    pub fn relations(&self) -> &RelationSet {
        &self.rels
    }

    pub fn nki(&self) -> &NkiTable {
        &self.nki
    }

    fn piece(&self, w: i64) -> Result<std::sync::Arc<GradedPiece>, AdamsError> {
        if let Some(p) = self.pieces.lock().expect("poisoned").get(&w) {
            return Ok(p.clone());
        }
        let mut symbols = Vec::new();
        for i in 1..=w as u16 {
            for j in i..=(w as u16).saturating_sub(i) {
                symbols.push((Symbol::a(i, j), (i + j) as i64));
            }
        }
        symbols.push((U, 1));
        symbols.sort();
        let by_weight: Vec<Vec<Monomial>> = (0..=w).map(|k| monomials_of_weight(&symbols, k)).collect();
        let index: BTreeMap<Monomial, usize> = by_weight[w as usize]
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut piece = GradedPiece {
            index,
            ideal: Echelon::new(by_weight[w as usize].len()),
            dparts: Vec::new(),
            dforms: Vec::new(),
        };
        let gens: Vec<APoly> = self
            .rels
            .relations
            .iter()
            .filter(|r| r.weight() as i64 <= w)
            .flat_map(|r| {
                by_weight[(w - r.weight() as i64) as usize]
                    .iter()
                    .map(move |m| r.poly.clone() * APoly::monomial(m.clone(), Rat::one()))
            })
            .collect();
        let vecs: Vec<Vec<Rat>> = gens
            .par_iter()
            .map(|g| piece.vector(g).expect("relation monomials lie in the piece"))
            .collect();
        for v in vecs {
            piece.ideal.insert(v);
        }
        for parts in d_partitions(w as u32) {
            let wd: u32 = parts.iter().sum();
            let mut p = upow(w as u32 - wd);
            for k in &parts {
                p = p * dk_apoly(*k, &self.nki);
            }
            let v = piece.vector(&p).expect("d-monomials lie in the piece");
            piece.dforms.push(piece.ideal.reduce(v));
            piece.dparts.push(parts);
        }
        let arc = std::sync::Arc::new(piece);
        self.pieces.lock().expect("poisoned").insert(w, arc.clone());
        Ok(arc)
    }

    /// `expr` as a polynomial in the `d_k` with `u = 1`.
    pub fn reduce(&self, expr: &APoly) -> Result<DPoly, AdamsError> {
        if expr.is_zero() {
            return Ok(DPoly::zero());
        }
        let degs = expr.degrees(weight_units);
        let w = degs[0];
        if degs.iter().any(|d| *d != w) {
            return Err(AdamsError::Inhomogeneous);
        }
        if w < 0 || w > self.rels.bound as i64 {
            return Err(AdamsError::NotReducible { degree: 2 * w });
        }
        let piece = self.piece(w)?;
        let target = piece.ideal.reduce(piece.vector(expr).ok_or(AdamsError::NotReducible { degree: 2 * w })?);
        match solve_columns(&piece.dforms, &target) {
            Ok(Some(c)) => {
                let mut out = DPoly::zero();
                for (parts, c) in piece.dparts.iter().zip(c) {
                    if !c.is_zero() {
                        out = out + d_monomial_poly::<Rat>(parts).scale(&c);
                    }
                }
                Ok(out)
            }
            Ok(None) => Err(AdamsError::NotReducible { degree: 2 * w }),
            Err(j) => Err(AdamsError::Degenerate {
                degree: 2 * w,
                monomial: d_monomial_poly::<Rat>(&piece.dparts[j]).to_string(),
            }),
        }
    }

    /// Homogenizes an expression that mixes weights by padding with `u`.
    pub fn homogenize(expr: &APoly) -> APoly {
        let degs = expr.degrees(weight_units);
        let top = degs.iter().copied().max().unwrap_or(0);
        let mut out = APoly::zero();
        for (m, c) in expr.terms() {
            let w = mono_degree(m, weight_units);
            out = out + APoly::monomial(m.clone(), c.clone()) * upow((top - w) as u32);
        }
        out
    }
}

pub fn reduce_to_d(expr: &APoly, rels: &RelationSet, nki: &NkiTable) -> Result<DPoly, AdamsError> {
    Reducer::new(rels.clone(), *nki).reduce(expr)
}

/// `psi^{k^-1} d_{k_gen}` before reduction.
pub fn psi_dk_apoly(k_adams: u32, k_gen: u32, nki: &NkiTable) -> APoly {
    psi_apoly(k_adams, &dk_apoly(k_gen, nki))
}

pub fn psi_on_dk(k_adams: u32, k_gen: u32, reducer: &Reducer) -> Result<DPoly, AdamsError> {
    reducer.reduce(&psi_dk_apoly(k_adams, k_gen, reducer.nki()))
}

/// `psi^{3^-1} d_k` for `2 <= k <= max_k`.
pub fn base_psi_table(max_k: u32, reducer: &Reducer) -> Result<PsiTable<Rat>, AdamsError> {
    (2..=max_k)
        .into_par_iter()
        .map(|k| Ok((k, psi_on_dk(3, k, reducer)?)))
        .collect()
}

pub fn table_mod2(t: &PsiTable<Rat>) -> Result<PsiTable<Gf2>, AdamsError> {
    t.iter()
        .map(|(k, p)| {
            let mut out = Poly::<Gf2>::new();
            for (m, c) in p.terms() {
                out.add_term(m.clone(), rat_to_gf2(c)?);
            }
            Ok((*k, out))
        })
        .collect()
}

pub fn table_padic(t: &PsiTable<Rat>, prec: u32) -> Result<PsiTable<Padic2>, AdamsError> {
    t.iter()
        .map(|(k, p)| {
            let mut out = Poly::<Padic2>::new();
            for (m, c) in p.terms() {
                out.add_term(m.clone(), rat_to_padic(c, prec)?);
            }
            Ok((*k, out))
        })
        .collect()
}

/// Applies the ring map determined by a table of images of the `d_k`.
pub fn apply_psi<R: CoeffRing>(p: &DPoly<R>, table: &PsiTable<R>) -> Result<DPoly<R>, AdamsError> {
    for s in p.symbols() {
        if s.name == 'd' && !table.contains_key(&(s.i as u32)) {
            return Err(AdamsError::InsufficientTable(s.i as u32));
        }
    }
    Ok(p.substitute(&|s: &Symbol| if s.name == 'd' { table.get(&(s.i as u32)).cloned() } else { None }))
}

/// Degree of a `d`-polynomial, with `d_k` in degree `2k`.
pub fn d_weight<R: CoeffRing>(p: &DPoly<R>) -> i64 {
    p.degrees(homology_weight).into_iter().max().unwrap_or(0)
}

/// Non-constant `d`-monomials of degree at most `w`, highest degree first.
fn filtration_basis(w: u32) -> Vec<Vec<u32>> {
    let mut parts: Vec<Vec<u32>> = d_partitions(w / 2).into_iter().filter(|p| !p.is_empty()).collect();
    parts.sort_by(|a, b| b.iter().sum::<u32>().cmp(&a.iter().sum::<u32>()).then(b.cmp(a)));
    parts
}

fn coordinates<R: CoeffRing>(polys: &[DPoly<R>]) -> (Vec<Monomial>, Vec<Vec<R>>) {
    let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    monos.sort();
    monos.dedup();
    let cols = polys
        .iter()
        .map(|p| monos.iter().map(|m| p.coeff(m)).collect())
        .collect();
    (monos, cols)
}

/// Basis of `{ z in F_w : (psi - 1) z = 0 }` modulo constants, where `F_w`
/// is spanned by the `d`-monomials of degree at most `w`, in echelon form
/// with respect to the degree-descending monomial order.
pub fn fixed_space(w: u32, table: &PsiTable<Gf2>) -> Result<Vec<DPoly<Gf2>>, AdamsError> {
    let basis = filtration_basis(w);
    let images: Vec<DPoly<Gf2>> = basis
        .par_iter()
        .map(|parts| {
            let m = d_monomial_poly::<Gf2>(parts);
            Ok(apply_psi(&m, table)? - m)
        })
        .collect::<Result<_, AdamsError>>()?;
    let (_, cols) = coordinates(&images);
    let rows: Vec<Vec<Gf2>> = if cols.is_empty() || cols[0].is_empty() {
        Vec::new()
    } else {
        (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    };
    let kernel = crate::linalg::nullspace(rows, basis.len());
    let (ech, _) = crate::linalg::rref(kernel);
    Ok(ech
        .into_iter()
        .map(|v| {
            let mut p = DPoly::<Gf2>::zero();
            for (parts, c) in basis.iter().zip(v) {
                if !c.is_zero() {
                    p = p + d_monomial_poly::<Gf2>(parts);
                }
            }
            p
        })
        .collect())
}

/// A fixed class whose leading degree is `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalClass {
    pub weight: u32,
    pub class: DPoly<Gf2>,
}

/// Fixed classes mod 2, grouped by the degree in which they first appear.
pub fn spherical_search(max_weight: u32, table: &PsiTable<Gf2>) -> Result<Vec<SphericalClass>, AdamsError> {
    if let Some(k) = (2..=max_weight / 2).find(|k| !table.contains_key(k)) {
        return Err(AdamsError::InsufficientTable(k));
    }
    let all = fixed_space(max_weight, table)?;
    let mut out: Vec<SphericalClass> = all
        .into_iter()
        .map(|p| SphericalClass {
            weight: d_weight(&p) as u32,
            class: p,
        })
        .collect();
    out.sort_by_key(|c| c.weight);
    Ok(out)
}

/// Whether `z` is fixed mod 2 and lies in the computed fixed space.
pub fn is_spherical(z: &DPoly<Gf2>, table: &PsiTable<Gf2>) -> Result<bool, AdamsError> {
    let mut nonconst = z.clone();
    nonconst.add_term(Monomial::new(), z.constant_term());
    if nonconst.is_zero() {
        return Ok(true);
    }
    if !(apply_psi(&nonconst, table)? - nonconst.clone()).is_zero() {
        return Ok(false);
    }
    let w = d_weight(&nonconst) as u32;
    let space = fixed_space(w, table)?;
    let mut all = space.clone();
    all.push(nonconst);
    let (_, cols) = coordinates(&all);
    let mut e = Echelon::new(cols[0].len());
    for c in &cols[..cols.len() - 1] {
        e.insert(c.clone());
    }
    Ok(e.contains(cols[cols.len() - 1].clone()))
}

/// Lifts a class fixed mod 2 to one fixed mod `2^target_precision` by
/// successive corrections `b_{m+1} = b_m + 2^m c`.
pub fn bootstrap_lift(z: &DPoly<Gf2>, psi: &PsiTable<Padic2>, target_precision: u32) -> Result<DPoly<Padic2>, AdamsError> {
    let p = target_precision;
    let mut b = DPoly::<Padic2>::zero();
    for (m, c) in z.terms() {
        if !c.is_zero() {
            b.add_term(m.clone(), Padic2::new(1, p));
        }
    }
    if b.is_zero() {
        return Ok(b);
    }
    let w = d_weight(&b) as u32;
    let basis = filtration_basis(w);
    let images: Vec<DPoly<Padic2>> = basis
        .iter()
        .map(|parts| {
            let m = d_monomial_poly::<Padic2>(parts);
            Ok(apply_psi(&m, psi)? - m)
        })
        .collect::<Result<_, AdamsError>>()?;
    let defect = |b: &DPoly<Padic2>| -> Result<DPoly<Padic2>, AdamsError> { Ok(apply_psi(b, psi)? - b.clone()) };
    let bit = |c: &Padic2, m: u32| -> Gf2 { Gf2(((c.value() >> m as usize) & BigInt::one()).is_one()) };
    let low_zero = |c: &Padic2, m: u32| -> bool { (c.value() & ((BigInt::one() << m as usize) - BigInt::one())).is_zero() };
    if !defect(&b)?.terms().all(|(_, c)| low_zero(c, 1)) {
        return Err(AdamsError::NotFixedMod2);
    }
    for stage in 1..p {
        let r = defect(&b)?;
        if r.terms().all(|(_, c)| low_zero(c, p)) {
            break;
        }
        let mut all = images.clone();
        all.push(r);
        let (_, cols) = coordinates(&all);
        let cols2: Vec<Vec<Gf2>> = cols.iter().map(|c| c.iter().map(|x| bit(x, 0)).collect()).collect();
        let rhs: Vec<Gf2> = cols[cols.len() - 1].iter().map(|x| bit(x, stage)).collect();
        let c = solve_any(&cols2[..cols2.len() - 1], &rhs).ok_or(AdamsError::LiftObstruction { stage })?;
        for (parts, ci) in basis.iter().zip(c) {
            if ci.0 {
                let m = d_monomial_poly::<Padic2>(parts);
                b = b + m.scale(&Padic2::new(BigInt::one() << stage as usize, p));
            }
        }
        if !defect(&b)?.terms().all(|(_, c)| low_zero(c, stage + 1)) {
            return Err(AdamsError::LiftObstruction { stage });
        }
    }
    Ok(b)
}

/// Conventional rendering, highest degree first: `243 d5 - 486 d4 + 2/3`.
pub fn dpoly_string<R: CoeffRing>(p: &DPoly<R>) -> String {
    let mut items: Vec<(&Monomial, &R)> = p.terms().collect();
    items.sort_by(|a, b| {
        mono_degree(b.0, homology_weight)
            .cmp(&mono_degree(a.0, homology_weight))
            .then(b.0.cmp(a.0))
    });
    signed_terms(items.into_iter().map(|(m, c)| {
        let name = m
            .iter()
            .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
            .collect::<Vec<_>>()
            .join(" ");
        (name, c.clone())
    }))
}

pub fn dpoly_to_json(p: &DPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let mono: serde_json::Map<String, Value> =
                m.iter().map(|(s, e)| (s.to_string(), json!(e))).collect();
            json!({"mono": mono, "num": c.numer().to_string(), "den": c.denom().to_string()})
        })
        .collect();
    json!({ "terms": terms })
}

pub fn dpoly_from_json(v: &Value) -> Result<DPoly, AdamsError> {
    let err = |s: &str| AdamsError::Json(s.to_string());
    let mut out = DPoly::zero();
    for t in v["terms"].as_array().ok_or_else(|| err("missing terms"))? {
        let mut m = Monomial::new();
        for (name, e) in t["mono"].as_object().ok_or_else(|| err("missing mono"))? {
            let k: u16 = name
                .strip_prefix('d')
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| err("bad symbol"))?;
            let e = e.as_u64().and_then(|e| e.to_u32()).ok_or_else(|| err("bad exponent"))?;
            m.push((Symbol::indexed('d', k), e));
        }
        m.sort();
        let num: BigInt = t["num"].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| err("bad num"))?;
        let den: BigInt = t["den"].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| err("bad den"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        out.add_term(m, Rat::new(num, den));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;
    use crate::scalar::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn d(s: &str) -> DPoly {
        p(s)
    }

    fn reducer() -> &'static Reducer {
        static R: OnceLock<Reducer> = OnceLock::new();
        R.get_or_init(|| Reducer::new(gen_2structure_relations(7).unwrap(), NkiTable::default()))
    }

    #[test]
    fn beta_rows() {
        assert_eq!(psi_inv_beta(1, 5, 8), BetaElt::basis(5));
        assert_eq!(psi_inv_beta(3, 3, 10).to_string(), "b1 - 18 b2 + 27 b3");
        assert_eq!(
            psi_inv_beta(3, 10, 10).to_string(),
            "66 b4 - 2673 b5 + 26730 b6 - 107163 b7 + 201204 b8 - 177147 b9 + 59049 b10"
        );
    }

    #[test]
    fn closed_form_matches_series() {
        let m = psi_matrix(3, 16, Orientation::OneMinusL);
        for i in 0..=16 {
            for j in 0..=16 {
                assert_eq!(m[i][j], psi3_closed(i as u32, j as u32), "({i},{j})");
            }
        }
    }

    #[test]
    fn series_powers_from_rational_engine() {
        let q = MultiSeries::from_coeffs("x", 30, &[int(0), int(3), int(-3), int(1)]);
        let m = psi_matrix(3, 30, Orientation::OneMinusL);
        for j in 2..=10u32 {
            let pw = q.pow(j);
            for i in 0..=30usize {
                assert_eq!(pw.coeff1(i as u32), Rat::from_integer(m[i][j as usize].clone()));
            }
        }
    }

    #[test]
    fn composition() {
        for (k, l) in [(3u32, 3u32), (3, 5), (5, 5)] {
            let a = psi_matrix(k, 10, Orientation::OneMinusL);
            let b = psi_matrix(l, 10, Orientation::OneMinusL);
            let c = psi_matrix(k * l, 10, Orientation::OneMinusL);
            for i in 0..=10 {
                let e = BetaElt::<BigInt>::basis(i).apply(&a).apply(&b);
                assert_eq!(e, BetaElt::basis(i).apply(&c));
            }
        }
    }

    #[test]
    fn tensor_and_mod2() {
        assert_eq!(psi_inv_tensor(3, 1, 1, 4).coeff(1, 1), BigInt::from(9));
        assert_eq!(psi_inv_tensor(1, 2, 3, 4).terms().count(), 1);
        let rows = psi3_mod2_rows(4);
        assert_eq!(rows, vec![vec![1], vec![1, 2], vec![1, 3], vec![2, 3, 4]]);
        let t = psi_inv_tensor(3, 2, 4, 6).map_coeffs(|c| crate::scalar::int_to_gf2(c));
        for ((i, j), _) in t.terms() {
            assert!(rows[1].contains(i) && rows[3].contains(j));
        }
    }

    #[test]
    fn nki_tables() {
        for k in 2..=10 {
            let v = nki_coeffs(k, NkiMode::Paper).unwrap();
            let dot: BigInt = v.iter().enumerate().map(|(i, n)| n * binom(k as u64, i as u64 + 1)).sum();
            assert_eq!(dot, binomial_gcd(k), "k = {k}");
        }
        assert_eq!(nki_coeffs(11, NkiMode::Paper), Err(AdamsError::UnsupportedK(11)));
        for k in 2..=40 {
            let v = nki_coeffs(k, NkiMode::ExtendedGcd).unwrap();
            let dot: BigInt = v.iter().enumerate().map(|(i, n)| n * binom(k as u64, i as u64 + 1)).sum();
            assert_eq!(dot, binomial_gcd(k), "k = {k}");
        }
        assert_eq!(binomial_gcd(12), BigInt::one());
        assert_eq!(binomial_gcd(16), BigInt::from(2));
        assert_eq!(binomial_gcd(27), BigInt::from(3));
    }

    #[test]
    fn relations_are_homogeneous_and_kill_coboundaries() {
        let rels = reducer().relations();
        for r in &rels.relations {
            let degs = r.poly.degrees(weight_units);
            assert!(degs.iter().all(|d| *d == r.weight() as i64), "{}", r.monomial_name());
            assert!(r.monomial.iter().all(|e| *e >= 1));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let g: Vec<Rat> = (0..7).map(|_| rat(rng.gen_range(-6..7), rng.gen_range(1..5))).collect();
            let u0 = rat(rng.gen_range(-3..4), rng.gen_range(1..3));
            let a = coboundary_coeffs(&g, &u0, 7).unwrap();
            for r in &rels.relations {
                assert!(evaluate_apoly(&r.poly, &a, &u0).is_zero(), "{}", r.monomial_name());
            }
        }
    }

    #[test]
    fn low_relation() {
        let rels = reducer().relations();
        let r = rels.at([2, 1, 1]).unwrap().specialized();
        assert!(same_up_to_sign(&r, &p("3*a13 - a12 + a11^2 - 2*a22")));
        let r = &rels.at([3, 1, 1]).unwrap().poly;
        assert!(same_relation(r, &p("2*a14 + a11*a12 - a13 - a23")));
        assert!(!same_relation(r, &p("a14 + a11*a12 - a13 - a23")));
        assert!(rels.at([1, 1, 1]).is_none() || rels.at([1, 1, 1]).unwrap().poly.is_zero());
    }

    #[test]
    fn round_trip() {
        let nki = NkiTable::default();
        for k in 2..=7 {
            let r = reducer().reduce(&dk_apoly(k, &nki)).unwrap();
            assert_eq!(r, DPoly::symbol(d_symbol(k)));
        }
    }

    /// `psi` acts on a coboundary of `g` as the coboundary of `g o [3]`; the
    /// reduced images must agree on every such point.
    fn check_against_coboundaries(k: u32, image: &DPoly) {
        let nki = NkiTable::default();
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        let n = 8;
        let three: Vec<Rat> = k_series(3, n, Orientation::OneMinusL)
            .into_iter()
            .map(Rat::from_integer)
            .collect();
        let three = MultiSeries::from_coeffs("t", n as u32, &three);
        for _ in 0..3 {
            let g: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-5..6), rng.gen_range(1..4))).collect();
            let mut gc = vec![Rat::one()];
            gc.extend(g.iter().cloned());
            let gs = MultiSeries::from_coeffs("t", n as u32, &gc);
            let g3 = MultiSeries::compose(&gs, &three).unwrap();
            let g3: Vec<Rat> = (1..=n as u32).map(|i| g3.coeff1(i)).collect();
            let one = Rat::one();
            let a = coboundary_coeffs(&g, &one, n as u32).unwrap();
            let a3 = coboundary_coeffs(&g3, &one, n as u32).unwrap();
            let dvals: BTreeMap<u32, Rat> =
                (2..=k).map(|j| (j, evaluate_apoly(&dk_apoly(j, &nki), &a, &one))).collect();
            let lhs = evaluate_apoly(&dk_apoly(k, &nki), &a3, &one);
            let rhs = image
                .substitute(&|s: &Symbol| Some(APoly::constant(dvals[&(s.i as u32)].clone())))
                .constant_term();
            assert_eq!(lhs, rhs, "d{k}");
        }
    }

    #[test]
    fn psi_on_generators() {
        let r = reducer();
        let expect = [
            (2, "9*d2"),
            (3, "27*d3 - 9*d2"),
            (4, "81*d4 + 6*d2"),
            (5, "243*d5 - 486*d4 - 198*d3 + 243*d2^2"),
            (6, "729*d6 - 729*d5 - 27*d4 + 243*d2*d3 + 54*d3 - 81*d2^2 - d2"),
        ];
        for (k, s) in expect {
            let got = psi_on_dk(3, k, r).unwrap();
            assert_eq!(got, d(s), "d{k}: {}", dpoly_string(&got));
            check_against_coboundaries(k, &got);
        }
        let raw = psi_dk_apoly(3, 7, r.nki()).specialize(U, &Rat::one());
        assert_eq!(raw, p("2187*a16 - 3645*a15 + 1782*a14 - 243*a13 + 3*a12"));
        let d7 = psi_on_dk(3, 7, r).unwrap();
        check_against_coboundaries(7, &d7);
    }

    #[test]
    fn reduction_rejects_bad_input() {
        let r = reducer();
        assert_eq!(r.reduce(&p("a11 + a12")), Err(AdamsError::Inhomogeneous));
        assert_eq!(r.reduce(&p("a44")), Err(AdamsError::NotReducible { degree: 16 }));
        assert_eq!(Reducer::homogenize(&p("a11 + a12")), p("u*a11 + a12"));
    }

    #[test]
    fn spherical_classes_at_base_level() {
        let t = table_mod2(&base_psi_table(6, reducer()).unwrap()).unwrap();
        let found = spherical_search(12, &t).unwrap();
        assert_eq!(found[0].weight, 4);
        assert_eq!(found[0].class, Poly::symbol(d_symbol(2)));
        assert!(found.iter().all(|c| c.weight != 6));
        for c in &found {
            assert!((apply_psi(&c.class, &t).unwrap() - c.class.clone()).is_zero());
        }
        assert_eq!(spherical_search(14, &t), Err(AdamsError::InsufficientTable(7)));
    }

    #[test]
    fn bootstrap() {
        let mut t: PsiTable<Padic2> = BTreeMap::new();
        t.insert(2, Poly::symbol(d_symbol(2)) + Poly::symbol(d_symbol(4)));
        t.insert(3, Poly::symbol(d_symbol(3)));
        t.insert(4, Poly::symbol(d_symbol(4)).scale(&Padic2::exact(3)));
        let z = Poly::<Gf2>::symbol(d_symbol(4));
        let b = bootstrap_lift(&z, &t, 20).unwrap();
        let defect = apply_psi(&b, &t).unwrap() - b.clone();
        assert!(defect.terms().all(|(_, c)| c.is_zero()), "{defect}");
        let d2 = Monomial::from_slice(&[(d_symbol(2), 1)]);
        assert_eq!(b.coeff(&d2).value(), &BigInt::from((1 << 20) - 2));
        assert!(bootstrap_lift(&Poly::zero(), &t, 20).unwrap().is_zero());
        let mut fixed: PsiTable<Padic2> = BTreeMap::new();
        fixed.insert(2, Poly::symbol(d_symbol(2)));
        let z2 = Poly::<Gf2>::symbol(d_symbol(2));
        let b = bootstrap_lift(&z2, &fixed, 16).unwrap();
        assert_eq!(b, Poly::symbol(d_symbol(2)).scale(&Padic2::new(1, 16)));
        let bad = bootstrap_lift(&z2, &t, 8);
        assert_eq!(bad, Err(AdamsError::NotFixedMod2));
    }

    #[test]
    fn base_table_has_no_lift_for_d2() {
        let mut t: PsiTable<Padic2> = BTreeMap::new();
        t.insert(2, Poly::symbol(d_symbol(2)).scale(&Padic2::exact(9)));
        let z = Poly::<Gf2>::symbol(d_symbol(2));
        assert_eq!(bootstrap_lift(&z, &t, 10), Err(AdamsError::LiftObstruction { stage: 3 }));
    }

    #[test]
    fn rendering_and_json() {
        let x = d("243*d5 - 486*d4 - 198*d3 + 243*d2^2 + 2/3");
        assert_eq!(dpoly_string(&x), "243 d5 - 486 d4 + 243 d2^2 - 198 d3 + 2/3");
        assert_eq!(dpoly_from_json(&dpoly_to_json(&x)).unwrap(), x);
    }
}
