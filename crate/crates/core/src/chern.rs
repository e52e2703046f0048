//! Chern classes and Chern numbers of products of complex projective spaces,
//! and the integer linear algebra of the SU constraint system.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub use crate::linalg::rref;
use crate::scalar::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("monomial has degree {monomial} but the manifold has complex dimension {manifold}")]
    DimensionMismatch { monomial: u32, manifold: u32 },
    #[error("a product of projective spaces needs at least one factor of positive dimension")]
    EmptyProduct,
    #[error("cannot parse {0:?} as a product like CP1xCP3 or CP1^2xCP2")]
    Parse(String),
}

/// `CP^{n_1} x ... x CP^{n_r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjProduct {
    dims: Vec<u32>,
}

impl ProjProduct {
    pub fn new(dims: Vec<u32>) -> Result<Self, ChernError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(ChernError::EmptyProduct);
        }
        Ok(ProjProduct { dims })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn dim(&self) -> u32 {
        self.dims.iter().sum()
    }

    pub fn product(&self, other: &ProjProduct) -> ProjProduct {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        ProjProduct { dims }
    }
}

impl fmt::Display for ProjProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.dims.iter().map(|n| format!("CP{n}")).collect();
        f.write_str(&s.join("x"))
    }
}

impl std::str::FromStr for ProjProduct {
    type Err = ChernError;

    fn from_str(s: &str) -> Result<Self, ChernError> {
        let bad = || ChernError::Parse(s.to_string());
        let mut dims = Vec::new();
        for factor in s.trim().split('x') {
            let f = factor.strip_prefix("CP").ok_or_else(bad)?;
            let (n, k) = match f.split_once('^') {
                Some((n, k)) => (n, k.parse::<usize>().map_err(|_| bad())?),
                None => (f, 1),
            };
            let n: u32 = n.parse().map_err(|_| bad())?;
            dims.extend(std::iter::repeat_n(n, k));
        }
        ProjProduct::new(dims)
    }
}

/// Integral class in `Z[x_1..x_r] / (x_i^{n_i + 1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    dims: Vec<u32>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl CohClass {
    pub fn one(dims: &[u32]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; dims.len()], BigInt::one());
        CohClass {
            dims: dims.to_vec(),
            terms,
        }
    }

    pub fn zero(dims: &[u32]) -> Self {
        CohClass {
            dims: dims.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(dims: &[u32], k: usize) -> Self {
        let mut e = vec![0; dims.len()];
        e[k] = 1;
        let mut c = CohClass::zero(dims);
        c.add_term(e, BigInt::one());
        c
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() || e.iter().zip(&self.dims).any(|(a, n)| a > n) {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> CohClass {
        let mut out = CohClass::zero(&self.dims);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &CohClass) -> CohClass {
        let mut out = CohClass::zero(&self.dims);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> CohClass {
        (0..k).fold(CohClass::one(&self.dims), |acc, _| acc.mul(self))
    }

    /// Homogeneous part of cohomological degree `2d`.
    pub fn degree_part(&self, d: u32) -> CohClass {
        let mut out = CohClass::zero(&self.dims);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Evaluation on the fundamental class: the coefficient of
    /// `x_1^{n_1} ... x_r^{n_r}`.
    pub fn evaluate(&self) -> BigInt {
        self.coeff(&self.dims)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            da.cmp(&db).then(b.0.cmp(a.0))
        });
        for (k, (e, c)) in items.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(i, p)| {
                    let v = if self.dims.len() == 1 { "x".to_string() } else { format!("x{}", i + 1) };
                    if *p == 1 { v } else { format!("{v}^{p}") }
                })
                .collect();
            let sign = match (k, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

/// `prod_i (1 + x_i)^{n_i + 1}`.
pub fn total_chern(p: &ProjProduct) -> CohClass {
    let dims = p.dims();
    let mut c = CohClass::one(dims);
    for (k, n) in dims.iter().enumerate() {
        let f = CohClass::one(dims).add(&CohClass::generator(dims, k));
        c = c.mul(&f.pow(n + 1));
    }
    c
}

/// A Chern monomial `c_{k_1} c_{k_2} ...`, stored as its parts in
/// descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChernMonomial(Vec<u32>);

impl ChernMonomial {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|k| *k > 0);
        parts.sort_by(|a, b| b.cmp(a));
        ChernMonomial(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Parses names such as `c1^4`, `c1*c3` or `c1^2*c2`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = Vec::new();
        for f in s.split('*') {
            let f = f.trim().strip_prefix('c')?;
            let (k, e) = match f.split_once('^') {
                Some((k, e)) => (k.parse::<u32>().ok()?, e.parse::<usize>().ok()?),
                None => (f.parse::<u32>().ok()?, 1),
            };
            if k == 0 {
                return None;
            }
            parts.extend(std::iter::repeat_n(k, e));
        }
        Some(ChernMonomial::new(parts))
    }
}

impl fmt::Display for ChernMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for k in &self.0 {
            *counts.entry(*k).or_default() += 1;
        }
        let s: Vec<String> = counts
            .into_iter()
            .map(|(k, e)| if e == 1 { format!("c{k}") } else { format!("c{k}^{e}") })
            .collect();
        f.write_str(&s.join("*"))
    }
}

pub fn chern_number(p: &ProjProduct, m: &ChernMonomial) -> Result<BigInt, ChernError> {
    if m.degree() != p.dim() {
        return Err(ChernError::DimensionMismatch {
            monomial: m.degree(),
            manifold: p.dim(),
        });
    }
    let c = total_chern(p);
    let mut acc = CohClass::one(p.dims());
    for k in m.parts() {
        acc = acc.mul(&c.degree_part(*k));
    }
    Ok(acc.evaluate())
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - k, k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// Chern monomials divisible by `c_1` in complex dimension `dim`: `c_1^dim`
/// first, the rest in decreasing lexicographic order of their parts.
pub fn su_constraints(dim: u32) -> Vec<ChernMonomial> {
    let mut out: Vec<ChernMonomial> = partitions(dim, dim)
        .into_iter()
        .filter(|p| p.contains(&1))
        .map(ChernMonomial::new)
        .collect();
    let pure = ChernMonomial::new(vec![1; dim as usize]);
    out.retain(|m| *m != pure);
    out.insert(0, pure);
    out
}

/// Rectangular matrix of arbitrary precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows, cols }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::new(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::new(vec![vec![BigInt::zero(); cols]; rows], cols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn to_rat(&self) -> Vec<Vec<Rat>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect()
    }

    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        IntMatrix::new(rows, self.cols)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| Rat::from_integer(a.clone()) * b).sum())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rref(self.to_rat()).1.len()
    }

    /// Rational row spaces are equal.
    pub fn same_row_space(&self, other: &IntMatrix) -> bool {
        let r = self.rank();
        r == other.rank() && r == self.stack(other).rank()
    }

    pub fn to_csv(&self, header: Option<&[String]>, row_names: Option<&[String]>) -> String {
        let mut out = String::new();
        if let Some(h) = header {
            if row_names.is_some() {
                out.push_str("row,");
            }
            out.push_str(&h.join(","));
            out.push('\n');
        }
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(names) = row_names {
                out.push_str(&names[i]);
                out.push(',');
            }
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            out.push_str(&s.join(","));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let s: Vec<String> = r.iter().map(|x| format!("{x:>6}")).collect();
            writeln!(f, "[{}]", s.join(" "))?;
        }
        Ok(())
    }
}

/// One row per constraint monomial, one column per basis element.
pub fn su_constraint_system(basis: &[ProjProduct], dim: u32) -> Result<(Vec<ChernMonomial>, IntMatrix), ChernError> {
    if let Some(p) = basis.iter().find(|p| p.dim() != dim) {
        return Err(ChernError::DimensionMismatch {
            monomial: dim,
            manifold: p.dim(),
        });
    }
    let monos = su_constraints(dim);
    let rows: Result<Vec<Vec<BigInt>>, ChernError> = monos
        .par_iter()
        .map(|m| basis.iter().map(|p| chern_number(p, m)).collect())
        .collect();
    Ok((monos, IntMatrix::new(rows?, basis.len())))
}

pub fn dim4_basis() -> Vec<ProjProduct> {
    crate::fgl::dim8_basis()
        .into_iter()
        .map(|d| ProjProduct::new(d).expect("nonempty"))
        .collect()
}

/// Hermite normal form under unimodular row operations: echelon form with
/// positive pivots, entries above each pivot reduced into `[0, pivot)`, zero
/// rows last.
pub fn integer_reduce(m: &IntMatrix) -> IntMatrix {
    let mut a = m.rows.clone();
    let (nr, nc) = (a.len(), m.cols);
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        // gcd-combine rows r.. into a single nonzero entry at (r, c)
        loop {
            let piv = (r..nr)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..nr {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if q.is_zero() {
                continue;
            }
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    IntMatrix::new(a, nc)
}

/// Basis of the rational kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpace {
    pub basis: Vec<Vec<Rat>>,
}

impl NullSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `v` lies in the span of the basis.
    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut rows = self.basis.clone();
        let before = rref(rows.clone()).1.len();
        rows.push(v.to_vec());
        rref(rows).1.len() == before
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let v: Vec<Rat> = v.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect();
        self.contains(&v)
    }
}

pub fn nullspace_rational(m: &IntMatrix) -> NullSpace {
    let nc = m.cols;
    let (r, pivots) = rref(m.to_rat());
    let free: Vec<usize> = (0..nc).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); nc];
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            // clear denominators for readability
            let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.into_iter().map(|x| x * Rat::from_integer(l.clone())).collect()
        })
        .collect();
    NullSpace { basis }
}

/// Degree 8 Todd polynomial `(-c4 + c1 c3 + 3 c2^2 + 4 c1^2 c2 - c1^4) / 720`
/// evaluated on Chern numbers.
pub fn todd_t4(c1_4: &Rat, c1_c3: &Rat, c1sq_c2: &Rat, c2_sq: &Rat, c4: &Rat) -> Rat {
    let n = -c4.clone() + c1_c3 + Rat::from_integer(3.into()) * c2_sq + Rat::from_integer(4.into()) * c1sq_c2 - c1_4;
    n / Rat::from_integer(720.into())
}

/// `T_4` on a product of projective spaces of complex dimension 4.
pub fn todd_t4_of(p: &ProjProduct) -> Result<Rat, ChernError> {
    let num = |s: &str| -> Result<Rat, ChernError> {
        Ok(Rat::from_integer(chern_number(p, &ChernMonomial::parse(s).expect("literal"))?))
    };
    Ok(todd_t4(&num("c1^4")?, &num("c1*c3")?, &num("c1^2*c2")?, &num("c2^2")?, &num("c4")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pp(d: &[u32]) -> ProjProduct {
        ProjProduct::new(d.to_vec()).unwrap()
    }

    fn cm(s: &str) -> ChernMonomial {
        ChernMonomial::parse(s).unwrap()
    }

    #[test]
    fn total_chern_classes() {
        assert_eq!(total_chern(&pp(&[1])).to_string(), "1 + 2*x");
        assert_eq!(total_chern(&pp(&[4])).to_string(), "1 + 5*x + 10*x^2 + 10*x^3 + 5*x^4");
        let c = total_chern(&pp(&[1, 3]));
        assert_eq!(c.degree_part(1).to_string(), "2*x1 + 4*x2");
        assert_eq!(c.degree_part(2).to_string(), "8*x1*x2 + 6*x2^2");
        assert_eq!(c.degree_part(3).to_string(), "12*x1*x2^2 + 4*x2^3");
        assert_eq!(c.degree_part(4).to_string(), "8*x1*x2^3");
        assert_eq!(total_chern(&pp(&[1, 1, 1, 1])).degree_part(4).to_string(), "16*x1*x2*x3*x4");
    }

    #[test]
    fn product_grammar() {
        assert_eq!("CP1xCP3".parse::<ProjProduct>().unwrap(), pp(&[1, 3]));
        assert_eq!("CP1^2xCP2".parse::<ProjProduct>().unwrap(), pp(&[1, 1, 2]));
        assert_eq!("CP0".parse::<ProjProduct>(), Err(ChernError::EmptyProduct));
        assert!("P2".parse::<ProjProduct>().is_err());
    }

    #[test]
    fn chern_numbers() {
        assert_eq!(chern_number(&pp(&[4]), &cm("c1^4")).unwrap(), BigInt::from(625));
        assert_eq!(chern_number(&pp(&[1, 1, 1, 1]), &cm("c1*c3")).unwrap(), BigInt::from(64));
        assert_eq!(chern_number(&pp(&[2, 2]), &cm("c2^2")).unwrap(), BigInt::from(99));
        assert!(matches!(
            chern_number(&pp(&[2]), &cm("c1^3")),
            Err(ChernError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn brute_force_c2_squared() {
        // (3 x1^2 + 9 x1 x2 + 3 x2^2)^2, coefficient of x1^2 x2^2
        let c2 = [(2u32, 0u32, 3i64), (1, 1, 9), (0, 2, 3)];
        let mut top = 0;
        for (a1, b1, c1) in c2 {
            for (a2, b2, cc2) in c2 {
                if a1 + a2 == 2 && b1 + b2 == 2 {
                    top += c1 * cc2;
                }
            }
        }
        assert_eq!(BigInt::from(top), chern_number(&pp(&[2, 2]), &cm("c2^2")).unwrap());
    }

    #[test]
    fn constraint_order_and_names() {
        let names: Vec<String> = su_constraints(4).iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["c1^4", "c1*c3", "c1^2*c2"]);
        let names2: Vec<String> = su_constraints(2).iter().map(|m| m.to_string()).collect();
        assert_eq!(names2, ["c1^2"]);
    }

    #[test]
    fn dimension_two_system() {
        let (_, m) = su_constraint_system(&[pp(&[1, 1]), pp(&[2])], 2).unwrap();
        assert_eq!(m, IntMatrix::from_i64(&[&[8, 9]]));
        let ns = nullspace_rational(&m);
        assert_eq!(ns.dim(), 1);
        // Todd-style check: K3 ~ 18 (CP1)^2 - 16 CP2 satisfies c1^2 = 0
        assert!(ns.contains_i64(&[18, -16]));
    }

    #[test]
    fn dimension_four_system() {
        let (monos, m) = su_constraint_system(&dim4_basis(), 4).unwrap();
        assert_eq!(monos.len(), 3);
        assert_eq!(
            m,
            IntMatrix::from_i64(&[
                &[625, 512, 486, 384, 432],
                &[50, 56, 54, 64, 60],
                &[250, 224, 216, 192, 204],
            ])
        );
        let reduced = IntMatrix::from_i64(&[&[25, 8, 0, 0, 0], &[0, 4, 0, 16, 9], &[0, 0, -27, 48, 15]]);
        assert!(integer_reduce(&m).same_row_space(&reduced));
        let ns = nullspace_rational(&m);
        assert_eq!(ns.dim(), 2);
        assert!(ns.contains_i64(&crate::fgl::K3SQ_VECTOR));
        assert!(ns.contains_i64(&crate::fgl::N_VECTOR));
    }

    #[test]
    fn hermite_form_properties() {
        assert_eq!(integer_reduce(&IntMatrix::identity(3)), IntMatrix::identity(3));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..6));
            let rows: Vec<Vec<BigInt>> = (0..r)
                .map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-20..21))).collect())
                .collect();
            let m = IntMatrix::new(rows, c);
            let h = integer_reduce(&m);
            assert!(h.same_row_space(&m));
            assert_eq!(integer_reduce(&h), h);
            for row in h.rows() {
                if let Some(p) = row.iter().find(|x| !x.is_zero()) {
                    assert!(p.is_positive());
                }
            }
        }
    }

    #[test]
    fn nullspace_vectors_are_in_the_kernel() {
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 7]]);
        let ns = nullspace_rational(&m);
        assert_eq!(ns.dim(), 1);
        for v in &ns.basis {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(nullspace_rational(&IntMatrix::zero(1, 3)).dim(), 3);
    }

    #[test]
    fn todd_values() {
        let z = int(0);
        assert_eq!(todd_t4(&z, &z, &z, &z, &z), z);
        assert_eq!(todd_t4(&z, &z, &z, &int(1), &z), rat(1, 240));
        assert_eq!(todd_t4(&int(625), &int(50), &int(250), &int(100), &int(5)), int(1));
        assert_eq!(todd_t4_of(&pp(&[4])).unwrap(), int(1));
        // Td is multiplicative and Td(CP^n) = 1
        for d in [[1, 3], [2, 2]] {
            assert_eq!(todd_t4_of(&pp(&d)).unwrap(), int(1));
        }
    }

    #[test]
    fn chern_numbers_are_multiplicative() {
        // c_top is the Euler class: chi(CP^a x CP^b) = (a+1)(b+1)
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let a = rng.gen_range(1..4u32);
            let b = rng.gen_range(1..4u32);
            let p = pp(&[a, b]);
            let top = chern_number(&p, &ChernMonomial::new(vec![a + b])).unwrap();
            let ea = chern_number(&pp(&[a]), &ChernMonomial::new(vec![a])).unwrap();
            let eb = chern_number(&pp(&[b]), &ChernMonomial::new(vec![b])).unwrap();
            assert_eq!(top, ea * eb);
        }
    }
}
