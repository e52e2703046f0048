//! Numerical polynomials in the binomial basis, Mahler expansion by finite
//! differences, the dilation description of the Adams operations on
//! `K_* CP^inf`, and the 2-adic Artin-Schreier check.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

use crate::adams::{psi_inv_beta, psi_matrix, Orientation};
use crate::scalar::{padic_inverse, padic_log, CoeffRing, Padic2, Rat, ScalarError, EXACT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MahlerError {
    #[error("Mahler coefficient {index} = {value} is not an integer")]
    NotNumerical { index: usize, value: String },
    #[error("{0} is not a 2-adic unit")]
    NotAUnit(String),
    #[error("dilation and Adams matrices differ at ({i}, {j}): {dilation} vs {adams}")]
    MismatchAt {
        i: usize,
        j: usize,
        dilation: String,
        adams: String,
    },
    #[error("Artin-Schreier input must be 1 mod 16, got {0}")]
    NotInDomain(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `sum a_i C(T, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumPoly<R> {
    coeffs: Vec<R>,
}

impl<R: CoeffRing> NumPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        NumPoly { coeffs }
    }

    pub fn basis(i: usize) -> Self {
        let mut c = vec![R::zero(); i + 1];
        c[i] = R::one();
        NumPoly::new(c)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Value at an integer argument.
    pub fn eval(&self, t: i64) -> R {
        let t = BigInt::from(t);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.mul_ref(&R::from_bigint(&binomial(&t, i))))
            .fold(R::zero(), |acc, x| acc.add_ref(&x))
    }

    pub fn map_coeffs<S: CoeffRing>(&self, f: impl Fn(&R) -> S) -> NumPoly<S> {
        NumPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl NumPoly<Rat> {
    pub fn to_integral(&self) -> Result<NumPoly<BigInt>, MahlerError> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(index, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(MahlerError::NotNumerical {
                        index,
                        value: c.to_string(),
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(NumPoly::new)
    }
}

impl NumPoly<BigInt> {
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| Value::String(c.to_string())).collect())
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        v.as_array()?
            .iter()
            .map(|x| match x {
                Value::String(s) => s.parse().ok(),
                Value::Number(n) => n.as_i64().map(BigInt::from),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(NumPoly::new)
    }
}

impl<R: CoeffRing> fmt::Display for NumPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                _ => {}
            }
            if i == 0 {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "C(T,{i})")?;
            } else {
                write!(f, "{body}C(T,{i})")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Generalized binomial `C(n, i)` for any integer `n`.
pub fn binomial(n: &BigInt, i: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for r in 0..i {
        num *= n - BigInt::from(r);
        den *= BigInt::from(r + 1);
    }
    num / den
}

/// Power-basis coefficients of `C(kT, i)` in `T`.
pub fn binomial_poly(k: i64, i: usize) -> Vec<Rat> {
    let mut p = vec![Rat::one()];
    for r in 0..i {
        let mut next = vec![Rat::zero(); p.len() + 1];
        for (e, c) in p.iter().enumerate() {
            next[e + 1] += c * Rat::from_integer(k.into());
            next[e] -= c * Rat::from_integer(r.into());
        }
        p = next;
    }
    let fact: BigInt = (1..=i).map(BigInt::from).product();
    p.into_iter().map(|c| c / Rat::from_integer(fact.clone())).collect()
}

fn eval_power(p: &[Rat], t: i64) -> Rat {
    let t = Rat::from_integer(t.into());
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * &t + c)
}

/// Mahler coefficients `a_k = nabla^k p(0)` for `k <= n`, from the values at
/// `0..=n`.
pub fn mahler_expand(p: &[Rat], n: usize) -> NumPoly<Rat> {
    let mut vals: Vec<Rat> = (0..=n as i64).map(|t| eval_power(p, t)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(vals[0].clone());
        vals = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    NumPoly::new(out)
}

pub fn mahler_expand_integral(p: &[Rat], n: usize) -> Result<NumPoly<BigInt>, MahlerError> {
    mahler_expand(p, n).to_integral()
}

/// `C(kT, i)` in the basis `C(T, j)`, exactly, by
/// `a_j = sum_r (-1)^(j-r) C(j, r) C(kr, i)`.
pub fn dilate(k: i64, i: usize) -> NumPoly<BigInt> {
    let coeffs = (0..=i)
        .map(|j| {
            (0..=j)
                .map(|r| {
                    let t = binomial(&BigInt::from(j), r) * binomial(&BigInt::from(k * r as i64), i);
                    if (j - r) % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect();
    NumPoly::new(coeffs)
}

/// `C(k, m)` for a 2-adic integer `k`; costs `v(m!)` bits.
fn padic_binomial(k: &Padic2, m: usize) -> Result<Padic2, ScalarError> {
    let mut num = Padic2::one();
    for r in 0..m {
        num = num * (k.clone() - Padic2::exact(r));
    }
    let fact: BigInt = (1..=m).map(BigInt::from).product();
    num.checked_div(&Padic2::exact(fact))
}

/// `C(kT, i)` for a 2-adic unit `k`, as `[x^i] ((1 + x)^k - 1)^j`.
pub fn dilate_padic(k: &Padic2, i: usize) -> Result<NumPoly<Padic2>, MahlerError> {
    if !k.is_odd() {
        return Err(MahlerError::NotAUnit(k.to_string()));
    }
    let mut step = vec![Padic2::zero()];
    for m in 1..=i {
        step.push(padic_binomial(k, m)?);
    }
    let mut power = vec![Padic2::one()];
    let mut coeffs = Vec::with_capacity(i + 1);
    for _ in 0..=i {
        coeffs.push(power.get(i).cloned().unwrap_or_else(Padic2::zero));
        let mut next = vec![Padic2::zero(); i + 1];
        for (a, x) in power.iter().enumerate() {
            for (b, y) in step.iter().enumerate().skip(1) {
                if a + b <= i {
                    next[a + b] = next[a + b].clone() + x.clone() * y.clone();
                }
            }
        }
        power = next;
    }
    Ok(NumPoly::new(coeffs))
}

/// `D[i][j]`: coefficient of `C(T, j)` in `C(kT, i)`, for `i, j <= n`.
pub fn dilation_matrix(k: i64, n: usize) -> Vec<Vec<BigInt>> {
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let d = dilate(k, i);
            (0..=n).map(|j| d.coeff(j)).collect()
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum())
                .collect()
        })
        .collect()
}

pub fn matrix_csv(m: &[Vec<BigInt>]) -> String {
    let mut out = String::from("i");
    for j in 0..m.first().map_or(0, |r| r.len()) {
        out.push_str(&format!(",{j}"));
    }
    out.push('\n');
    for (i, row) in m.iter().enumerate() {
        out.push_str(&i.to_string());
        for x in row {
            out.push_str(&format!(",{x}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilationReport {
    pub k: u32,
    pub n: usize,
    pub entries_checked: usize,
}

fn compare(d: &[Vec<BigInt>], a: impl Fn(usize, usize) -> BigInt) -> Result<usize, MahlerError> {
    let mut count = 0;
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let y = a(i, j);
            if *x != y {
                return Err(MahlerError::MismatchAt {
                    i,
                    j,
                    dilation: x.to_string(),
                    adams: y.to_string(),
                });
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Checks `D = S A S^-1` against the `x = 1 - L` Adams rows with
/// `S = diag((-1)^i)`, and `D = A'` against the `x = L - 1` matrix.
pub fn dilation_vs_adams(k: u32, n: usize) -> Result<DilationReport, MahlerError> {
    let d = dilation_matrix(k as i64, n);
    let rows: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| {
            let b = psi_inv_beta(k, i, n);
            (0..=n).map(|j| b.coeff(j)).collect()
        })
        .collect();
    let mut count = compare(&d, |i, j| {
        if (i + j) % 2 == 0 {
            rows[i][j].clone()
        } else {
            -rows[i][j].clone()
        }
    })?;
    let other = psi_matrix(k, n, Orientation::LMinusOne);
    count += compare(&d, |i, j| other[i][j].clone())?;
    Ok(DilationReport {
        k,
        n,
        entries_checked: count,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArtinSchreier {
    pub b: Padic2,
    pub shifted: Padic2,
    pub verified: bool,
}

/// `b = -log(u) / log(81)` and the check `-log(u/81) / log(81) = b + 1`.
pub fn artin_schreier_check(u: &Padic2, precision: u32) -> Result<ArtinSchreier, MahlerError> {
    let u = u.with_precision(precision);
    if (u.value() - BigInt::one()).mod_floor(&BigInt::from(16)) != BigInt::zero() {
        return Err(MahlerError::NotInDomain(u.to_string()));
    }
    let l81 = padic_log(&Padic2::new(81, precision))?;
    let b = -padic_log(&u)?.checked_div(&l81)?;
    let quotient = u.clone() * padic_inverse(&Padic2::new(81, precision))?;
    let shifted = -padic_log(&quotient)?.checked_div(&l81)?;
    let verified = shifted.agrees_with(&(b.clone() + Padic2::one()));
    Ok(ArtinSchreier { b, shifted, verified })
}

/// The smallest precision among the coefficients.
pub fn min_precision(p: &NumPoly<Padic2>) -> u32 {
    p.coeffs().iter().map(|c| c.precision()).min().unwrap_or(EXACT)
}
