//! Bott's cannibalistic class `theta^3` of the universal virtual SU-bundle
//! `(1 - L1)(1 - L2)` and the resulting Adams operation on the Thom spectrum.

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::adams::{psi_a, upow, AdamsError, APoly, DPoly, NkiTable, PsiTable, Reducer};
use crate::scalar::{rat_to_padic, Padic2, Rat, ScalarError};
use crate::series::{MultiSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CannibalError {
    #[error("stable cannibalistic classes need odd k, got {0}")]
    EvenK(u32),
    #[error("theta table of bound {bound} does not reach index {needed}")]
    IndexOutOfRange { bound: u32, needed: u32 },
    #[error(transparent)]
    Adams(#[from] AdamsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn pow3(e: u32) -> Rat {
    Rat::from_integer(num_bigint::BigInt::from(3).pow(e))
}

/// Coefficients `t_k` of `1 / (3 - 3x + x^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGenSeq {
    pub t: Vec<Rat>,
}

impl ThetaGenSeq {
    /// `t_k`, zero for negative `k`.
    pub fn get(&self, k: i64) -> Rat {
        if k < 0 {
            Rat::zero()
        } else {
            self.t[k as usize].clone()
        }
    }
}

/// `t_0 = t_1 = 1/3`, `t_{k+2} = t_{k+1} - t_k / 3`, for `k <= n`.
pub fn theta_gen(n: usize) -> ThetaGenSeq {
    let mut t = vec![r(1, 3), r(1, 3)];
    while t.len() <= n {
        let k = t.len();
        t.push(&t[k - 1] - &t[k - 2] / r(3, 1));
    }
    t.truncate(n + 1);
    ThetaGenSeq { t }
}

/// Period-six closed form of `t_k`.
pub fn t_closed(k: u32) -> Rat {
    let (n, i) = (k / 6, k % 6);
    let sign = if n % 2 == 0 { Rat::one() } else { -Rat::one() };
    let v = match i {
        0 | 1 => pow3(3 * n + 1).recip(),
        2 => r(2, 1) / pow3(3 * n + 2),
        3 => pow3(3 * n + 2).recip(),
        4 => pow3(3 * n + 3).recip(),
        _ => Rat::zero(),
    };
    sign * v
}

/// Coefficients `c_mn` of `theta^3((1 - L1)(1 - L2)) = sum c_mn x^m y^n`
/// with `x = 1 - L1`, `y = 1 - L2`, for `m, n <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaTable {
    bound: u32,
    c: Vec<Vec<Rat>>,
}

impl ThetaTable {
    pub fn from_fn(bound: u32, f: impl Fn(u32, u32) -> Rat + Sync) -> Self {
        let c = (0..=bound)
            .into_par_iter()
            .map(|m| (0..=bound).map(|n| f(m, n)).collect())
            .collect();
        ThetaTable { bound, c }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn get(&self, m: u32, n: u32) -> Rat {
        self.c[m as usize][n as usize].clone()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..=self.bound).all(|m| (0..m).all(|n| self.c[m as usize][n as usize] == self.c[n as usize][m as usize]))
    }

    /// Whether every denominator is a power of 3.
    pub fn denominators_are_3_powers(&self) -> bool {
        self.c.iter().flatten().all(|x| {
            let mut d = x.denom().clone();
            let three = num_bigint::BigInt::from(3);
            while (&d % &three).is_zero() {
                d /= &three;
            }
            d.is_one()
        })
    }

    pub fn to_padic(&self, prec: u32) -> Result<Vec<Vec<Padic2>>, CannibalError> {
        Ok(self
            .c
            .iter()
            .map(|row| row.iter().map(|x| rat_to_padic(x, prec)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?)
    }

    /// Rows `m`, columns `n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m");
        for n in 0..=self.bound {
            out.push_str(&format!(",{n}"));
        }
        out.push('\n');
        for (m, row) in self.c.iter().enumerate() {
            out.push_str(&m.to_string());
            for x in row {
                out.push(',');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// `theta^3` by direct series division of
/// `3 (1 + (1-x)(1-y) + (1-x)^2 (1-y)^2) / ((3 - 3x + x^2)(3 - 3y + y^2))`.
pub fn theta3_direct(bound: u32) -> Result<ThetaTable, CannibalError> {
    let n = 2 * bound;
    let s = MultiSeries::<Rat>::zero_in_vars(&["x", "y"], n);
    let one = s.one_like();
    let (x, y) = (s.var_like(0), s.var_like(1));
    let p = &(&one - &x) * &(&one - &y);
    let num = (&(&one + &p) + &(&p * &p)).scale(&r(3, 1));
    let q = |v: &MultiSeries<Rat>| &(&one.scale(&r(3, 1)) - &v.scale(&r(3, 1))) + &(v * v);
    let den = &q(&x) * &q(&y);
    let th = &num * &den.reciprocal()?;
    Ok(ThetaTable::from_fn(bound, |m, k| th.coeff(&[m, k])))
}

/// Closed forms for `c_mn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosedForm {
    /// Nine-term bilinear expression in the `t_k`.
    Bilinear,
    /// `(-1)^{M+N} 3^{-(3M+3N+floor((i+k)/2))} b_{ik}` for `m = 6M+i`,
    /// `n = 6N+k`, both indices at least 2.
    #[default]
    Periodic,
    /// `3^{-floor((m+n)/2)}` times a sign read off `m - n` modulo 12, as
    /// printed; wrong by a sign when `m - n = 6 mod 12`.
    Residue,
}

fn b_ik(d: i64) -> i64 {
    match d.abs() {
        0 => 2,
        1 | 2 => 1,
        3 => 0,
        _ => -1,
    }
}

pub fn theta3_closed_with(form: ClosedForm, m: u32, n: u32) -> Rat {
    let seq = theta_gen((m.max(n) + 2) as usize);
    if form == ClosedForm::Bilinear {
        let t = |k: i64| seq.get(k);
        let (m, n) = (m as i64, n as i64);
        let terms: [(i64, i64, i64); 9] = [
            (9, 0, 0),
            (-9, 1, 0),
            (-9, 0, 1),
            (3, 2, 0),
            (15, 1, 1),
            (3, 0, 2),
            (-6, 2, 1),
            (-6, 1, 2),
            (3, 2, 2),
        ];
        return terms
            .iter()
            .map(|(c, a, b)| r(*c, 1) * t(m - a) * t(n - b))
            .sum();
    }
    if m == 0 || n == 0 {
        return if m == n { Rat::one() } else { Rat::zero() };
    }
    if m == 1 || n == 1 {
        let other = if m == 1 { n } else { m };
        return r(3, 1) * seq.get(other as i64 + 1);
    }
    match form {
        ClosedForm::Periodic => {
            let (mm, i) = (m / 6, m % 6);
            let (nn, k) = (n / 6, n % 6);
            let sign = if (mm + nn) % 2 == 0 { 1 } else { -1 };
            r(sign * b_ik(i as i64 - k as i64), 1) / pow3(3 * mm + 3 * nn + (i + k) / 2)
        }
        _ => {
            let d = (m as i64 - n as i64).rem_euclid(12);
            let b = match d {
                0 | 6 => 2,
                1 | 11 | 2 | 10 => 1,
                3 | 9 => 0,
                _ => -1,
            };
            r(b, 1) / pow3((m + n) / 2)
        }
    }
}

pub fn theta3_closed(m: u32, n: u32) -> Rat {
    theta3_closed_with(ClosedForm::Periodic, m, n)
}

/// `q_k(t) = (1 - (1 - t)^k) / t` as a polynomial.
fn q_k(k: u32) -> Vec<Rat> {
    let s = crate::adams::k_series(k, k as usize, crate::adams::Orientation::OneMinusL);
    s.into_iter().skip(1).map(Rat::from_integer).collect()
}

/// The stable class `k q_k(x' + y' - x'y') / (q_k(x') q_k(y'))` in the
/// orientation `x' = 1 - L1^*`, `y' = 1 - L2^*`.
pub fn theta_k_virtual(k: u32, bound: u32) -> Result<MultiSeries<Rat>, CannibalError> {
    if k.is_multiple_of(2) {
        return Err(CannibalError::EvenK(k));
    }
    let s = MultiSeries::<Rat>::zero_in_vars(&["x'", "y'"], bound);
    let (x, y) = (s.var_like(0), s.var_like(1));
    let q = MultiSeries::from_coeffs("t", bound, &q_k(k));
    let sum = &(&x + &y) - &(&x * &y);
    let top = MultiSeries::compose(&q, &sum)?.scale(&r(k as i64, 1));
    let bottom = &MultiSeries::compose(&q, &x)? * &MultiSeries::compose(&q, &y)?;
    Ok(&top * &bottom.reciprocal()?)
}

/// Rewrites a series in `(x', y')` in terms of `x = 1 - L1`, `y = 1 - L2`
/// via `x' = -x / (1 - x)`; the same substitution is an involution.
pub fn transport(s: &MultiSeries<Rat>) -> Result<MultiSeries<Rat>, CannibalError> {
    let z = MultiSeries::<Rat>::zero_in_vars(&["x", "y"], s.bound());
    let one = z.one_like();
    let flip = |v: MultiSeries<Rat>| -> Result<MultiSeries<Rat>, SeriesError> {
        Ok(&(-&v) * &(&one - &v).reciprocal()?)
    };
    let images = [flip(z.var_like(0))?, flip(z.var_like(1))?];
    Ok(s.substitute(&images)?)
}

/// `theta^3` as a series in `x, y`.
pub fn theta3_series(bound: u32) -> Result<MultiSeries<Rat>, CannibalError> {
    let t = theta3_direct(bound)?;
    let mut s = MultiSeries::<Rat>::zero_in_vars(&["x", "y"], bound);
    for m in 0..=bound {
        for n in 0..=bound - m {
            s.add_term([m, n].into_iter().collect(), t.get(m, n));
        }
    }
    Ok(s)
}

/// `sum_i n_k^i sum_{m,n} c_mn psi_B(a_{i-m, k-i-n})`, homogenized with `u`.
pub fn thom_psi_dk_apoly(k_gen: u32, theta: &ThetaTable, nki: &NkiTable) -> Result<APoly, CannibalError> {
    if theta.bound() < k_gen {
        return Err(CannibalError::IndexOutOfRange {
            bound: theta.bound(),
            needed: k_gen,
        });
    }
    let mut out = APoly::zero();
    for (idx, nk) in nki.coeffs(k_gen).iter().enumerate() {
        if nk.is_zero() {
            continue;
        }
        let i = idx as u32 + 1;
        let j = k_gen - i;
        for m in 0..=i {
            for n in 0..=j {
                let c = theta.get(m, n);
                if c.is_zero() {
                    continue;
                }
                let (p, q) = ((i - m) as u16, (j - n) as u16);
                let base = psi_a(3, p, q);
                if base.is_zero() {
                    continue;
                }
                let coeff = c * Rat::from_integer(nk.clone());
                out = out + (base * upow(m + n)).scale(&coeff);
            }
        }
    }
    Ok(out)
}

pub fn thom_psi_dk(k_gen: u32, theta: &ThetaTable, reducer: &Reducer) -> Result<DPoly, CannibalError> {
    let e = thom_psi_dk_apoly(k_gen, theta, reducer.nki())?;
    Ok(reducer.reduce(&e)?)
}

pub fn thom_psi_table(max_k: u32, theta: &ThetaTable, reducer: &Reducer) -> Result<PsiTable<Rat>, CannibalError> {
    (2..=max_k)
        .into_par_iter()
        .map(|k| Ok((k, thom_psi_dk(k, theta, reducer)?)))
        .collect()
}
