//! Formal group laws, strict isomorphisms and the Miscenko substitution of
//! bordism classes into `K_* MU`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{lazard_weight, Monomial, Poly, Symbol};
use crate::scalar::{CoeffRing, Rat};
use crate::series::{Exp, MultiSeries, SeriesError};

/// Default truncation bound for bivariate laws.
pub const DEFAULT_BOUND: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Unit,
    Commutativity,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Unit => "unit",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error("{axiom} axiom fails at {monomial}")]
    AxiomViolation { axiom: Axiom, monomial: String },
    #[error("expected a series in two variables")]
    NotBivariate,
    #[error("coefficient of {monomial} is not homogeneous of degree {expected}")]
    Inhomogeneous { monomial: String, expected: i64 },
    #[error("the boxed formula is only tabulated for n <= 4, not {0}")]
    UnsupportedDimension(u32),
    #[error("bordism expression: {0}")]
    Parse(String),
    #[error("bordism expression is not homogeneous: dimensions {0} and {1}")]
    MixedDimension(u32, u32),
    #[error("a-coefficient a{0}{1} is beyond the truncation bound")]
    MissingCoefficient(u16, u16),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn mono_name(e: &[u32], names: &[&str]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// A validated formal group law `F(x, y)`.
#[derive(Clone, PartialEq)]
pub struct Fgl<R> {
    law: MultiSeries<R>,
}

impl<R: CoeffRing> fmt::Debug for Fgl<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fgl({:?})", self.law)
    }
}

impl<R: CoeffRing> Fgl<R> {
    pub fn law(&self) -> &MultiSeries<R> {
        &self.law
    }

    pub fn bound(&self) -> u32 {
        self.law.bound()
    }

    /// Coefficient `a_ij` of `x^i y^j`.
    pub fn a(&self, i: u32, j: u32) -> R {
        self.law.coeff(&[i, j])
    }

    pub fn additive(bound: u32) -> Self {
        let s = MultiSeries::zero_in_vars(&["x", "y"], bound);
        Fgl {
            law: &s.var_like(0) + &s.var_like(1),
        }
    }

    /// `x + y + c x y`; `c = v` is the multiplicative law of K-theory.
    pub fn multiplicative(c: R, bound: u32) -> Self {
        let s = MultiSeries::zero_in_vars(&["x", "y"], bound);
        let (x, y) = (s.var_like(0), s.var_like(1));
        Fgl {
            law: &(&x + &y) + &(&x * &y).scale(&c),
        }
    }

    /// Checks unit, commutativity and associativity up to the bound.
    pub fn check(law: MultiSeries<R>) -> Result<Self, FglError> {
        if law.nvars() != 2 {
            return Err(FglError::NotBivariate);
        }
        let names = ["x", "y"];
        let c0 = law.constant_term();
        if !c0.is_zero() {
            return Err(SeriesError::NonzeroConstantTerm(c0.to_string()).into());
        }
        for (e, c) in law.terms() {
            let on_axis = e[0] == 0 || e[1] == 0;
            let is_linear = e[0] + e[1] == 1;
            if on_axis && !(is_linear && c.is_one()) {
                return Err(FglError::AxiomViolation {
                    axiom: Axiom::Unit,
                    monomial: mono_name(e, &names),
                });
            }
        }
        for lin in [[1, 0], [0, 1]] {
            if !law.coeff(&lin).is_one() {
                return Err(FglError::AxiomViolation {
                    axiom: Axiom::Unit,
                    monomial: mono_name(&lin, &names),
                });
            }
        }
        for (e, c) in law.terms() {
            if law.coeff(&[e[1], e[0]]) != *c {
                return Err(FglError::AxiomViolation {
                    axiom: Axiom::Commutativity,
                    monomial: mono_name(e, &names),
                });
            }
        }
        let s3 = MultiSeries::<R>::zero_in_vars(&["x", "y", "z"], law.bound());
        let (x, y, z) = (s3.var_like(0), s3.var_like(1), s3.var_like(2));
        let fxy = law.substitute(&[x.clone(), y.clone()])?;
        let fyz = law.substitute(&[y, z.clone()])?;
        let left = law.substitute(&[fxy, z])?;
        let right = law.substitute(&[x, fyz])?;
        let diff = &left - &right;
        if let Some((e, _)) = diff.terms().next() {
            return Err(FglError::AxiomViolation {
                axiom: Axiom::Associativity,
                monomial: mono_name(e, &["x", "y", "z"]),
            });
        }
        Ok(Fgl { law })
    }

    /// The conjugate law `g(F(g^{-1} x, g^{-1} y))` for a strict series `g`.
    pub fn twist(&self, g: &MultiSeries<R>) -> Result<Self, FglError> {
        let g = g.with_bound(self.bound());
        let ginv = g.comp_inverse()?;
        let s = self.law.empty_like();
        let gx = MultiSeries::compose(&ginv, &s.var_like(0))?;
        let gy = MultiSeries::compose(&ginv, &s.var_like(1))?;
        let inner = self.law.substitute(&[gx, gy])?;
        Ok(Fgl {
            law: MultiSeries::compose(&g, &inner)?,
        })
    }

    /// The strict isomorphism to the additive law, from
    /// `l'(x) = 1 / (dF/dy)(x, 0)`.
    pub fn log(&self) -> Result<MultiSeries<R>, FglError> {
        let dy = self.law.derivative(1);
        let n = self.bound();
        let mut coeffs = vec![R::zero(); n as usize];
        for (e, c) in dy.terms() {
            if e[1] == 0 && e[0] < n {
                coeffs[e[0] as usize] = c.clone();
            }
        }
        let d = MultiSeries::from_coeffs("x", n - 1, &coeffs);
        let lp = d.reciprocal()?.with_bound(n);
        Ok(lp.integrate(0)?)
    }

    /// The law with logarithm `g`, where `g^{-1}(x) = x / P(x)`.
    pub fn from_genus(p: &MultiSeries<R>) -> Result<Self, FglError> {
        let n = p.bound();
        let x = p.var_like(0);
        let ginv = &x * &p.reciprocal()?;
        let g = ginv.comp_inverse()?;
        let s = MultiSeries::<R>::zero_in_vars(&["x", "y"], n);
        let gx = MultiSeries::compose(&g, &s.var_like(0))?;
        let gy = MultiSeries::compose(&g, &s.var_like(1))?;
        let law = MultiSeries::compose(&ginv, &(&gx + &gy))?;
        Ok(Fgl { law })
    }

    /// Coefficients `<k; i, j>` of `x^i y^j` in `F(x, y)^k`.
    pub fn binom(&self, k: u32) -> BTreeMap<(u32, u32), R> {
        self.law
            .pow(k)
            .terms()
            .map(|(e, c)| ((e[0], e[1]), c.clone()))
            .collect()
    }
}

impl Fgl<Poly<Rat>> {
    /// Every coefficient of `x^i y^j` must be homogeneous of degree
    /// `2(i+j-1)` in the homotopy grading.
    pub fn check_grading(&self) -> Result<(), FglError> {
        for (e, c) in self.law.terms() {
            let expected = 2 * (e[0] as i64 + e[1] as i64 - 1);
            let degs = c.degrees(lazard_weight);
            if degs.iter().any(|d| *d != expected) {
                return Err(FglError::Inhomogeneous {
                    monomial: mono_name(e, &["x", "y"]),
                    expected,
                });
            }
        }
        Ok(())
    }
}

/// `x + b1 x^2 + ... + b_{n-1} x^n` over `Q[b1, ..., b_{n-1}]`, or with only
/// `b1..b_top` when `top` is given.
pub fn generic_strict_series(bound: u32, top: Option<u32>) -> MultiSeries<Poly<Rat>> {
    let top = top.unwrap_or(bound - 1).min(bound - 1);
    let mut c = vec![Poly::zero(), Poly::one()];
    for i in 1..=top {
        c.push(Poly::symbol(Symbol::indexed('b', i as u16)));
    }
    MultiSeries::from_coeffs("x", bound, &c)
}

/// The multiplicative law `x + y + v x y` twisted by the generic strict
/// series.
pub fn twisted_multiplicative(bound: u32, top: Option<u32>) -> Result<Fgl<Poly<Rat>>, FglError> {
    let fk = Fgl::multiplicative(Poly::symbol(Symbol::plain('v')), bound);
    let g = generic_strict_series(bound, top);
    let f = fk.twist(&g)?;
    f.check_grading()?;
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CpnMode {
    /// The four tabulated expressions, verbatim.
    #[default]
    PaperBox,
    /// Coefficients of `1 / (1 + sum a_{1i} x^i)`.
    ResidueExact,
}

impl FromStr for CpnMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper-box" => Ok(CpnMode::PaperBox),
            "residue-exact" => Ok(CpnMode::ResidueExact),
            _ => Err(format!("unknown mode {s}, expected paper-box or residue-exact")),
        }
    }
}

impl fmt::Display for CpnMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CpnMode::PaperBox => "paper-box",
            CpnMode::ResidueExact => "residue-exact",
        })
    }
}

const CPN_BOX: [&str; 4] = [
    "-a11",
    "-a12 + a11^2",
    "-a13 - a11^3 + 2*a11*a12",
    "-a14 + a11^4 + a12^2 + 2*a11*a13",
];

/// `[CP^n]` as a polynomial in the Lazard coefficients `a_ij`.
pub fn cpn_in_a(n: u32, mode: CpnMode) -> Result<Poly<Rat>, FglError> {
    if n == 0 {
        return Ok(Poly::one());
    }
    match mode {
        CpnMode::PaperBox => CPN_BOX
            .get(n as usize - 1)
            .map(|s| crate::poly::p(s))
            .ok_or(FglError::UnsupportedDimension(n)),
        CpnMode::ResidueExact => {
            let mut c = vec![Poly::one()];
            for i in 1..=n {
                c.push(Poly::symbol(Symbol::a(1, i as u16)));
            }
            let s = MultiSeries::from_coeffs("x", n, &c);
            Ok(s.reciprocal()?.coeff1(n))
        }
    }
}

/// Terms of the tabulated `[CP^n]` minus the reciprocal-series value.
pub fn cpn_discrepancy(n: u32) -> Result<Poly<Rat>, FglError> {
    Ok(cpn_in_a(n, CpnMode::PaperBox)? - cpn_in_a(n, CpnMode::ResidueExact)?)
}

/// Rational combination of products of complex projective spaces. Each
/// product is stored as its sorted list of dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BordismExpr {
    terms: BTreeMap<Vec<u32>, Rat>,
}

/// Basis `CP4, CP1xCP3, CP2xCP2, CP1^4, CP1^2xCP2` of the dimension-8
/// constraint system.
pub fn dim8_basis() -> Vec<Vec<u32>> {
    vec![vec![4], vec![1, 3], vec![2, 2], vec![1, 1, 1, 1], vec![1, 1, 2]]
}

pub const K3SQ_VECTOR: [i64; 5] = [0, 0, 256, 324, -576];
pub const N_VECTOR: [i64; 5] = [8, -25, -12, -23, 52];

impl BordismExpr {
    pub fn new() -> Self {
        BordismExpr::default()
    }

    pub fn add_term(&mut self, mut dims: Vec<u32>, c: Rat) {
        dims.sort();
        let e = self.terms.entry(dims.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&dims);
        }
    }

    pub fn from_vector(basis: &[Vec<u32>], coeffs: &[i64]) -> Self {
        let mut e = BordismExpr::new();
        for (b, c) in basis.iter().zip(coeffs) {
            e.add_term(b.clone(), Rat::from_integer(BigInt::from(*c)));
        }
        e
    }

    pub fn k3_squared() -> Self {
        BordismExpr::from_vector(&dim8_basis(), &K3SQ_VECTOR)
    }

    pub fn n_manifold() -> Self {
        BordismExpr::from_vector(&dim8_basis(), &N_VECTOR)
    }

    /// `M = 1/4 K3^2 + 12 N`.
    pub fn m_manifold() -> Self {
        "1/4*K3SQ + 12*N".parse().expect("built-in expression")
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = BordismExpr::new();
        for (d, a) in &self.terms {
            out.add_term(d.clone(), a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, a) in &other.terms {
            out.add_term(d.clone(), a.clone());
        }
        out
    }

    /// Common complex dimension of all summands.
    pub fn dimension(&self) -> Result<Option<u32>, FglError> {
        let mut dim = None;
        for d in self.terms.keys() {
            let n: u32 = d.iter().sum();
            match dim {
                None => dim = Some(n),
                Some(m) if m != n => return Err(FglError::MixedDimension(m, n)),
                _ => {}
            }
        }
        Ok(dim)
    }

    /// Image in `Q[a_ij]` under `[CP^n] -> cpn_in_a(n)`.
    pub fn in_a(&self, mode: CpnMode) -> Result<Poly<Rat>, FglError> {
        self.dimension()?;
        let mut out = Poly::zero();
        for (dims, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for n in dims {
                t = t * cpn_in_a(*n, mode)?;
            }
            out = out + t;
        }
        Ok(out)
    }
}

impl fmt::Display for BordismExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (dims, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            let sign = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mut groups: Vec<String> = Vec::new();
            let mut i = 0;
            while i < dims.len() {
                let mut j = i;
                while j < dims.len() && dims[j] == dims[i] {
                    j += 1;
                }
                groups.push(if j - i == 1 {
                    format!("CP{}", dims[i])
                } else {
                    format!("CP{}^{}", dims[i], j - i)
                });
                i = j;
            }
            write!(f, "{sign}{mag}*{}", groups.join("x"))?;
        }
        Ok(())
    }
}

impl FromStr for BordismExpr {
    type Err = FglError;

    /// Terms like `8*CP4 - 25*CP1xCP3 + 52*CP1^2xCP2 + 1/4*K3SQ + 12*N`.
    fn from_str(s: &str) -> Result<Self, FglError> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |m: String| FglError::Parse(m);
        if src.is_empty() {
            return Err(bad("empty expression".into()));
        }
        let mut out = BordismExpr::new();
        let mut rest = src.as_str();
        while !rest.is_empty() {
            let mut sign = Rat::one();
            while let Some(r) = rest.strip_prefix(['+', '-']) {
                if rest.starts_with('-') {
                    sign = -sign;
                }
                rest = r;
            }
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            let (coef, body) = match term.split_once('*') {
                Some((c, b)) if c.starts_with(|ch: char| ch.is_ascii_digit()) => {
                    let q = match c.split_once('/') {
                        Some((n, d)) => {
                            let n: BigInt = n.parse().map_err(|_| bad(format!("bad coefficient {c}")))?;
                            let d: BigInt = d.parse().map_err(|_| bad(format!("bad coefficient {c}")))?;
                            if d.is_zero() {
                                return Err(bad("zero denominator".into()));
                            }
                            Rat::new(n, d)
                        }
                        None => Rat::from_integer(c.parse().map_err(|_| bad(format!("bad coefficient {c}")))?),
                    };
                    (q, b)
                }
                _ => (Rat::one(), term),
            };
            let coef = coef * sign;
            match body {
                "K3SQ" => out = out.add(&BordismExpr::k3_squared().scale(&coef)),
                "N" => out = out.add(&BordismExpr::n_manifold().scale(&coef)),
                _ => {
                    let mut dims = Vec::new();
                    for factor in body.split('x') {
                        let f = factor
                            .strip_prefix("CP")
                            .ok_or_else(|| bad(format!("expected CPn, found {factor}")))?;
                        let (n, k) = match f.split_once('^') {
                            Some((n, k)) => (n, k.parse::<usize>().map_err(|_| bad(format!("bad power in {factor}")))?),
                            None => (f, 1),
                        };
                        let n: u32 = n.parse().map_err(|_| bad(format!("bad dimension in {factor}")))?;
                        if n == 0 {
                            return Err(bad("CP0 is not allowed".into()));
                        }
                        dims.extend(std::iter::repeat_n(n, k));
                    }
                    out.add_term(dims, coef);
                }
            }
        }
        out.dimension()?;
        Ok(out)
    }
}

/// Ring map `Q[a_ij] -> Q[v, b_i]` induced by a twisted law.
pub fn substitute_a(expr: &Poly<Rat>, law: &Fgl<Poly<Rat>>) -> Result<Poly<Rat>, FglError> {
    for s in expr.symbols() {
        if s.name == 'a' && (s.i + s.j) as u32 > law.bound() {
            return Err(FglError::MissingCoefficient(s.i, s.j));
        }
    }
    Ok(expr.substitute(&|s: &Symbol| (s.name == 'a').then(|| law.a(s.i as u32, s.j as u32))))
}

/// Image of a bordism class in `K_* MU` via the twisted multiplicative law.
pub fn miscenko_image(
    expr: &BordismExpr,
    law: &Fgl<Poly<Rat>>,
    mode: CpnMode,
) -> Result<Poly<Rat>, FglError> {
    substitute_a(&expr.in_a(mode)?, law)
}

/// Integer coefficients of the non-leading terms of `[M]` reduced mod `m`,
/// i.e. the part of `p` other than `v^4` that is not divisible by `m`.
pub fn non_leading_residue(p: &Poly<Rat>, m: i64) -> Poly<Rat> {
    let lead = Monomial::from_slice(&[(Symbol::plain('v'), 4)]);
    let mut out = Poly::zero();
    let mm = BigInt::from(m);
    for (mono, c) in p.terms() {
        if *mono == lead {
            continue;
        }
        let keep = !c.is_integer() || !(c.numer() % &mm).is_zero();
        if keep {
            out.add_term(mono.clone(), c.clone());
        }
    }
    out
}

pub fn strict_from_exps(bound: u32, coeffs: &[(u32, Rat)]) -> MultiSeries<Rat> {
    let mut g = MultiSeries::zero_in("x", bound);
    g.add_term(Exp::from_slice(&[1]), Rat::one());
    for (n, c) in coeffs {
        g.add_term(Exp::from_slice(&[*n]), c.clone());
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;
    use crate::scalar::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn law_from(terms: &[((u32, u32), Rat)], bound: u32) -> MultiSeries<Rat> {
        let mut s = MultiSeries::zero_in_vars(&["x", "y"], bound);
        for ((i, j), c) in terms {
            s.add_term(Exp::from_slice(&[*i, *j]), c.clone());
        }
        s
    }

    #[test]
    fn axioms() {
        assert!(Fgl::check(Fgl::<Rat>::additive(6).law().clone()).is_ok());
        let fk = Fgl::multiplicative(Poly::<Rat>::symbol(Symbol::plain('v')), 6);
        assert!(Fgl::check(fk.law().clone()).is_ok());
        let bad = law_from(&[((1, 0), int(1)), ((0, 1), int(1)), ((2, 0), int(1))], 4);
        assert_eq!(
            Fgl::check(bad),
            Err(FglError::AxiomViolation {
                axiom: Axiom::Unit,
                monomial: "x^2".into()
            })
        );
        let noncomm = law_from(&[((1, 0), int(1)), ((0, 1), int(1)), ((2, 1), int(1))], 4);
        assert!(matches!(
            Fgl::check(noncomm),
            Err(FglError::AxiomViolation { axiom: Axiom::Commutativity, .. })
        ));
        let nonassoc = law_from(
            &[((1, 0), int(1)), ((0, 1), int(1)), ((2, 1), int(1)), ((1, 2), int(1))],
            6,
        );
        assert!(matches!(
            Fgl::check(nonassoc),
            Err(FglError::AxiomViolation { axiom: Axiom::Associativity, .. })
        ));
    }

    #[test]
    fn identity_twist() {
        let f = Fgl::multiplicative(int(3), 6);
        let x = MultiSeries::<Rat>::zero_in("x", 6).var_like(0);
        assert_eq!(f.twist(&x).unwrap(), f);
    }

    #[test]
    fn twisted_coefficients() {
        let f = twisted_multiplicative(6, None).unwrap();
        assert_eq!(f.a(1, 1), p("v + 2*b1"));
        assert_eq!(f.a(2, 1), p("v*b1 - 2*b1^2 + 3*b2"));
        assert_eq!(f.a(3, 1), p("2*v*b2 - 2*v*b1^2 + 4*b3 - 8*b1*b2 + 4*b1^3"));
        assert_eq!(f.a(2, 2), p("v^2*b1 - 3*v*b1^2 + 2*b1^3 - 6*b1*b2 + 6*v*b2 + 6*b3"));
        assert_eq!(
            f.a(4, 1),
            p("5*v*b1^3 - 8*v*b1*b2 + 25*b1^2*b2 + 3*v*b3 - 10*b1^4 - 14*b1*b3 - 6*b2^2 + 5*b4")
        );
        assert_eq!(f.a(1, 4), f.a(4, 1));
    }

    #[test]
    fn log_of_multiplicative_law() {
        let f = Fgl::multiplicative(int(-1), 8);
        let l = f.log().unwrap();
        for n in 1..=8 {
            assert_eq!(l.coeff1(n), rat(1, n as i64));
        }
        assert_eq!(Fgl::<Rat>::additive(5).log().unwrap(), MultiSeries::zero_in("x", 5).var_like(0));
    }

    #[test]
    fn todd_genus_gives_multiplicative_law() {
        // x / (1 - e^{-x}) = sum B_n^+ x^n / n!
        let n = 10;
        let mut e = vec![];
        let mut fact = int(1);
        for k in 1..=n + 1 {
            fact *= int(k as i64);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            e.push(int(sign) / fact.clone());
        }
        // (1 - e^{-x}) / x = sum_{k>=0} (-1)^k x^k / (k+1)!
        let q = MultiSeries::from_coeffs("x", n, &e);
        let todd = q.reciprocal().unwrap();
        assert_eq!(todd.coeff1(1), rat(1, 2));
        let f = Fgl::from_genus(&todd).unwrap();
        assert_eq!(f, Fgl::multiplicative(int(-1), n));
        let one = MultiSeries::from_coeffs("x", n, &[int(1)]);
        assert_eq!(Fgl::from_genus(&one).unwrap(), Fgl::additive(n));
    }

    #[test]
    fn multiplicative_binomials() {
        let u = Poly::symbol(Symbol::plain('u'));
        let f = Fgl::multiplicative(-u.clone(), 12);
        let binom = |n: i64, k: i64| -> i64 {
            if k < 0 || k > n {
                return 0;
            }
            (0..k).fold(1i64, |acc, t| acc * (n - t) / (t + 1))
        };
        for k in 0..=4i64 {
            let table = f.binom(k as u32);
            for i in 0..=8i64 {
                for j in 0..=8i64 {
                    if i + j > 12 {
                        continue;
                    }
                    let c = i + j - k;
                    let expected = if c < 0 || i > k || j > k {
                        Poly::zero()
                    } else {
                        let n = binom(k, 2 * k - i - j) * binom(2 * k - i - j, k - j);
                        (-u.clone()).pow(c as u32).scale(&int(n))
                    };
                    let got = table.get(&(i as u32, j as u32)).cloned().unwrap_or_default();
                    assert_eq!(got, expected, "k={k} i={i} j={j}");
                }
            }
        }
        assert_eq!(f.binom(0).len(), 1);
    }

    #[test]
    fn cpn_modes() {
        for n in 1..=3 {
            assert_eq!(
                cpn_in_a(n, CpnMode::PaperBox).unwrap(),
                cpn_in_a(n, CpnMode::ResidueExact).unwrap()
            );
        }
        assert_eq!(
            cpn_in_a(4, CpnMode::ResidueExact).unwrap(),
            p("-a41 + 2*a11*a31 + a21^2 - 3*a11^2*a21 + a11^4")
        );
        assert_eq!(cpn_discrepancy(4).unwrap(), p("3*a11^2*a21"));
        assert_eq!(cpn_in_a(5, CpnMode::PaperBox), Err(FglError::UnsupportedDimension(5)));
    }

    #[test]
    fn residue_cpn_matches_logarithm() {
        let f = twisted_multiplicative(9, Some(4)).unwrap();
        let l = f.log().unwrap();
        for n in 1..=8u32 {
            let via_a = substitute_a(&cpn_in_a(n, CpnMode::ResidueExact).unwrap(), &f).unwrap();
            let via_log = l.coeff1(n + 1).scale(&int(n as i64 + 1));
            assert_eq!(via_a, via_log, "n = {n}");
        }
    }

    #[test]
    fn bordism_expression_grammar() {
        let e: BordismExpr = "8*CP4 - 25*CP1xCP3 - 12*CP2xCP2 - 23*CP1^4 + 52*CP1^2xCP2".parse().unwrap();
        assert_eq!(e, BordismExpr::n_manifold());
        assert_eq!(e.to_string(), "-23*CP1^4 + 52*CP1^2xCP2 - 25*CP1xCP3 - 12*CP2^2 + 8*CP4");
        let m = BordismExpr::m_manifold();
        assert_eq!(m.dimension().unwrap(), Some(4));
        assert!(matches!("CP1 + CP2".parse::<BordismExpr>(), Err(FglError::MixedDimension(1, 2))));
        assert!("3*XP2".parse::<BordismExpr>().is_err());
    }

    #[test]
    fn cp1_image() {
        let f = twisted_multiplicative(4, None).unwrap();
        let e: BordismExpr = "CP1".parse().unwrap();
        assert_eq!(miscenko_image(&e, &f, CpnMode::PaperBox).unwrap(), p("-v - 2*b1"));
    }

    #[test]
    fn twist_group_action_and_log() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let bound = 7;
            let coeffs: Vec<(u32, Rat)> =
                (2..=bound).map(|n| (n, rat(rng.gen_range(-5..6), rng.gen_range(1..4)))).collect();
            let g = strict_from_exps(bound, &coeffs);
            let f = Fgl::multiplicative(rat(rng.gen_range(-3..4), 1), bound);
            let t = f.twist(&g).unwrap();
            assert!(Fgl::check(t.law().clone()).is_ok());
            let back = t.twist(&g.comp_inverse().unwrap()).unwrap();
            assert_eq!(back, f);
            let lhs = t.log().unwrap();
            let rhs = MultiSeries::compose(&f.log().unwrap(), &g.comp_inverse().unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
