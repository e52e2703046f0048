use fglab::adams::{
    base_psi_table, bootstrap_lift, dpoly_string, dpoly_to_json, gen_2structure_relations, psi3_mod2_rows, psi_inv_beta,
    spherical_search, table_mod2, table_padic, DPoly, NkiMode, NkiTable, PsiTable, Reducer,
};
use fglab::cannibal::{theta3_direct, theta_gen, thom_psi_table};
use fglab::chern::{
    chern_number, dim4_basis, integer_reduce, nullspace_rational, su_constraint_system, ChernMonomial, ProjProduct,
};
use fglab::fgl::{cpn_in_a, generic_strict_series, miscenko_image, twisted_multiplicative, BordismExpr, CpnMode, Fgl};
use fglab::mahler::{artin_schreier_check, dilate, dilation_matrix, dilation_vs_adams, mahler_expand};
use fglab::scalar::rat_to_gf2;
use fglab::{Padic2, Rat};

use crate::output::{Output, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl<E: Into<fglab::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Compute(e.into().to_string())
    }
}

pub type CmdResult = Result<Output, CliError>;

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub bound: u32,
    pub precision: u32,
    pub mode: CpnMode,
    pub nki: NkiMode,
}

/// Partitions of `n` into positive parts, largest part first.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn basis_for(dim: u32) -> Vec<ProjProduct> {
    if dim == 4 {
        return dim4_basis();
    }
    partitions(dim)
        .into_iter()
        .map(|mut d| {
            d.sort_unstable();
            ProjProduct::new(d).expect("positive parts")
        })
        .collect()
}

pub fn series_inverse(terms: u32) -> CmdResult {
    if terms == 0 {
        return Err(CliError::Usage("--terms must be positive".into()));
    }
    let g = generic_strict_series(terms + 1, None);
    let h = g.comp_inverse()?;
    let mut t = Table::new(["n", "coefficient"]);
    for n in 1..=terms {
        t.push([n.to_string(), h.coeff1(n + 1).to_string()]);
    }
    Ok(Output::Table(t))
}

pub fn series_residue(n_max: u32) -> CmdResult {
    let g = generic_strict_series(n_max + 1, None);
    let h = g.comp_inverse()?;
    let mut t = Table::new(["n", "residue", "agrees"]);
    for n in 1..=n_max {
        let r = g.residue_inverse_coeff(n)?;
        let ok = r == h.coeff1(n + 1);
        t.push([n.to_string(), r.to_string(), ok.to_string()]);
    }
    Ok(Output::Table(t))
}

pub fn fgl_twisted(cfg: &Config, top: u32) -> CmdResult {
    let f = twisted_multiplicative(cfg.bound, Some(top))?;
    let mut t = Table::new(["coefficient", "image"]);
    for d in 2..=cfg.bound {
        for j in 1..=d / 2 {
            let i = d - j;
            t.push([format!("a{i}{j}"), f.a(i, j).to_string()]);
        }
    }
    Ok(Output::Table(t))
}

pub fn fgl_axioms(cfg: &Config, top: u32) -> CmdResult {
    let f = twisted_multiplicative(cfg.bound, Some(top))?;
    Fgl::check(f.law().clone())?;
    Ok(Output::Line(format!("axioms hold to bound {}", cfg.bound)))
}

pub fn fgl_cpn(cfg: &Config, n: u32) -> CmdResult {
    Ok(Output::Line(cpn_in_a(n, cfg.mode)?.to_string()))
}

pub fn fgl_miscenko(cfg: &Config, expr: &str) -> CmdResult {
    let e: BordismExpr = expr.parse()?;
    let dim = e.dimension()?.unwrap_or(0);
    let f = twisted_multiplicative(dim + 2, Some(dim.max(1)))?;
    Ok(Output::Line(miscenko_image(&e, &f, cfg.mode)?.to_string()))
}

pub fn chern_system(dim: u32) -> CmdResult {
    let basis = basis_for(dim);
    let (monos, m) = su_constraint_system(&basis, dim)?;
    let mut t = Table::new(std::iter::once("monomial".to_string()).chain(basis.iter().map(|b| b.to_string())));
    for (mono, row) in monos.iter().zip(m.rows()) {
        t.push(std::iter::once(mono.to_string()).chain(row.iter().map(|x| x.to_string())));
    }
    Ok(Output::Matrix(t))
}

pub fn chern_reduce(dim: u32) -> CmdResult {
    let basis = basis_for(dim);
    let (_, m) = su_constraint_system(&basis, dim)?;
    let h = integer_reduce(&m);
    let mut t = Table::new(basis.iter().map(|b| b.to_string()));
    for row in h.rows() {
        t.push(row.iter().map(|x| x.to_string()));
    }
    Ok(Output::Matrix(t))
}

pub fn chern_nullspace(dim: u32) -> CmdResult {
    let basis = basis_for(dim);
    let (_, m) = su_constraint_system(&basis, dim)?;
    let ns = nullspace_rational(&m);
    let mut t = Table::new(basis.iter().map(|b| b.to_string()));
    for v in &ns.basis {
        t.push(v.iter().map(|x| x.to_string()));
    }
    Ok(Output::Matrix(t))
}

pub fn chern_numbers(manifold: &str) -> CmdResult {
    let m: ProjProduct = manifold.parse()?;
    let mut t = Table::new(["monomial", "value"]);
    for parts in partitions(m.dim()) {
        let mono = ChernMonomial::new(parts);
        t.push([mono.to_string(), chern_number(&m, &mono)?.to_string()]);
    }
    Ok(Output::Table(t))
}

pub fn adams_beta(k: u32, i: usize, n: Option<usize>) -> CmdResult {
    if k == 0 {
        return Err(CliError::Usage("--k must be positive".into()));
    }
    Ok(Output::Line(psi_inv_beta(k, i, n.unwrap_or(i).max(i)).to_string()))
}

pub fn adams_mod2(n: usize) -> CmdResult {
    let mut t = Table::new(["i", "odd coefficients"]);
    for (i, row) in psi3_mod2_rows(n).iter().enumerate() {
        let s: Vec<String> = row.iter().map(|j| format!("b{j}")).collect();
        t.push([format!("b{}", i + 1), s.join(" ")]);
    }
    Ok(Output::Table(t))
}

pub fn reducer(bound: u32, nki: NkiMode) -> Result<Reducer, CliError> {
    Ok(Reducer::new(gen_2structure_relations(bound.max(3))?, NkiTable::new(nki)))
}

pub fn adams_relations(cfg: &Config) -> CmdResult {
    let rels = gen_2structure_relations(cfg.bound)?;
    let mut t = Table::new(["monomial", "relation"]);
    for r in &rels.relations {
        t.push([r.monomial_name(), r.specialized().to_string()]);
    }
    Ok(Output::Table(t))
}

fn psi_table(cfg: &Config, k_max: u32, thom: bool) -> Result<PsiTable<Rat>, CliError> {
    let r = reducer(cfg.bound.max(k_max), cfg.nki)?;
    Ok(if thom {
        let theta = theta3_direct(k_max)?;
        thom_psi_table(k_max, &theta, &r)?
    } else {
        base_psi_table(k_max, &r)?
    })
}

pub fn adams_psi(cfg: &Config, k_max: u32, thom: bool, mod2: bool) -> CmdResult {
    let table = psi_table(cfg, k_max, thom)?;
    let mut t = Table::new(["generator", "image"]);
    if mod2 {
        for (k, v) in table_mod2(&table)? {
            t.push([format!("d{k}"), dpoly_string(&v)]);
        }
        return Ok(Output::Table(t));
    }
    let mut json = serde_json::Map::new();
    for (k, v) in &table {
        t.push([format!("d{k}"), dpoly_string(v)]);
        json.insert(format!("d{k}"), dpoly_to_json(v));
    }
    Ok(Output::Structured(t, serde_json::Value::Object(json)))
}

pub fn adams_spherical(cfg: &Config, weight: u32, thom: bool) -> CmdResult {
    let table = table_mod2(&psi_table(cfg, (weight / 2).max(2), thom)?)?;
    let mut t = Table::new(["weight", "class"]);
    for c in spherical_search(weight, &table)? {
        t.push([c.weight.to_string(), dpoly_string(&c.class)]);
    }
    Ok(Output::Table(t))
}

pub fn adams_lift(cfg: &Config, class: &str, thom: bool) -> CmdResult {
    let z: DPoly = class.parse()?;
    let z2 = z.map_coeffs(|c| rat_to_gf2(c).expect("integral class"));
    let w = fglab::adams::d_weight(&z) as u32;
    let table = table_padic(&psi_table(cfg, (w / 2).max(2), thom)?, cfg.precision)?;
    let lifted = bootstrap_lift(&z2, &table, cfg.precision)?;
    Ok(Output::Line(dpoly_string(&lifted)))
}

pub fn cannibal_table(n: u32) -> CmdResult {
    let th = theta3_direct(n)?;
    let mut t = Table::new(std::iter::once("m".to_string()).chain((0..=n).map(|k| k.to_string())));
    for m in 0..=n {
        t.push(std::iter::once(m.to_string()).chain((0..=n).map(|k| th.get(m, k).to_string())));
    }
    Ok(Output::Matrix(t))
}

pub fn cannibal_t(n: usize) -> CmdResult {
    let seq = theta_gen(n);
    let mut t = Table::new(["k", "t"]);
    for (k, v) in seq.t.iter().enumerate() {
        t.push([k.to_string(), v.to_string()]);
    }
    Ok(Output::Table(t))
}

pub fn mahler_expand_cmd(coeffs: &str, n: Option<usize>) -> CmdResult {
    let c: Vec<Rat> = coeffs
        .split(',')
        .map(|s| s.trim().parse::<Rat>().map_err(|_| CliError::Usage(format!("bad coefficient {s:?}"))))
        .collect::<Result<_, _>>()?;
    let n = n.unwrap_or(c.len().saturating_sub(1));
    Ok(Output::Line(mahler_expand(&c, n).to_string()))
}

pub fn mahler_dilate(k: i64, i: usize, padic: bool, precision: u32) -> CmdResult {
    if padic {
        let d = fglab::mahler::dilate_padic(&Padic2::new(k, precision), i)?;
        let mut t = Table::new(["basis", "coefficient"]);
        for (j, c) in d.coeffs().iter().enumerate().rev().filter(|(_, c)| c.value().bits() > 0) {
            t.push([format!("C(T,{j})"), c.to_string()]);
        }
        return Ok(Output::Table(t));
    }
    Ok(Output::Line(dilate(k, i).to_string()))
}

pub fn mahler_matrix(k: i64, n: usize) -> CmdResult {
    let m = dilation_matrix(k, n);
    let mut t = Table::new(std::iter::once("i".to_string()).chain((0..=n).map(|j| j.to_string())));
    for (i, row) in m.iter().enumerate() {
        t.push(std::iter::once(i.to_string()).chain(row.iter().map(|x| x.to_string())));
    }
    Ok(Output::Matrix(t))
}

pub fn mahler_check(k: u32, n: usize) -> CmdResult {
    let r = dilation_vs_adams(k, n)?;
    Ok(Output::Line(format!(
        "dilation by {} equals the Adams matrix under sign conjugation for i <= {} ({} entries)",
        r.k, r.n, r.entries_checked
    )))
}

pub fn artin_schreier(u: &str, precision: u32) -> CmdResult {
    let v: num_bigint::BigInt = u.parse().map_err(|_| CliError::Usage(format!("bad integer {u:?}")))?;
    let out = artin_schreier_check(&Padic2::new(v, precision), precision)?;
    let mut t = Table::new(["quantity", "value"]);
    t.push(["b".to_string(), out.b.to_string()]);
    t.push(["-log(u/81)/log(81)".to_string(), out.shifted.to_string()]);
    t.push(["verified".to_string(), out.verified.to_string()]);
    Ok(Output::Table(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_order() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(4).len(), 5);
    }
}
