//! Reference tables and the diff behind `reproduce-paper`.
//!
//! Every file in `golden/` has the header `location,key,expected,erratum`.
//! `expected` is the verified value; `erratum` is filled only where the
//! published table prints something else.

use std::collections::BTreeMap;
use std::path::Path;

use fglab::adams::{
    base_psi_table, dpoly_string, gen_2structure_relations, is_spherical, primitive, psi3_mod2_rows, psi_inv_beta,
    spherical_search, table_mod2, DPoly, NkiTable, PsiTable, Reducer,
};
use fglab::cannibal::{theta3_closed_with, theta3_direct, theta_gen, thom_psi_table, ClosedForm};
use fglab::chern::{dim4_basis, integer_reduce, nullspace_rational, su_constraint_system, todd_t4, todd_t4_of, IntMatrix, ProjProduct};
use fglab::fgl::{
    generic_strict_series, miscenko_image, non_leading_residue, twisted_multiplicative, BordismExpr, CpnMode,
    K3SQ_VECTOR, N_VECTOR,
};
use fglab::mahler::{artin_schreier_check, dilate, dilation_vs_adams};
use fglab::poly::p;
use fglab::scalar::{int, rat, rat_to_gf2};
use fglab::{Gf2, Padic2, Rat};
use rayon::prelude::*;

use crate::output::{render, Format, Output, Table};

pub struct GoldenFile {
    pub name: &'static str,
    pub location: &'static str,
    pub data: &'static str,
    compute: fn(&Shared) -> Rows,
}

macro_rules! golden {
    ($name:literal, $loc:literal, $f:ident) => {
        GoldenFile {
            name: $name,
            location: $loc,
            data: include_str!(concat!("../golden/", $name, ".csv")),
            compute: $f,
        }
    };
}

pub const FILES: &[GoldenFile] = &[
    golden!("inverse_series", "inverse-series", inverse_series),
    golden!("twisted_law", "twisted-law", twisted_law),
    golden!("chern_numbers", "chern-numbers-dim4", chern_numbers),
    golden!("su_nullspace", "su-nullspace", su_nullspace),
    golden!("todd", "todd-genus", todd),
    golden!("bordism_images", "miscenko-images", bordism_images),
    golden!("psi_beta", "psi-on-beta", psi_beta),
    golden!("psi_beta_mod2", "psi-on-beta-mod2", psi_beta_mod2),
    golden!("relations", "two-structure-relations", relations),
    golden!("psi_bsu", "psi-on-bsu", psi_bsu),
    golden!("theta_t", "theta-generating-sequence", theta_t),
    golden!("theta_c", "theta-coefficients", theta_c),
    golden!("thom_psi", "psi-on-thom-class", thom_psi),
    golden!("spherical", "spherical-classes", spherical),
    golden!("dilation", "dilation", dilation),
    golden!("artin_schreier", "artin-schreier", artin_schreier),
];

/// State shared between tables that need the same relations or theta table.
pub struct Shared {
    reducer: Reducer,
}

impl Shared {
    fn new() -> Result<Self, String> {
        let rels = gen_2structure_relations(10).map_err(|e| e.to_string())?;
        Ok(Shared { reducer: Reducer::new(rels, NkiTable::default()) })
    }
}

type Rows = Result<Vec<(String, String)>, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn inverse_series(_: &Shared) -> Rows {
    let h = generic_strict_series(5, Some(4)).comp_inverse().map_err(err)?;
    Ok((1..=4).map(|n| (format!("m{n}"), h.coeff1(n + 1).to_string())).collect())
}

fn twisted_law(_: &Shared) -> Rows {
    let f = twisted_multiplicative(6, Some(4)).map_err(err)?;
    Ok([(1, 1), (2, 1), (3, 1), (2, 2), (4, 1), (3, 2)]
        .into_iter()
        .map(|(i, j)| (format!("a{i}{j}"), f.a(i, j).to_string()))
        .collect())
}

fn chern_numbers(_: &Shared) -> Rows {
    let basis = dim4_basis();
    let (monos, m) = su_constraint_system(&basis, 4).map_err(err)?;
    let mut out = Vec::new();
    for (mono, row) in monos.iter().zip(m.rows()) {
        for (b, x) in basis.iter().zip(row) {
            out.push((format!("{mono} {b}"), x.to_string()));
        }
    }
    Ok(out)
}

fn su_nullspace(_: &Shared) -> Rows {
    let (_, m) = su_constraint_system(&dim4_basis(), 4).map_err(err)?;
    let printed = IntMatrix::from_i64(&[&[25, 8, 0, 0, 0], &[0, 4, 0, 16, 9], &[0, 0, -27, 48, 15]]);
    let ns = nullspace_rational(&m);
    Ok(vec![
        ("reduced row space".into(), integer_reduce(&m).same_row_space(&printed).to_string()),
        ("nullspace dimension".into(), ns.dim().to_string()),
        ("K3SQ in nullspace".into(), ns.contains_i64(&K3SQ_VECTOR).to_string()),
        ("N in nullspace".into(), ns.contains_i64(&N_VECTOR).to_string()),
    ])
}

fn todd(_: &Shared) -> Rows {
    let z = int(0);
    Ok(vec![
        ("T4 with c2^2 = 1".into(), todd_t4(&z, &z, &z, &int(1), &z).to_string()),
        ("Td(CP4)".into(), todd_t4_of(&ProjProduct::new(vec![4]).map_err(err)?).map_err(err)?.to_string()),
    ])
}

fn bordism_images(_: &Shared) -> Rows {
    let f = twisted_multiplicative(6, Some(4)).map_err(err)?;
    let image = |e: &BordismExpr| miscenko_image(e, &f, CpnMode::PaperBox).map_err(err);
    let n = image(&BordismExpr::n_manifold())?;
    let k3 = image(&BordismExpr::k3_squared())?.scale(&rat(1, 4));
    let m = image(&BordismExpr::m_manifold())?;
    Ok(vec![
        ("[N]".into(), n.to_string()),
        ("1/4 [K3^2]".into(), k3.to_string()),
        ("[M]".into(), m.to_string()),
        ("[M] - v^4 mod 16".into(), non_leading_residue(&m, 16).to_string()),
    ])
}

fn psi_beta(_: &Shared) -> Rows {
    Ok((1..=10).map(|i| (format!("b{i}"), psi_inv_beta(3, i, 10).to_string())).collect())
}

fn psi_beta_mod2(_: &Shared) -> Rows {
    Ok(psi3_mod2_rows(10)
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let s: Vec<String> = row.iter().map(|j| format!("b{j}")).collect();
            (format!("b{}", i + 1), s.join(" + "))
        })
        .collect())
}

fn relations(sh: &Shared) -> Rows {
    let rels = sh.reducer.relations();
    let mut out = Vec::new();
    for mono in [[2, 1, 1], [3, 1, 1], [2, 2, 1], [3, 1, 2], [4, 1, 1]] {
        let r = rels.at(mono).ok_or_else(|| format!("no relation at {mono:?}"))?;
        out.push((r.monomial_name(), primitive(&r.specialized()).to_string()));
    }
    Ok(out)
}

fn table_rows(t: &PsiTable<Rat>) -> Vec<(String, String)> {
    t.iter().map(|(k, v)| (format!("d{k}"), dpoly_string(v))).collect()
}

fn mod2_rows(t: &PsiTable<Rat>) -> Result<Vec<(String, String)>, String> {
    Ok(table_mod2(t).map_err(err)?.iter().map(|(k, v)| (format!("d{k} mod 2"), dpoly_string(v))).collect())
}

fn psi_bsu(sh: &Shared) -> Rows {
    let t = base_psi_table(7, &sh.reducer).map_err(err)?;
    Ok(table_rows(&t))
}

fn theta_t(_: &Shared) -> Rows {
    let seq = theta_gen(20);
    Ok(seq.t.iter().enumerate().map(|(k, v)| (format!("t{k}"), v.to_string())).collect())
}

fn theta_c(_: &Shared) -> Rows {
    let t = theta3_direct(30).map_err(err)?;
    let mut out = Vec::new();
    for m in 0..=8 {
        for n in m..=8 {
            out.push((format!("c({m},{n})"), t.get(m, n).to_string()));
        }
    }
    for (name, form) in [("bilinear", ClosedForm::Bilinear), ("periodic", ClosedForm::Periodic), ("residue", ClosedForm::Residue)] {
        let bad = (0..=30u32)
            .flat_map(|m| (0..=30u32).map(move |n| (m, n)))
            .filter(|&(m, n)| theta3_closed_with(form, m, n) != t.get(m, n))
            .count();
        out.push((format!("{name} closed form mismatches for m,n <= 30"), bad.to_string()));
    }
    out.push(("symmetric".into(), t.is_symmetric().to_string()));
    Ok(out)
}

fn thom_psi(sh: &Shared) -> Rows {
    let theta = theta3_direct(5).map_err(err)?;
    let t = thom_psi_table(5, &theta, &sh.reducer).map_err(err)?;
    let mut out = table_rows(&t);
    out.extend(mod2_rows(&t)?);
    Ok(out)
}

fn spherical(sh: &Shared) -> Rows {
    let theta = theta3_direct(10).map_err(err)?;
    let table = table_mod2(&thom_psi_table(10, &theta, &sh.reducer).map_err(err)?).map_err(err)?;
    let gf2 = |s: &str| -> Result<DPoly<Gf2>, String> {
        let q = p(s);
        let mut out = DPoly::<Gf2>::new();
        for (m, c) in q.terms() {
            out.add_term(m.clone(), rat_to_gf2(c).map_err(err)?);
        }
        Ok(out)
    };
    let mut out = Vec::new();
    for (name, z) in [("z4", "d2"), ("z12", "d3^2 + d5 + d4 + d2^2"), ("z16", "d4^2 + d4"), ("z20", "d5^2 + d2^2*d5")] {
        out.push((format!("{name} = {z}"), is_spherical(&gf2(z)?, &table).map_err(err)?.to_string()));
    }
    let classes = spherical_search(20, &table).map_err(err)?;
    for w in [4u32, 6] {
        let n = classes.iter().filter(|c| c.weight == w).count();
        out.push((format!("fixed classes first appearing in weight {w}"), n.to_string()));
    }
    Ok(out)
}

fn dilation(_: &Shared) -> Rows {
    let mut out: Vec<(String, String)> = (1..=6).map(|i| (format!("C(3T,{i})"), dilate(3, i).to_string())).collect();
    let ok = dilation_vs_adams(3, 10).is_ok();
    out.push(("conjugate of the Adams matrix for i <= 10".into(), ok.to_string()));
    Ok(out)
}

fn artin_schreier(_: &Shared) -> Rows {
    let mut out = Vec::new();
    for u in [17i64, 33, 81 * 81, -15] {
        let r = artin_schreier_check(&Padic2::new(u, 48), 48).map_err(err)?;
        out.push((format!("u = {u}"), r.verified.to_string()));
    }
    Ok(out)
}

pub struct Expected {
    pub location: String,
    pub expected: String,
    pub erratum: String,
}

pub fn parse(data: &str) -> Result<BTreeMap<String, Expected>, String> {
    let mut rd = csv::Reader::from_reader(data.as_bytes());
    let mut out = BTreeMap::new();
    for rec in rd.records() {
        let rec = rec.map_err(err)?;
        let field = |i: usize| rec.get(i).unwrap_or("").to_string();
        out.insert(field(1), Expected { location: field(0), expected: field(2), erratum: field(3) });
    }
    Ok(out)
}

fn write(location: &str, rows: &[(String, String)], old: &BTreeMap<String, Expected>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["location", "key", "expected", "erratum"]).expect("in-memory write");
    for (k, v) in rows {
        let erratum = old.get(k).map(|e| e.erratum.as_str()).unwrap_or("");
        w.write_record([location, k, v, erratum]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf8")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Match,
    Diff,
    Error,
}

pub struct Report {
    pub text: String,
    pub status: Status,
}

struct Outcome {
    rows: usize,
    errata: usize,
    diffs: Vec<String>,
    computed: Option<Vec<(String, String)>>,
}

fn check(file: &GoldenFile, sh: &Shared) -> Outcome {
    let expected = match parse(file.data) {
        Ok(e) => e,
        Err(e) => return Outcome { rows: 0, errata: 0, diffs: vec![format!("unreadable golden file: {e}")], computed: None },
    };
    let errata = expected.values().filter(|e| !e.erratum.is_empty()).count();
    let computed = match (file.compute)(sh) {
        Ok(c) => c,
        Err(e) => return Outcome { rows: expected.len(), errata, diffs: vec![format!("computation failed: {e}")], computed: None },
    };
    let mut diffs = Vec::new();
    for (k, v) in &computed {
        match expected.get(k) {
            None => diffs.push(format!("{k}: computed {v}, no expected value")),
            Some(e) if &e.expected != v => diffs.push(format!("{k}: computed {v}, expected {}", e.expected)),
            Some(e) if e.location != file.location => diffs.push(format!("{k}: location tag {}", e.location)),
            Some(e) if e.erratum == e.expected => diffs.push(format!("{k}: erratum repeats the expected value")),
            _ => {}
        }
    }
    for k in expected.keys() {
        if !computed.iter().any(|(c, _)| c == k) {
            diffs.push(format!("{k}: expected but not computed"));
        }
    }
    Outcome { rows: expected.len(), errata, diffs, computed: Some(computed) }
}

/// Regenerates every table and diffs it against the embedded expectations.
pub fn reproduce(format: Format) -> Report {
    let shared = match Shared::new() {
        Ok(s) => s,
        Err(e) => return Report { text: format!("error: {e}\n"), status: Status::Error },
    };
    let outcomes: Vec<Outcome> = FILES.par_iter().map(|f| check(f, &shared)).collect();
    let mut t = Table::new(["location", "file", "rows", "errata", "status"]);
    let mut notes = String::new();
    for (f, o) in FILES.iter().zip(&outcomes) {
        let status = if o.diffs.is_empty() { "match" } else { "DIFF" };
        t.push([f.location, &format!("{}.csv", f.name), &o.rows.to_string(), &o.errata.to_string(), status]);
        for d in &o.diffs {
            notes.push_str(&format!("[{}] {d}\n", f.location));
        }
    }
    let failed = outcomes.iter().filter(|o| !o.diffs.is_empty()).count();
    let status = if failed == 0 { Status::Match } else { Status::Diff };
    let mut text = render(&Output::Table(t), format);
    if format == Format::Text {
        text.push_str(&notes);
        if failed == 0 {
            text.push_str("all tables match\n");
        } else {
            text.push_str(&format!("{failed} table(s) differ\n"));
        }
    } else if failed > 0 {
        eprint!("{notes}");
    }
    Report { text, status }
}

/// Rewrites the golden files in `dir` from freshly computed values, keeping
/// any erratum already recorded for a key.
pub fn regenerate(dir: &Path) -> Result<(), String> {
    let shared = Shared::new()?;
    for f in FILES {
        let old = parse(f.data)?;
        let rows = check(f, &shared).computed.ok_or_else(|| format!("{}: computation failed", f.name))?;
        std::fs::write(dir.join(format!("{}.csv", f.name)), write(f.location, &rows, &old)).map_err(err)?;
    }
    Ok(())
}
