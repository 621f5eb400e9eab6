//! Report rendering for the CLI.
//!
//! Fixed column orders (stable for regression diffs):
//!   distribution  q,m,n,L,count
//!   expectation   q,m,n,e_num,e_den,e_float,ceil_term,residual_num,residual_den
//!   deviation     q,m,n,delta,count
//!   bounds        q,m,n,c_combined_num,c_combined_den,c_zdelta_num,c_zdelta_den,lemma2_ok
//!   polytope      m,L,H,rho,M,bound,ok
//!
//! Counts render as exact decimal integer strings; rationals as separate
//! num/den columns (or "num/den" in JSON) plus a float rendering where
//! the schema calls for one.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::census::{BoundFitReport, DeviationTable, DistributionTable, ExpectationRecord, MCEstimate};
use crate::error::{Error, Result};
use crate::lfsr::{ComplexityProfile, ConnectionPoly};
use crate::polytope::VertexSet;

pub const DISTRIBUTION_HEADER: &str = "q,m,n,L,count";
pub const EXPECTATION_HEADER: &str =
    "q,m,n,e_num,e_den,e_float,ceil_term,residual_num,residual_den";
pub const DEVIATION_HEADER: &str = "q,m,n,delta,count";
pub const BOUNDS_HEADER: &str =
    "q,m,n,c_combined_num,c_combined_den,c_zdelta_num,c_zdelta_den,lemma2_ok";
pub const POLYTOPE_HEADER: &str = "m,L,H,rho,M,bound,ok";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Format, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format '{other}' (csv, json, table)")),
        }
    }
}

fn rat_float(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// One census block: distribution, expectation, deviation, bounds for a
/// single n.
pub struct CensusBlock {
    pub dist: DistributionTable,
    pub exp: ExpectationRecord,
    pub dev: DeviationTable,
    pub bounds: BoundFitReport,
}

pub fn census_csv(b: &CensusBlock) -> String {
    let (q, m, n) = (b.dist.q, b.dist.m, b.dist.n);
    let mut out = String::new();
    out.push_str(DISTRIBUTION_HEADER);
    out.push('\n');
    for (l, c) in b.dist.counts.iter().enumerate() {
        out.push_str(&format!("{q},{m},{n},{l},{c}\n"));
    }
    out.push_str(EXPECTATION_HEADER);
    out.push('\n');
    out.push_str(&format!(
        "{q},{m},{n},{},{},{},{},{},{}\n",
        b.exp.e_exact.numer(),
        b.exp.e_exact.denom(),
        rat_float(&b.exp.e_exact),
        b.exp.ceil_term,
        b.exp.residual.numer(),
        b.exp.residual.denom(),
    ));
    out.push_str(DEVIATION_HEADER);
    out.push('\n');
    for (delta, c) in &b.dev.zcounts {
        out.push_str(&format!("{q},{m},{n},{delta},{c}\n"));
    }
    out.push_str(BOUNDS_HEADER);
    out.push('\n');
    out.push_str(&format!(
        "{q},{m},{n},{},{},{},{},{}\n",
        b.bounds.c_combined.numer(),
        b.bounds.c_combined.denom(),
        b.bounds.c_zdelta.numer(),
        b.bounds.c_zdelta.denom(),
        b.bounds.c_lemma2_ok,
    ));
    out
}

pub fn census_json(b: &CensusBlock) -> String {
    let (q, m, n) = (b.dist.q, b.dist.m, b.dist.n);
    let counts: Vec<String> = b.dist.counts.iter().map(|c| c.to_string()).collect();
    let zcounts: serde_json::Map<String, serde_json::Value> = b
        .dev
        .zcounts
        .iter()
        .map(|(d, c)| (d.to_string(), json!(c.to_string())))
        .collect();
    let v = json!({
        "q": q,
        "m": m,
        "n": n,
        "counts": counts,
        "expectation": {
            "num": b.exp.e_exact.numer().to_string(),
            "den": b.exp.e_exact.denom().to_string(),
            "float": rat_float(&b.exp.e_exact),
            "ceil_term": b.exp.ceil_term,
            "residual_num": b.exp.residual.numer().to_string(),
            "residual_den": b.exp.residual.denom().to_string(),
        },
        "deviation": { "center": b.dev.center, "zcounts": zcounts },
        "bounds": {
            "c_combined": format!("{}/{}", b.bounds.c_combined.numer(), b.bounds.c_combined.denom()),
            "c_combined_float": rat_float(&b.bounds.c_combined),
            "c_zdelta": format!("{}/{}", b.bounds.c_zdelta.numer(), b.bounds.c_zdelta.denom()),
            "c_zdelta_float": rat_float(&b.bounds.c_zdelta),
            "lemma2_ok": b.bounds.c_lemma2_ok,
        },
    });
    let mut s = v.to_string();
    s.push('\n');
    s
}

pub fn census_table(b: &CensusBlock) -> String {
    let (q, m, n) = (b.dist.q, b.dist.m, b.dist.n);
    let mut out = format!("census q={q} m={m} n={n}\n");
    out.push_str("  L      N(L)\n");
    for (l, c) in b.dist.counts.iter().enumerate() {
        out.push_str(&format!("  {l:<5}  {c}\n"));
    }
    out.push_str(&format!(
        "  E = {}/{} = {}  (ceil = {}, residual = {})\n",
        b.exp.e_exact.numer(),
        b.exp.e_exact.denom(),
        rat_float(&b.exp.e_exact),
        b.exp.ceil_term,
        rat_float(&b.exp.residual),
    ));
    out.push_str(&format!(
        "  c_combined = {}  c_zdelta = {}  lemma2_ok = {}\n",
        rat_float(&b.bounds.c_combined),
        rat_float(&b.bounds.c_zdelta),
        b.bounds.c_lemma2_ok,
    ));
    out
}

pub fn render_census(b: &CensusBlock, fmt: Format) -> String {
    match fmt {
        Format::Csv => census_csv(b),
        Format::Json => census_json(b),
        Format::Table => census_table(b),
    }
}

/// One polytope report row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeRow {
    pub m: usize,
    pub l: u64,
    pub h: u64,
    pub rho: u64,
    pub points: u64,
    pub bound: String, // (H+1)^m, exact decimal
    pub ok: bool,
}

pub fn polytope_csv(rows: &[PolytopeRow]) -> String {
    let mut out = String::from(POLYTOPE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.m, r.l, r.h, r.rho, r.points, r.bound, r.ok
        ));
    }
    out
}

pub fn vertices_csv(vs: &VertexSet) -> String {
    let mut out = String::from("m,L,H,nu,coordinates\n");
    for (i, v) in vs.vertices.iter().enumerate() {
        let coords: Vec<String> = v.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            vs.m,
            vs.l,
            vs.h,
            i + 1,
            coords.join(";")
        ));
    }
    out
}

pub fn mc_csv(e: &MCEstimate) -> String {
    format!(
        "q,m,n,samples,seed,mean,stderr\n{},{},{},{},{},{},{}\n",
        e.q, e.m, e.n, e.samples, e.seed, e.mean, e.stderr
    )
}

pub fn mc_json(e: &MCEstimate) -> String {
    let mut s = json!({
        "q": e.q, "m": e.m, "n": e.n,
        "samples": e.samples, "seed": e.seed,
        "mean": e.mean, "stderr": e.stderr,
    })
    .to_string();
    s.push('\n');
    s
}

pub fn profile_report(p: &ComplexityProfile, l: usize, witness: &ConnectionPoly) -> String {
    let vals: Vec<String> = p.0.iter().map(usize::to_string).collect();
    format!(
        "profile: {}\nL: {}\nwitness: {}\n",
        vals.join(","),
        l,
        witness
    )
}

/// Parses a distribution CSV section back into (q, m, n, L, count) rows.
/// Used to check the emit/reparse round-trip contract.
pub fn parse_distribution_csv(text: &str) -> Result<Vec<(usize, usize, usize, usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line == DISTRIBUTION_HEADER || line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(Error::Parse {
                line: i + 1,
                col: 1,
                msg: format!("expected 5 columns, got {}", cols.len()),
            });
        }
        let parse_col = |j: usize| -> Result<usize> {
            cols[j].parse().map_err(|_| Error::Parse {
                line: i + 1,
                col: j + 1,
                msg: format!("bad integer '{}'", cols[j]),
            })
        };
        out.push((
            parse_col(0)?,
            parse_col(1)?,
            parse_col(2)?,
            parse_col(3)?,
            cols[4].to_string(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;
    use crate::field::Field;

    fn block(q: usize, m: usize, n: usize) -> CensusBlock {
        let f = Field::new(q).unwrap();
        let dist = census::enumerate_distribution(&f, m, n, census::DEFAULT_BUDGET).unwrap();
        let exp = census::expectation(&dist);
        let dev = census::deviation_table(&dist);
        let bounds = census::fit_bounds(&dist);
        CensusBlock {
            dist,
            exp,
            dev,
            bounds,
        }
    }

    #[test]
    fn csv_block_shape() {
        let b = block(2, 1, 2);
        let csv = census_csv(&b);
        assert!(csv.contains("2,1,2,0,1\n"));
        assert!(csv.contains("2,1,2,1,2\n"));
        assert!(csv.contains("2,1,2,2,1\n"));
        // expectation row: e = 1/1, ceil 1, residual 0/1
        assert!(csv.contains("2,1,2,1,1,1,1,0,1\n"));
    }

    #[test]
    fn distribution_csv_reparses_exactly() {
        let b = block(3, 2, 3);
        let csv = census_csv(&b);
        let dist_section: String = csv
            .lines()
            .take(1 + b.dist.counts.len())
            .map(|l| format!("{l}\n"))
            .collect();
        let rows = parse_distribution_csv(&dist_section).unwrap();
        assert_eq!(rows.len(), b.dist.counts.len());
        for (l, c) in b.dist.counts.iter().enumerate() {
            assert_eq!(rows[l], (3, 2, 3, l, c.to_string()));
        }
    }

    #[test]
    fn json_is_deterministic() {
        let b = block(2, 2, 2);
        assert_eq!(census_json(&b), census_json(&b));
    }
}
