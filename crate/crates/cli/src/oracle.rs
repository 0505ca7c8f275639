//! `oracle` subcommands: exact counts, matrix and subspace algebra, and
//! exhaustive cross-checks of the counting formulas.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use noncoherent::formats::parse_matrices;
use noncoherent::qcount::{contain_count, gaussian, intersect_count, psi, samesum_count, sphere_size, QCount};
use noncoherent::subspace::{enumerate_grassmannian, ENUMERATION_LIMIT};
use noncoherent::{FieldSpec, MatrixGF, Subspace};

use crate::error::CliError;
use crate::output::{document, json_text, num, Manifest};
use crate::parse_q;

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// One counting quantity as {exact, log2}.
    Counts(CountsArgs),
    /// Reduced row echelon form of a matrix file.
    Rref(InputArgs),
    /// Row spaces of the matrix blocks in a file, with their sum and intersection.
    Span(InputArgs),
    /// List every d-dimensional subspace of GF(q)^T.
    Enumerate(EnumerateArgs),
    /// Compare every counting formula with exhaustive enumeration.
    Check(CheckArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountKind {
    Gaussian,
    Psi,
    Sphere,
    Intersect,
    Samesum,
    Contain,
}

#[derive(Args, Debug, Serialize)]
pub struct CountsArgs {
    #[arg(value_enum)]
    pub kind: CountKind,
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub d1: Option<u32>,
    #[arg(long)]
    pub d2: Option<u32>,
    #[arg(long)]
    pub d12: Option<u32>,
    #[arg(long)]
    pub dx: Option<u32>,
    #[arg(long)]
    pub dy: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
pub struct InputArgs {
    /// Matrix text file (`-` for stdin).
    pub input: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct EnumerateArgs {
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: usize,
    #[arg(long)]
    pub d: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: usize,
}

pub fn run(c: &OracleCommand) -> Result<String, CliError> {
    match c {
        OracleCommand::Counts(a) => counts(a),
        OracleCommand::Rref(a) => rref(a),
        OracleCommand::Span(a) => span(a),
        OracleCommand::Enumerate(a) => enumerate(a),
        OracleCommand::Check(a) => check(a),
    }
}

fn need(v: Option<u32>, flag: &str) -> Result<u32, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this quantity")))
}

fn counts(a: &CountsArgs) -> Result<String, CliError> {
    let t = || need(a.t, "T");
    let c: QCount = match a.kind {
        CountKind::Gaussian => gaussian(t()?, need(a.d, "d")?, a.q),
        CountKind::Psi => psi(need(a.n, "n")?, need(a.d, "d")?, a.q),
        CountKind::Sphere => sphere_size(t()?, need(a.m, "m")?, a.q),
        CountKind::Intersect => {
            intersect_count(t()?, need(a.d1, "d1")?, need(a.d2, "d2")?, need(a.d12, "d12")?, a.q)
        }
        CountKind::Samesum => samesum_count(t()?, need(a.d1, "d1")?, need(a.d2, "d2")?, need(a.d12, "d12")?, a.q),
        CountKind::Contain => contain_count(t()?, need(a.dx, "dx")?, need(a.dy, "dy")?, a.q),
    };
    let manifest = Manifest::new("oracle counts", a, None);
    let body = json!({ "exact": c.exact.to_str_radix(10), "log2": num(c.log2) });
    Ok(json_text(&document(&manifest, obj(body))))
}

fn obj(v: Value) -> serde_json::Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        Ok(std::io::read_to_string(std::io::stdin())?)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn rows_json(m: &MatrixGF) -> Value {
    json!(m.to_rows())
}

fn rref(a: &InputArgs) -> Result<String, CliError> {
    let m = noncoherent::formats::parse_matrix(&read_input(&a.input)?)?;
    let (r, pivots) = m.rref_with_pivots();
    let manifest = Manifest::new("oracle rref", a, None);
    let body = json!({
        "q": m.field().order(),
        "T": m.cols(),
        "rank": pivots.len(),
        "pivots": pivots,
        "rref": rows_json(&r),
    });
    Ok(json_text(&document(&manifest, obj(body))))
}

fn subspace_json(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": rows_json(s.basis()) })
}

fn span(a: &InputArgs) -> Result<String, CliError> {
    let ms = parse_matrices(&read_input(&a.input)?)?;
    if ms.is_empty() {
        return Err(CliError::Usage("no matrix blocks in input".into()));
    }
    let spaces: Vec<Subspace> = ms.iter().map(Subspace::span).collect();
    let mut sum = spaces[0].clone();
    let mut inter = spaces[0].clone();
    for s in &spaces[1..] {
        sum = sum.sum(s)?;
        inter = inter.intersection(s)?;
    }
    let manifest = Manifest::new("oracle span", a, None);
    let body = json!({
        "spaces": spaces.iter().map(subspace_json).collect::<Vec<_>>(),
        "sum": subspace_json(&sum),
        "intersection": subspace_json(&inter),
    });
    Ok(json_text(&document(&manifest, obj(body))))
}

fn field(q: u64) -> Result<FieldSpec, CliError> {
    FieldSpec::from_order(q).map_err(|e| CliError::Usage(e.to_string()))
}

fn enumerate(a: &EnumerateArgs) -> Result<String, CliError> {
    let f = field(a.q)?;
    let spaces: Vec<Subspace> = enumerate_grassmannian(a.t, a.d, &f)?.collect();
    let manifest = Manifest::new("oracle enumerate", a, None);
    let body = json!({
        "count": spaces.len(),
        "subspaces": spaces.iter().map(|s| rows_json(s.basis())).collect::<Vec<_>>(),
    });
    Ok(json_text(&document(&manifest, obj(body))))
}

/// Mismatches between the counting formulas and enumeration over GF(q)^T.
pub fn exhaustive_mismatches(q: u64, t: usize) -> Result<(usize, Vec<String>), CliError> {
    let f = field(q)?;
    if (q as f64).powi((t * t) as i32) > (ENUMERATION_LIMIT as f64) * (ENUMERATION_LIMIT as f64) {
        return Err(CliError::Usage(format!("q^(T^2) too large for exhaustive checking: q = {q}, T = {t}")));
    }
    let grass: Vec<Vec<Subspace>> =
        (0..=t).map(|d| enumerate_grassmannian(t, d, &f).map(Iterator::collect)).collect::<Result<_, _>>()?;
    let (tu, big) = (t as u32, |x: usize| num_bigint::BigUint::from(x));
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut expect = |label: String, formula: QCount, got: usize| {
        checked += 1;
        if formula.exact != big(got) {
            bad.push(format!("{label}: formula {} vs enumeration {got}", formula.exact));
        }
    };
    for d in 0..=t {
        expect(format!("gaussian(T={t},d={d})"), gaussian(tu, d as u32, q), grass[d].len());
        let sphere: usize = grass[..=d].iter().map(Vec::len).sum();
        expect(format!("sphere(T={t},m={d})"), sphere_size(tu, d as u32, q), sphere);
    }
    for d1 in 0..=t {
        let Some(p1) = grass[d1].first() else { continue };
        for d2 in 0..=t {
            let mut by_inter: HashMap<usize, usize> = HashMap::new();
            let mut by_sum: HashMap<Subspace, (usize, usize)> = HashMap::new();
            for p2 in &grass[d2] {
                let d12 = p1.intersection(p2)?.dim();
                *by_inter.entry(d12).or_default() += 1;
                by_sum.entry(p1.sum(p2)?).or_insert((d12, 0)).1 += 1;
            }
            for d12 in 0..=d1.min(d2) {
                let f = intersect_count(tu, d1 as u32, d2 as u32, d12 as u32, q);
                expect(format!("intersect(T={t},{d1},{d2},{d12})"), f, by_inter.get(&d12).copied().unwrap_or(0));
            }
            let mut sums: Vec<&(usize, usize)> = by_sum.values().collect();
            sums.sort_unstable();
            sums.dedup();
            for &&(d12, cnt) in &sums {
                let f = samesum_count(tu, d1 as u32, d2 as u32, d12 as u32, q);
                expect(format!("samesum(T={t},{d1},{d2},{d12})"), f, cnt);
            }
        }
    }
    for dy in 0..=t {
        let Some(py) = grass[dy].first() else { continue };
        for dx in dy..=t {
            let got = grass[dx].iter().map(|px| px.contains(py)).collect::<Result<Vec<bool>, _>>()?;
            let got = got.into_iter().filter(|&b| b).count();
            expect(format!("contain(T={t},{dx},{dy})"), contain_count(tu, dx as u32, dy as u32, q), got);
        }
    }
    Ok((checked, bad))
}

fn check(a: &CheckArgs) -> Result<String, CliError> {
    let (checked, bad) = exhaustive_mismatches(a.q, a.t)?;
    if !bad.is_empty() {
        return Err(CliError::CheckFailed(format!("{} mismatches: {}", bad.len(), bad.join("; "))));
    }
    let manifest = Manifest::new("oracle check", a, None);
    let body = json!({ "checked": checked, "mismatches": bad });
    Ok(json_text(&document(&manifest, obj(body))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_small_fields() {
        for (q, t) in [(2, 3), (3, 2), (2, 4)] {
            let (checked, bad) = exhaustive_mismatches(q, t).unwrap();
            assert!(checked > 0);
            assert!(bad.is_empty(), "{bad:?}");
        }
    }
}
