//! Text input formats.
//!
//! * Matrices: one or more blocks, each a header line `q T rows` followed by
//!   `rows` lines of `T` integers in `0..q`.
//! * Erasure distributions: `v:p,v:p,…` giving `P(N = v) = p`.
//! * Dimension distributions: numbers separated by whitespace or commas.
//!
//! `#` starts a comment; blank lines are ignored. Every parser rejects
//! input longer than [`MAX_INPUT_BYTES`] and sizes above [`MAX_DIM`].

use thiserror::Error;

use crate::capacity::DimDist;
use crate::channel::ErasureDist;
use crate::field::{is_prime_power, FieldSpec, MAX_ORDER};
use crate::matrix::MatrixGF;

pub const MAX_INPUT_BYTES: usize = 1 << 20;
/// Bound on matrix dimensions, erasure values and distribution length.
pub const MAX_DIM: usize = 64;
/// Largest q accepted for channel parameters (matrices need q ≤ 256).
pub const MAX_PARAM_Q: u64 = 1 << 32;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("input exceeds {MAX_INPUT_BYTES} bytes")]
    TooLong,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn check_len(s: &str) -> Result<(), ParseError> {
    if s.len() > MAX_INPUT_BYTES {
        Err(ParseError::TooLong)
    } else {
        Ok(())
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_uint<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| syntax(line, format!("{what}: expected a nonnegative integer, got {tok:?}")))
}

/// Prime power q with `2 ≤ q ≤ max`.
pub fn parse_field_order(s: &str, max: u64) -> Result<u64, ParseError> {
    check_len(s)?;
    let t = s.trim();
    let q: u64 = t.parse().map_err(|_| ParseError::Invalid(format!("q: expected an integer, got {t:?}")))?;
    if q > max {
        return Err(ParseError::Invalid(format!("q <= {max} violated: q = {q}")));
    }
    if !is_prime_power(q) {
        return Err(ParseError::Invalid(format!("q = {q} is not a prime power")));
    }
    Ok(q)
}

/// All matrix blocks in `s`.
pub fn parse_matrices(s: &str) -> Result<Vec<MatrixGF>, ParseError> {
    check_len(s)?;
    let mut lines = content_lines(s);
    let mut out = Vec::new();
    while let Some((ln, header)) = lines.next() {
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(syntax(ln, "header must be `q T rows`"));
        }
        let q: u64 = parse_uint(toks[0], ln, "q")?;
        if q > MAX_ORDER as u64 {
            return Err(syntax(ln, format!("q <= {MAX_ORDER} violated: q = {q}")));
        }
        let field = FieldSpec::from_order(q).map_err(|e| syntax(ln, e.to_string()))?;
        let t: usize = parse_uint(toks[1], ln, "T")?;
        let rows: usize = parse_uint(toks[2], ln, "rows")?;
        if t > MAX_DIM || rows > MAX_DIM {
            return Err(syntax(ln, format!("T and rows must be at most {MAX_DIM}")));
        }
        let mut data = Vec::with_capacity(rows);
        for r in 0..rows {
            let (rl, row) = lines.next().ok_or_else(|| syntax(ln, format!("expected {rows} rows, found {r}")))?;
            let vals = row
                .split_whitespace()
                .map(|tok| parse_uint::<u32>(tok, rl, "entry"))
                .collect::<Result<Vec<u32>, _>>()?;
            if vals.len() != t {
                return Err(syntax(rl, format!("expected {t} entries, found {}", vals.len())));
            }
            data.push(vals);
        }
        out.push(MatrixGF::from_rows(&data, t, &field).map_err(|e| syntax(ln, e.to_string()))?);
    }
    Ok(out)
}

/// Exactly one matrix block.
pub fn parse_matrix(s: &str) -> Result<MatrixGF, ParseError> {
    let mut v = parse_matrices(s)?;
    match v.len() {
        1 => Ok(v.pop().expect("one block")),
        k => Err(ParseError::Invalid(format!("expected one matrix block, found {k}"))),
    }
}

/// `v:p,v:p,…`; unlisted values get probability 0.
pub fn parse_erasure_dist(s: &str) -> Result<ErasureDist, ParseError> {
    check_len(s)?;
    let mut probs: Vec<Option<f64>> = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (v, p) = item.split_once(':').ok_or_else(|| ParseError::Invalid(format!("{item:?}: expected v:p")))?;
        let v: usize = v.trim().parse().map_err(|_| ParseError::Invalid(format!("{v:?}: expected an integer")))?;
        let p: f64 = p.trim().parse().map_err(|_| ParseError::Invalid(format!("{p:?}: expected a number")))?;
        if v > MAX_DIM {
            return Err(ParseError::Invalid(format!("value {v} exceeds {MAX_DIM}")));
        }
        if probs.len() <= v {
            probs.resize(v + 1, None);
        }
        if probs[v].replace(p).is_some() {
            return Err(ParseError::Invalid(format!("value {v} listed twice")));
        }
    }
    ErasureDist::new(probs.into_iter().map(|p| p.unwrap_or(0.0)).collect())
        .map_err(|e| ParseError::Invalid(e.to_string()))
}

/// α_0, α_1, … separated by whitespace or commas.
pub fn parse_alpha(s: &str) -> Result<DimDist, ParseError> {
    check_len(s)?;
    let mut alpha = Vec::new();
    for (ln, line) in content_lines(s) {
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let a: f64 = tok.parse().map_err(|_| syntax(ln, format!("expected a number, got {tok:?}")))?;
            alpha.push(a);
            if alpha.len() > MAX_DIM + 1 {
                return Err(syntax(ln, format!("more than {} entries", MAX_DIM + 1)));
            }
        }
    }
    DimDist::new(alpha).map_err(|e| ParseError::Invalid(e.to_string()))
}
