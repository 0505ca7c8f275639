//! Mutual information of the matrix channel by exhaustive enumeration.
//!
//! For each input matrix with positive mass every transfer matrix
//! `G ∈ F_q^{n×m}` is applied explicitly, so the joint law of `(X, Y)` is
//! built without any subspace counting formula.

use std::collections::HashMap;

use crate::channel::ChannelParams;
use crate::field::FieldSpec;
use crate::matrix::MatrixGF;
use crate::subspace::{enumerate_grassmannian, ENUMERATION_LIMIT};

use super::{CapacityError, DimDist};

/// Probability mass on individual input matrices (m×T).
pub type InputAssignment = Vec<(MatrixGF, f64)>;

fn count(q: u64, exp: usize) -> Option<u64> {
    q.checked_pow(exp as u32).filter(|&v| v <= ENUMERATION_LIMIT)
}

fn guard(params: &ChannelParams) -> Result<(u64, u64), CapacityError> {
    let (q, t, m, n) = (params.q, params.t, params.m, params.n);
    let too_large = |what: &str| CapacityError::TooLarge(format!("{what} exceeds 2^20 at q={q}, T={t}, m={m}, n={n}"));
    count(q, m * t).ok_or_else(|| too_large("q^(mT)"))?;
    count(q, n * t).ok_or_else(|| too_large("q^(nT)"))?;
    let inputs = count(q, m * t).unwrap();
    let transfers = count(q, n * m).ok_or_else(|| too_large("q^(nm)"))?;
    Ok((inputs, transfers))
}

/// I(X; Y) in bits for the matrix channel under the given input law.
pub fn brute_mutual_info(px: &[(MatrixGF, f64)], params: &ChannelParams) -> Result<f64, CapacityError> {
    let (_, transfers) = guard(params)?;
    let field = params.field()?;
    let gs: Vec<MatrixGF> = (0..transfers).map(|i| MatrixGF::from_index(i, params.n, params.m, &field)).collect();
    let mut py: HashMap<u64, f64> = HashMap::new();
    let mut conditionals = Vec::new();
    for (x, p) in px.iter().filter(|(_, p)| *p > 0.0) {
        if x.rows() != params.m || x.cols() != params.t {
            return Err(CapacityError::Regime(format!("input is {}x{}, expected {}x{}", x.rows(), x.cols(), params.m, params.t)));
        }
        let mut hits: HashMap<u64, u64> = HashMap::new();
        for g in &gs {
            *hits.entry(g.mul(x)?.index()).or_default() += 1;
        }
        for (&y, &c) in &hits {
            *py.entry(y).or_default() += p * c as f64 / transfers as f64;
        }
        conditionals.push((*p, hits));
    }
    let mut info = 0.0;
    for (p, hits) in conditionals {
        for (y, c) in hits {
            let pyx = c as f64 / transfers as f64;
            info += p * pyx * (pyx / py[&y]).log2();
        }
    }
    Ok(info)
}

/// Spread α_d uniformly over every m×T matrix of rank d.
pub fn uniform_assignment(alpha: &DimDist, params: &ChannelParams) -> Result<InputAssignment, CapacityError> {
    alpha.check_for(params)?;
    let (inputs, _) = guard(params)?;
    let field = params.field()?;
    let xs: Vec<(MatrixGF, usize)> = (0..inputs)
        .map(|i| {
            let x = MatrixGF::from_index(i, params.m, params.t, &field);
            let r = x.rank();
            (x, r)
        })
        .collect();
    let mut per_rank = vec![0usize; alpha.len()];
    for (_, r) in &xs {
        per_rank[*r] += 1;
    }
    Ok(xs.into_iter().map(|(x, r)| (x, alpha.alpha()[r] / per_rank[r] as f64)).collect())
}

/// Put the mass α_d / [T d] of each d-dimensional subspace on a single
/// matrix: its RREF basis padded with zero rows.
pub fn canonical_assignment(alpha: &DimDist, params: &ChannelParams) -> Result<InputAssignment, CapacityError> {
    alpha.check_for(params)?;
    guard(params)?;
    let field: FieldSpec = params.field()?;
    let mut out = Vec::new();
    for (d, &a) in alpha.alpha().iter().enumerate() {
        let spaces: Vec<_> = enumerate_grassmannian(params.t, d, &field).map_err(crate::channel::ChannelError::from)?.collect();
        let each = a / spaces.len() as f64;
        for s in spaces {
            out.push((s.to_matrix(params.m).map_err(crate::channel::ChannelError::from)?, each));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::mutual_info;

    #[test]
    fn zero_input_carries_nothing() {
        let params = ChannelParams::new(2, 2, 1, 1).unwrap();
        let f = params.field().unwrap();
        assert_eq!(brute_mutual_info(&[(MatrixGF::zeros(1, 2, &f), 1.0)], &params).unwrap(), 0.0);
    }

    #[test]
    fn both_assignments_match_formula() {
        let params = ChannelParams::new(2, 2, 1, 1).unwrap();
        let a = DimDist::new(vec![0.3, 0.7]).unwrap();
        let exact = mutual_info(&a, &params).unwrap();
        for px in [uniform_assignment(&a, &params).unwrap(), canonical_assignment(&a, &params).unwrap()] {
            assert!((brute_mutual_info(&px, &params).unwrap() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn guard_refuses_large_instances() {
        let params = ChannelParams::new(16, 6, 1, 1).unwrap();
        assert!(matches!(brute_mutual_info(&[], &params), Err(CapacityError::TooLarge(_))));
    }
}
