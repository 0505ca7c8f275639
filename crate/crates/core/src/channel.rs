//! Channel models: the matrix channel `Y = G X`, its subspace form, the
//! two-source multiple-access channel and the packet-erasure channel.
//!
//! Transition laws are evaluated in the log2 domain. Samplers take a
//! caller-owned RNG; see [`crate::rng`] for parallel streams.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::matrix::{MatrixError, MatrixGF};
use crate::qcount;
use crate::subspace::{Subspace, SubspaceError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("outside the supported regime: {0}")]
    Regime(String),
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// Point-to-point channel: `m` packets of `T` symbols in, `n` packets out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub q: u64,
    #[serde(rename = "T")]
    pub t: usize,
    pub m: usize,
    pub n: usize,
}

impl ChannelParams {
    pub fn new(q: u64, t: usize, m: usize, n: usize) -> Result<Self, ChannelError> {
        if !crate::field::is_prime_power(q) {
            return Err(FieldError::NotPrimePower(q).into());
        }
        Ok(ChannelParams { q, t, m, n })
    }

    pub fn log2q(&self) -> f64 {
        (self.q as f64).log2()
    }

    /// Arithmetic tables, available for q up to 256.
    pub fn field(&self) -> Result<FieldSpec, ChannelError> {
        Ok(FieldSpec::from_order(self.q)?)
    }
}

/// Two-source multiple-access channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacParams {
    pub q: u64,
    #[serde(rename = "T")]
    pub t: usize,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
}

impl MacParams {
    pub fn new(q: u64, t: usize, n: usize, m1: usize, m2: usize) -> Result<Self, ChannelError> {
        if !crate::field::is_prime_power(q) {
            return Err(FieldError::NotPrimePower(q).into());
        }
        Ok(MacParams { q, t, n, m1, m2 })
    }

    pub fn field(&self) -> Result<FieldSpec, ChannelError> {
        Ok(FieldSpec::from_order(self.q)?)
    }
}

/// Distribution of the number `N` of packets surviving erasure, over `0..=m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErasureDist {
    probs: Vec<f64>,
}

impl ErasureDist {
    pub fn new(probs: Vec<f64>) -> Result<Self, ChannelError> {
        if probs.is_empty() {
            return Err(ChannelError::Distribution("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(ChannelError::Distribution(format!("entry {p} is not a nonnegative number")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(ChannelError::Distribution(format!("entries sum to {total}, not 1")));
        }
        Ok(ErasureDist { probs })
    }

    /// All mass on `N = k`.
    pub fn point(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        ErasureDist { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest `N` with positive probability.
    pub fn max_value(&self) -> usize {
        self.probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
    }

    /// (E[N], E[N^2]).
    pub fn moments(&self) -> (f64, f64) {
        self.probs.iter().enumerate().fold((0.0, 0.0), |(m1, m2), (k, p)| {
            let k = k as f64;
            (m1 + p * k, m2 + p * k * k)
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (k, p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        self.max_value()
    }
}

/// A probability given by its log2, with the linear value (0 on underflow).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probability {
    pub log2: f64,
    pub value: f64,
}

impl Probability {
    pub fn from_log2(log2: f64) -> Self {
        Probability { log2, value: log2.exp2() }
    }

    pub fn zero() -> Self {
        Probability { log2: f64::NEG_INFINITY, value: 0.0 }
    }
}

fn check_shape(x: &MatrixGF, rows: usize, t: usize, what: &str) -> Result<(), ChannelError> {
    if x.rows() != rows || x.cols() != t {
        return Err(ChannelError::Shape(format!("{what} is {}x{}, expected {rows}x{t}", x.rows(), x.cols())));
    }
    Ok(())
}

/// One use of the matrix channel: `Y = G x` with `G` uniform over n×m matrices.
pub fn matrix_channel_step<R: Rng + ?Sized>(
    x: &MatrixGF,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<MatrixGF, ChannelError> {
    check_shape(x, params.m, params.t, "input")?;
    let g = MatrixGF::random(params.n, params.m, x.field(), rng);
    Ok(g.mul(x)?)
}

/// P(π_y | π_x) of the subspace channel: ψ(n, dim π_y) q^{-n dim π_x} when
/// π_y ⊆ π_x, and 0 otherwise.
pub fn subspace_transition_prob(
    pi_x: &Subspace,
    pi_y: &Subspace,
    params: &ChannelParams,
) -> Result<Probability, ChannelError> {
    for s in [pi_x, pi_y] {
        if s.ambient_dim() != params.t {
            return Err(ChannelError::Shape(format!("subspace of F_q^{} under T = {}", s.ambient_dim(), params.t)));
        }
    }
    if !pi_x.contains(pi_y)? {
        return Ok(Probability::zero());
    }
    let log2q = params.log2q();
    let lp = qcount::log2_psi(params.n as u32, pi_y.dim() as u32, log2q);
    if lp == f64::NEG_INFINITY {
        return Ok(Probability::zero());
    }
    Ok(Probability::from_log2(lp - (params.n * pi_x.dim()) as f64 * log2q))
}

/// One use of the MAC: `Y = G1 x1 + G2 x2` with independent uniform `G_i`.
pub fn mac_channel_step<R: Rng + ?Sized>(
    x1: &MatrixGF,
    x2: &MatrixGF,
    params: &MacParams,
    rng: &mut R,
) -> Result<MatrixGF, ChannelError> {
    check_shape(x1, params.m1, params.t, "first input")?;
    check_shape(x2, params.m2, params.t, "second input")?;
    let g1 = MatrixGF::random(params.n, params.m1, x1.field(), rng);
    let g2 = MatrixGF::random(params.n, params.m2, x2.field(), rng);
    Ok(g1.mul(x1)?.add(&g2.mul(x2)?)?)
}

/// P(π_y | π1, π2) of the subspace MAC, which sees the inputs only through π1 + π2.
pub fn mac_transition_prob(
    pi1: &Subspace,
    pi2: &Subspace,
    pi_y: &Subspace,
    params: &MacParams,
) -> Result<Probability, ChannelError> {
    let sum = pi1.sum(pi2)?;
    let p2p = ChannelParams { q: params.q, t: params.t, m: params.m1 + params.m2, n: params.n };
    subspace_transition_prob(&sum, pi_y, &p2p)
}

/// One use of the erasure channel `Y = E G x`: `G` uniform full-rank m×m and
/// `E` diagonal with `N ~ edist` ones at uniformly chosen positions.
/// Returns `(Y, N)`.
pub fn erasure_channel_step<R: Rng + ?Sized>(
    x: &MatrixGF,
    edist: &ErasureDist,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<(MatrixGF, usize), ChannelError> {
    let m = params.m;
    if 2 * m > params.t {
        return Err(ChannelError::Regime(format!("m <= floor(T/2) violated: m = {m}, T = {}", params.t)));
    }
    if edist.max_value() > m {
        return Err(ChannelError::Distribution(format!("N can exceed m = {m}")));
    }
    check_shape(x, m, params.t, "input")?;
    let field = x.field();
    let n_recv = edist.sample(rng);
    let g = MatrixGF::random_full_rank(m, m, field, rng);
    let mut rows: Vec<usize> = (0..m).collect();
    rows.shuffle(rng);
    let mut e = MatrixGF::zeros(m, m, field);
    for &r in &rows[..n_recv] {
        e.set(r, r, crate::field::FieldElem::ONE);
    }
    Ok((e.mul(&g)?.mul(x)?, n_recv))
}
