//! Monte-Carlo check of the lifted block code achieving a corner of R*.
//!
//! User i sends `X_i = [I | 0 | U_i]` with its identity block in its own
//! column range: `[I_d1 0 U1]` and `[0 I_d2 U2]`, zero-padded to m_i rows.
//! The receiver reads `[H1 H2]` from the first d1 + d2 columns of Y and
//! solves `[H1 H2] [U1; U2] = Y_rest`. Rank deficiency counts as failure.

use rand::Rng;
use serde::Serialize;

use crate::channel::{mac_channel_step, MacParams};
use crate::field::FieldSpec;
use crate::matrix::MatrixGF;

use super::MacError;

#[derive(Debug, Clone, Serialize)]
pub struct AchievabilityResult {
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    /// Probability that a uniform n×(d1+d2) matrix has full column rank.
    pub predicted: f64,
    /// Binomial standard deviation at the predicted rate.
    pub sigma: f64,
}

impl AchievabilityResult {
    pub fn from_counts(trials: u64, successes: u64, predicted: f64) -> Self {
        let rate = if trials == 0 { 1.0 } else { successes as f64 / trials as f64 };
        let sigma = if trials == 0 { 0.0 } else { (predicted * (1.0 - predicted) / trials as f64).sqrt() };
        AchievabilityResult { trials, successes, rate, predicted, sigma }
    }
}

/// `∏_{i<k} (1 − q^{i−n})`.
pub fn full_column_rank_probability(q: u64, n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| 1.0 - (q as f64).powi(i as i32 - n as i32)).product()
}

pub fn check_dims(d1: usize, d2: usize, mac: &MacParams) -> Result<(), MacError> {
    if d1 > mac.m1 || d2 > mac.m2 {
        return Err(MacError::Regime(format!(
            "d1 <= m1 and d2 <= m2 violated: d1 = {d1}, m1 = {}, d2 = {d2}, m2 = {}",
            mac.m1, mac.m2
        )));
    }
    if d1 + d2 > mac.n.min(mac.t) {
        return Err(MacError::Regime(format!(
            "d1 + d2 <= min(n, T) violated: d1 + d2 = {}, n = {}, T = {}",
            d1 + d2,
            mac.n,
            mac.t
        )));
    }
    Ok(())
}

fn codeword(d_own: usize, offset: usize, rows: usize, u: &MatrixGF, t: usize, f: &FieldSpec) -> MatrixGF {
    let mut x = MatrixGF::zeros(rows, t, f);
    let tail = t - u.cols();
    for r in 0..d_own {
        x.set(r, offset + r, crate::field::FieldElem::ONE);
        for c in 0..u.cols() {
            x.set(r, tail + c, u.get(r, c));
        }
    }
    x
}

/// One encode, transmit, decode round. Returns true on exact recovery.
pub fn achievability_trial<R: Rng + ?Sized>(
    d1: usize,
    d2: usize,
    mac: &MacParams,
    field: &FieldSpec,
    rng: &mut R,
) -> Result<bool, MacError> {
    let d = d1 + d2;
    let rest = mac.t - d;
    let u1 = MatrixGF::random(d1, rest, field, rng);
    let u2 = MatrixGF::random(d2, rest, field, rng);
    let x1 = codeword(d1, 0, mac.m1, &u1, mac.t, field);
    let x2 = codeword(d2, d1, mac.m2, &u2, mac.t, field);
    let y = mac_channel_step(&x1, &x2, mac, rng)?;
    let h = y.col_range(0, d);
    let Some(u) = h.solve_full_column_rank(&y.col_range(d, mac.t))? else {
        return Ok(false);
    };
    Ok(u.row_range(0, d1) == u1 && u.row_range(d1, d) == u2)
}

/// Run `trials` independent rounds with a single RNG.
pub fn achievability_sim<R: Rng + ?Sized>(
    d1: usize,
    d2: usize,
    mac: &MacParams,
    trials: u64,
    rng: &mut R,
) -> Result<AchievabilityResult, MacError> {
    check_dims(d1, d2, mac)?;
    let field = mac.field()?;
    let mut successes = 0;
    for _ in 0..trials {
        successes += u64::from(achievability_trial(d1, d2, mac, &field, rng)?);
    }
    Ok(AchievabilityResult::from_counts(trials, successes, full_column_rank_probability(mac.q, mac.n, d1 + d2)))
}
