//! Mutual information of the subspace channel as a function of α.
//!
//! With `w[k][d] = ψ(n,d) [k d] q^{-nk}` (the probability that a k-dimensional
//! input yields a d-dimensional output) and
//! `f(d) = Σ_{k≥d} [k d] q^{-nk} α_k / [T d]`,
//!
//! ```text
//! I(α)  = -Σ_k α_k Σ_d w[k][d] (log2 f(d) + nk log2 q)
//! I'_k  = -nk log2 q - Σ_d w[k][d] log2 f(d) - log2 e
//! I''_kj = -(1/ln 2) Σ_d w[k][d] ∂_j f(d) / f(d)
//! ```

use crate::channel::ChannelParams;
use crate::qcount::{log2_gaussian, log2_psi, log2_sum_exp2};

use super::{CapacityError, DimDist};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Per-instance tables in the log2 domain.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: ChannelParams,
    /// Input dimensions 0..kx.
    kx: usize,
    /// Output dimensions 0..ky.
    ky: usize,
    log2q: f64,
    /// log2 w[k][d].
    lw: Vec<Vec<f64>>,
    /// log2 of ∂f(d)/∂α_k = [k d] q^{-nk} / [T d].
    lc: Vec<Vec<f64>>,
}

impl Model {
    pub fn new(params: &ChannelParams) -> Self {
        let log2q = params.log2q();
        let (t, n) = (params.t as u32, params.n as u32);
        let kx = params.m.min(params.t) + 1;
        let ky = params.n.min(params.t) + 1;
        let mut lw = vec![vec![f64::NEG_INFINITY; ky]; kx];
        let mut lc = vec![vec![f64::NEG_INFINITY; ky]; kx];
        for (k, (lw_k, lc_k)) in lw.iter_mut().zip(lc.iter_mut()).enumerate() {
            let shift = (params.n * k) as f64 * log2q;
            for d in 0..ky.min(k + 1) {
                let g = log2_gaussian(k as u32, d as u32, log2q);
                lw_k[d] = log2_psi(n, d as u32, log2q) + g - shift;
                lc_k[d] = g - shift - log2_gaussian(t, d as u32, log2q);
            }
        }
        Model { params: *params, kx, ky, log2q, lw, lc }
    }

    pub fn input_dims(&self) -> usize {
        self.kx
    }

    pub fn output_dims(&self) -> usize {
        self.ky
    }

    /// P(dim Π_Y = d | dim Π_X = k).
    pub fn output_law(&self, k: usize, d: usize) -> f64 {
        self.lw[k][d].exp2()
    }

    pub fn log_f(&self, d: usize, alpha: &[f64]) -> f64 {
        if d >= self.ky {
            return f64::NEG_INFINITY;
        }
        log2_sum_exp2(
            (d..self.kx).filter(|&k| alpha[k] > 0.0).map(|k| self.lc[k][d] + alpha[k].log2()),
        )
    }

    fn all_log_f(&self, alpha: &[f64]) -> Vec<f64> {
        (0..self.ky).map(|d| self.log_f(d, alpha)).collect()
    }

    /// `Σ_d w[k][d] log2 f(d)`, skipping impossible outputs.
    fn expected_log_f(&self, k: usize, lf: &[f64]) -> f64 {
        (0..self.ky.min(k + 1))
            .filter(|&d| self.lw[k][d] > f64::NEG_INFINITY)
            .map(|d| {
                if lf[d] == f64::NEG_INFINITY {
                    f64::NEG_INFINITY
                } else {
                    self.lw[k][d].exp2() * lf[d]
                }
            })
            .sum()
    }

    pub fn mutual_info(&self, alpha: &[f64]) -> f64 {
        let lf = self.all_log_f(alpha);
        -(0..self.kx)
            .filter(|&k| alpha[k] > 0.0)
            .map(|k| alpha[k] * (self.expected_log_f(k, &lf) + (self.params.n * k) as f64 * self.log2q))
            .sum::<f64>()
    }

    pub fn gradient(&self, alpha: &[f64]) -> Vec<f64> {
        let lf = self.all_log_f(alpha);
        (0..self.kx)
            .map(|k| -((self.params.n * k) as f64) * self.log2q - self.expected_log_f(k, &lf) - LOG2_E)
            .collect()
    }

    pub fn hessian(&self, alpha: &[f64]) -> Vec<Vec<f64>> {
        let lf = self.all_log_f(alpha);
        let mut h = vec![vec![0.0; self.kx]; self.kx];
        for (k, row) in h.iter_mut().enumerate() {
            for (j, hkj) in row.iter_mut().enumerate() {
                let s: f64 = (0..self.ky)
                    .filter(|&d| self.lw[k][d] > f64::NEG_INFINITY && self.lc[j][d] > f64::NEG_INFINITY)
                    .map(|d| (self.lw[k][d] + self.lc[j][d] - lf[d]).exp2())
                    .sum();
                *hkj = -s / std::f64::consts::LN_2;
            }
        }
        h
    }
}

/// log2 f(d_y) for the dimension distribution `alpha`; `-inf` when no input
/// dimension at least `d_y` has positive probability.
pub fn log_f(d_y: usize, alpha: &DimDist, params: &ChannelParams) -> Result<f64, CapacityError> {
    alpha.check_for(params)?;
    Ok(Model::new(params).log_f(d_y, alpha.alpha()))
}

/// I(Π_X; Π_Y) in bits when Π_X is uniform within each dimension class.
pub fn mutual_info(alpha: &DimDist, params: &ChannelParams) -> Result<f64, CapacityError> {
    alpha.check_for(params)?;
    Ok(Model::new(params).mutual_info(alpha.alpha()))
}

/// Partial derivatives ∂I/∂α_k, with the −log2 e term of the Lagrangian.
pub fn gradient(alpha: &DimDist, params: &ChannelParams) -> Result<Vec<f64>, CapacityError> {
    alpha.check_for(params)?;
    Ok(Model::new(params).gradient(alpha.alpha()))
}

pub fn hessian(alpha: &DimDist, params: &ChannelParams) -> Result<Vec<Vec<f64>>, CapacityError> {
    alpha.check_for(params)?;
    Ok(Model::new(params).hessian(alpha.alpha()))
}
