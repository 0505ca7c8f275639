//! Capacity of the non-coherent matrix channel.
//!
//! The optimal input is uniform over subspaces of equal dimension, so the
//! search runs over the dimension distribution α (length `min(m, T) + 1`).
//! [`model`] evaluates the mutual information and its derivatives,
//! [`optimize`] finds and certifies the maximizer, [`brute`] checks the
//! reduction by enumerating the matrix channel, and [`closed_form`] holds the
//! asymptotic and large-T results, the coding-vector baseline and the
//! erasure-channel bounds.

use serde::Serialize;
use thiserror::Error;

use crate::channel::{ChannelError, ChannelParams};
use crate::matrix::MatrixError;

pub mod brute;
pub mod closed_form;
pub mod model;
pub mod optimize;

pub use brute::{brute_mutual_info, canonical_assignment, uniform_assignment, InputAssignment};
pub use closed_form::{
    asymptotic_capacity, coding_vector_rate, cv_gap, empirical_support_threshold, epsilon_q,
    erasure_bounds, exact_capacity_large_t, q0_inequalities_hold, q0_sufficient, support_set, Asymptotic, CvGap,
    ErasureBounds, LargeT, Q0Source, Q0, Q0_SCAN_LIMIT, SUPPORT_THRESHOLD,
};
pub use model::{gradient, hessian, log_f, mutual_info, Model};
pub use optimize::{kt_residual, optimize, optimize_with, OptimizeOptions, ACTIVE_EPS};

#[derive(Debug, Error)]
pub enum CapacityError {
    #[error("invalid dimension distribution: {0}")]
    InvalidDist(String),
    #[error("dimension distribution has {got} entries, expected min(m, T) + 1 = {expected}")]
    Length { expected: usize, got: usize },
    #[error("outside the supported regime: {0}")]
    Regime(String),
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("optimizer stopped after {iterations} iterations with KT residual {residual:e}")]
    NotConverged { residual: f64, iterations: usize, best: Box<CapacityResult> },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Probability vector over input subspace dimensions `0..=min(m, T)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimDist {
    alpha: Vec<f64>,
}

impl DimDist {
    pub fn new(alpha: Vec<f64>) -> Result<Self, CapacityError> {
        if alpha.is_empty() {
            return Err(CapacityError::InvalidDist("empty".into()));
        }
        if let Some(a) = alpha.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(CapacityError::InvalidDist(format!("entry {a} is not a nonnegative number")));
        }
        let total: f64 = alpha.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(CapacityError::InvalidDist(format!("entries sum to {total}, not 1")));
        }
        Ok(DimDist { alpha })
    }

    /// Build from nonnegative weights, normalizing them.
    pub fn from_weights(w: &[f64]) -> Result<Self, CapacityError> {
        let total: f64 = w.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(CapacityError::InvalidDist("weights must have a positive finite sum".into()));
        }
        DimDist::new(w.iter().map(|x| x / total).collect())
    }

    pub fn uniform(len: usize) -> Self {
        DimDist { alpha: vec![1.0 / len as f64; len] }
    }

    pub fn point(len: usize, k: usize) -> Self {
        let mut alpha = vec![0.0; len];
        alpha[k] = 1.0;
        DimDist { alpha }
    }

    /// Length a distribution must have for `params`.
    pub fn expected_len(params: &ChannelParams) -> usize {
        params.m.min(params.t) + 1
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Dimensions carrying more than `threshold` probability.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        (0..self.alpha.len()).filter(|&k| self.alpha[k] > threshold).collect()
    }

    pub(crate) fn check_for(&self, params: &ChannelParams) -> Result<(), CapacityError> {
        let expected = Self::expected_len(params);
        if self.alpha.len() != expected {
            return Err(CapacityError::Length { expected, got: self.alpha.len() });
        }
        Ok(())
    }
}

/// Certified optimum of the mutual information.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub capacity_bits: f64,
    pub alpha_star: DimDist,
    pub kt_lambda: f64,
    pub kt_residual: f64,
    pub iterations: usize,
}
