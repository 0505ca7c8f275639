//! Two-source multiple-access channel: rate regions, outer bounds, the
//! coloring-table oracle and an achievability simulation.
//!
//! Rates are coefficients of log2 q. Corner d = (d1, d2) maps to
//! `R_i(d) = d_i (T − d1 − d2)`.
//!
//! Regime checks: the region R* assumes `T/2 > m1 + m2`, the cooperative and
//! coloring bounds assume `T ≥ 2(m1 + m2)`. Each operation flags its own
//! condition in [`RateRegion::regime_ok`] rather than refusing to compute.

use thiserror::Error;

use crate::channel::ChannelError;
use crate::matrix::MatrixError;
use crate::subspace::SubspaceError;

pub mod achievability;
pub mod coloring;
pub mod region;

pub use achievability::{achievability_sim, full_column_rank_probability, AchievabilityResult};
pub use coloring::{color_table, row_color_bound, ColorTable, MAX_CELLS};
pub use region::{
    coloring_bound, coloring_corner_dims, coop_bound, coop_coloring_intersection, corner_count, rate_region_star,
    Corner, RateRegion,
};

#[derive(Debug, Error)]
pub enum MacError {
    #[error("outside the supported regime: {0}")]
    Regime(String),
    #[error("color table too large: {0} cells (limit 2^22)")]
    TooLarge(u64),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}
