//! Non-coherent network coding channels over finite fields.
//!
//! The crate models random linear network coding as a matrix channel
//! `Y = G X` with a uniformly random, unknown transfer matrix `G`, and its
//! subspace equivalent. It provides:
//!
//! * [`field`], [`matrix`], [`subspace`]: exact GF(q) linear algebra and
//!   exhaustive subspace enumeration, used as ground truth by the oracles;
//! * [`qcount`]: exact and log-domain subspace counting;
//! * [`channel`]: transition laws and seeded samplers for the point-to-point,
//!   multiple-access and erasure channels;
//! * [`capacity`]: mutual information over dimension distributions, a
//!   certified optimizer, closed-form capacities and bounds;
//! * [`mac`]: two-source rate regions, outer bounds and the coloring oracle;
//! * [`formats`]: text formats read by the command-line tool.

pub mod capacity;
pub mod channel;
pub mod field;
pub mod formats;
pub mod mac;
pub mod matrix;
pub mod qcount;
pub mod rng;
pub mod subspace;

pub use field::{FieldElem, FieldSpec};
pub use matrix::MatrixGF;
pub use subspace::Subspace;
