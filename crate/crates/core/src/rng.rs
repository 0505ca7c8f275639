//! Seeded random streams.
//!
//! Every simulation draws from a ChaCha8 generator. Worker `i` of a run with
//! master seed `s` uses the generator seeded from `s` with its stream word set
//! to `i`, so streams are independent, and results never depend on how work is
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_2011;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` under `master_seed`.
pub fn stream_rng(master_seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
