//! Seeded random streams.
//!
//! Every randomized routine takes a 64-bit seed. Work that is split across
//! workers or trials draws from `stream(seed, index)`, so results depend only
//! on `(seed, index)` and never on scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// The root stream for `seed`.
pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An independent stream for sub-task `index` of a computation seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}
