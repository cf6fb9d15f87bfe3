//! Deterministic seed derivation.
//!
//! Every stochastic draw (shot sampling, k-selection, initialization,
//! mini-batch shuffles) gets its own seed computed from the master seed and a
//! tuple of coordinates. Parallel and serial evaluation therefore consume
//! identical random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `coords` into `master`, one splitmix round per coordinate.
pub fn derive(master: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix(master.wrapping_add(GOLDEN)), |acc, &c| {
            splitmix(acc ^ c.wrapping_add(GOLDEN).wrapping_mul(0x2545_f491_4f6c_dd1d))
        })
}

pub fn rng(master: u64, coords: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, coords))
}

/// Domain tags keep unrelated streams apart even when coordinates collide.
pub mod stream {
    pub const INIT: u64 = 1;
    pub const COST: u64 = 2;
    pub const SHIFT: u64 = 3;
    pub const PRUNE: u64 = 4;
    pub const SHUFFLE: u64 = 5;
    pub const SPLIT: u64 = 6;
    pub const MEASURE_GROUP: u64 = 7;
}
