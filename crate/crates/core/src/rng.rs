//! Deterministic random substreams.
//!
//! Every independent unit of Monte-Carlo work (a grid cell, a replicate)
//! gets its own generator seeded from `(seed, cell, replicate)`, so results
//! do not depend on how rayon schedules the work.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Root of a family of reproducible random streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Substreams {
    seed: u64,
}

impl Substreams {
    pub const fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub const fn seed(&self) -> u64 {
        self.seed
    }

    /// Child root for a grid cell; its streams are disjoint from the parent's.
    pub fn cell(&self, cell: u64) -> Substreams {
        Substreams {
            seed: splitmix(self.seed ^ splitmix(cell.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }

    pub fn stream(&self, index: u64) -> StreamRng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&splitmix(self.seed).to_le_bytes());
        key[8..16].copy_from_slice(&splitmix(self.seed ^ 0x9e37_79b9_7f4a_7c15).to_le_bytes());
        key[16..24].copy_from_slice(&index.to_le_bytes());
        key[24..].copy_from_slice(&splitmix(index ^ self.seed.rotate_left(17)).to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
