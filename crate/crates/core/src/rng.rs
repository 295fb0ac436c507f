//! Keyed random streams.
//!
//! A 64-bit seed is mixed once into a key; stream `id` is a xoshiro256++
//! generator whose state is expanded by SplitMix64 from `key ^ id`. Stream
//! `id` is a pure function of `(seed, id)`, so a column, trial or
//! realization can be regenerated on its own, in any order and on any
//! thread.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamKey {
    key: u64,
}

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        StreamKey {
            key: SplitMix64::seed_from_u64(seed).next_u64(),
        }
    }

    /// Independent generator for stream `id`, positioned at its start.
    #[inline]
    pub fn stream(&self, id: u64) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::seed_from_u64(self.key ^ id)
    }

    /// A child seed for stream `id`, for nesting keyed generators.
    pub fn child_seed(&self, id: u64) -> u64 {
        self.stream(id).next_u64()
    }
}
