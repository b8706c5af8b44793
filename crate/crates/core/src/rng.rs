//! Reproducible random streams.
//!
//! A stream is named by a `(seed, index)` pair. The pair is folded into a
//! single 64-bit key by [`mix_stream`], and the key seeds a PCG-64 (MCG
//! variant) generator through `SeedableRng::seed_from_u64`:
//!
//! ```text
//! key = splitmix64(seed ^ splitmix64(index ^ 0x9E37_79B9_7F4A_7C15))
//! ```
//!
//! `splitmix64` is the finalizer of Steele, Lea and Flood's SplitMix64.
//! Replicate `i` of an experiment always uses stream index `i`, so results
//! do not depend on how replicates are scheduled across threads.

use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

pub type StreamRng = Pcg64Mcg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStreamSpec {
    pub seed: u64,
    pub index: u64,
}

impl RngStreamSpec {
    pub fn new(seed: u64, index: u64) -> Self {
        Self { seed, index }
    }

    pub fn key(&self) -> u64 {
        mix_stream(self.seed, self.index)
    }

    pub fn rng(&self) -> StreamRng {
        StreamRng::seed_from_u64(self.key())
    }

    /// Stream for a sub-task of this one (e.g. replicate `i` of a job that was
    /// itself handed stream `self`).
    pub fn child(&self, index: u64) -> Self {
        Self {
            seed: self.key(),
            index,
        }
    }
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix_stream(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index ^ 0x9E37_79B9_7F4A_7C15))
}
