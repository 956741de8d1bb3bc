//! Named, indexed random substreams derived from a single seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name of the generator, recorded in run manifests.
pub const PRNG_NAME: &str = "ChaCha8";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Independent generator for `(seed, tag, index)`; equal inputs give equal streams.
pub fn substream(seed: u64, tag: &str, index: u64) -> ChaCha8Rng {
    let mixed = splitmix64(splitmix64(seed ^ fnv1a(tag)) ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)));
    ChaCha8Rng::seed_from_u64(mixed)
}
