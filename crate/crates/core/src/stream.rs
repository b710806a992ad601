//! Deterministic RNG substream derivation.
//!
//! Sweeps and trial loops derive one independent ChaCha stream per work item
//! from a master seed plus the item's indices. The result depends only on
//! `(seed, ids)`, never on execution order, so parallel or sequential
//! scheduling produces identical output.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix `ids` into `seed` and return the derived stream seed.
pub fn derive_seed(seed: u64, ids: &[u64]) -> u64 {
    let mut state = splitmix64(seed);
    for &id in ids {
        state = splitmix64(state ^ splitmix64(id));
    }
    state
}

/// RNG for the work item identified by `ids` under the master `seed`.
pub fn substream(seed: u64, ids: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, ids))
}
