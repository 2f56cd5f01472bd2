//! Deterministic random-stream derivation.
//!
//! Every Monte-Carlo work unit (a shard of bits, one sampled topology, one
//! placement candidate) owns a ChaCha stream derived from the run seed and a
//! list of u64 tags identifying the unit. Merging partial results in unit
//! order is therefore bit-identical regardless of how many worker threads
//! execute the units.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain separators so different run types never share streams.
pub mod domain {
    pub const BER: u64 = 0x01;
    pub const BER_ANALYTIC: u64 = 0x02;
    pub const INFO_OUTAGE: u64 = 0x03;
    pub const ENERGY_OUTAGE: u64 = 0x04;
    pub const PLACEMENT: u64 = 0x05;
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A ChaCha8 stream keyed by (seed, tags...).
pub fn derive_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut state = seed;
    let mut mixed = splitmix(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(0xA24B_AED4_963E_E407);
        mixed ^= splitmix(&mut state);
    }
    state ^= mixed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
