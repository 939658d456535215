//! Seeded, named randomness streams. All randomness flows from one 64-bit
//! seed; each stage draws from its own substream keyed by name (and an
//! optional index for repeated stages), so inserting a stage never perturbs
//! another stage's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

fn key(seed: u64, name: &str, index: Option<u64>) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(name.as_bytes());
    if let Some(i) = index {
        h.update([0xff]);
        h.update(i.to_le_bytes());
    }
    h.finalize().into()
}

pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(key(seed, name, None))
}

pub fn substream(seed: u64, name: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(key(seed, name, Some(index)))
}

/// A derived 64-bit seed for APIs that take seeds rather than generators.
pub fn derived_seed(seed: u64, name: &str, index: u64) -> u64 {
    let k = key(seed, name, Some(index));
    u64::from_le_bytes(k[..8].try_into().unwrap())
}
