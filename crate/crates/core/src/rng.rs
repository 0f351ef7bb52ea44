//! Deterministic random streams.
//!
//! Every stochastic operation takes a [`ChaCha8Rng`]; seeds are derived by
//! hashing labelled parts so that independent streams never overlap and
//! results are stable across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type DttpRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DttpRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn rng_from_bytes(bytes: [u8; 32]) -> DttpRng {
    ChaCha8Rng::from_seed(bytes)
}

/// Hash-derived 64-bit seed: SHA-256 over the label and the parts (each
/// length-prefixed), truncated to the first 8 bytes, little endian.
pub fn derive_seed(label: &str, parts: &[&[u8]]) -> u64 {
    let mut h = Sha256::new();
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("8 bytes"))
}

/// Lowercase hex SHA-256 of `bytes`.
pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
