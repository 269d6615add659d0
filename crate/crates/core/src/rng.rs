//! Seed derivation and the project-wide RNG.
//!
//! Every stochastic routine takes an explicit `u64` seed. Sub-streams are
//! derived by hashing the parent seed together with a label, so results do not
//! depend on the order in which parallel work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type LabRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives a child seed from `master` and a textual label (SHA-256 of
/// `master_le || label`, truncated to 64 bits).
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(label.as_bytes());
    let out = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&out[..8]);
    u64::from_le_bytes(bytes)
}

/// Derives a child seed from integer coordinates, e.g. `(M, trial)`.
pub fn derive_indexed(master: u64, tag: &str, idx: &[u64]) -> u64 {
    let mut label = String::with_capacity(tag.len() + 8 * idx.len());
    label.push_str(tag);
    for i in idx {
        label.push('/');
        label.push_str(&i.to_string());
    }
    derive_seed(master, &label)
}
