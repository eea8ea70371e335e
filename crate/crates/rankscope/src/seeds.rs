//! Deterministic seed derivation so that multi-start searches and
//! per-sample streams are reproducible regardless of scheduling.

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a base seed with a salt (one per call site) and an index.
pub(crate) fn derive(base: u64, salt: u64, idx: u64) -> u64 {
    splitmix64(splitmix64(base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)) ^ idx)
}
