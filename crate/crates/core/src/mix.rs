//! Seeded 64-bit mixing used wherever the library needs a "random" function
//! that must be reproducible from a seed.

/// The splitmix64 finalizer.
#[inline]
pub fn fmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Absorbs `words` one at a time into a state seeded by `seed`.
#[inline]
pub fn mix(seed: u64, words: &[u64]) -> u64 {
    let mut h = fmix64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for &w in words {
        h = fmix64(h.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ w);
    }
    h
}
