//! SplitMix64 pseudo-random number generator.
//!
//! Every randomized behavior in this crate (centroid seeding, synthetic
//! image generation, per-block seed derivation) flows through this one
//! generator so that results are bit-reproducible across runs, platforms,
//! and worker schedules.

/// Weyl-sequence increment used by the state update ("golden gamma").
pub(crate) const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 (Sebastiano Vigna): fast, full-period, non-cryptographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next 64-bit output: advance the state by the golden gamma, then mix.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` from the 53 high bits of the next output.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const DENOM: f64 = (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 / DENOM
    }

    /// Bounded draw in `[0, bound)`. `bound` must be nonzero.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// One output step applied to `seed` directly, without retaining state.
    #[inline]
    pub fn mix(seed: u64) -> u64 {
        Self::new(seed).next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_vectors() {
        // Golden values computed with an independent implementation of the
        // published algorithm (seed 0 reproduces the canonical test vector).
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);

        let mut r = SplitMix64::new(42);
        assert_eq!(r.next_u64(), 0xBDD7_3226_2FEB_6E95);
        assert_eq!(r.next_u64(), 0x28EF_E333_B266_F103);

        let mut r = SplitMix64::new(0x0123_4567_89AB_CDEF);
        assert_eq!(r.next_u64(), 0x157A_3807_A48F_AA9D);
    }

    #[test]
    fn f64_uses_high_53_bits() {
        let mut r = SplitMix64::new(42);
        let expected = (0xBDD7_3226_2FEB_6E95u64 >> 11) as f64 / (1u64 << 53) as f64;
        assert_eq!(r.next_f64(), expected);
        let v = r.next_f64();
        assert!((0.0..1.0).contains(&v));
    }

    #[test]
    fn deterministic_stream() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn mix_is_one_step() {
        let mut r = SplitMix64::new(99);
        assert_eq!(SplitMix64::mix(99), r.next_u64());
    }
}
