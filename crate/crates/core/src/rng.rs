//! Deterministic counter-based random number generation.
//!
//! SplitMix64 with the standard constants, fixed here so every seeded
//! artifact (audit samples, Monte Carlo counts) is bit-reproducible across
//! platforms and runs. Substreams for sharded sampling derive as
//! `mix(seed XOR (shard+1)·GOLDEN)`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Finalizing mix of the SplitMix64 generator.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const GENERATOR_ID: &'static str = "splitmix64/v1";

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent substream for shard `k` of a base seed.
    pub fn substream(seed: u64, k: u64) -> Self {
        Self::new(mix(seed ^ k.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn substreams_differ_from_base_and_each_other() {
        let mut base = SplitMix64::new(7);
        let mut s0 = SplitMix64::substream(7, 0);
        let mut s1 = SplitMix64::substream(7, 1);
        let (a, b, c) = (base.next_u64(), s0.next_u64(), s1.next_u64());
        assert!(a != b && b != c && a != c);
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut r = SplitMix64::new(3);
        for _ in 0..1000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }
}
