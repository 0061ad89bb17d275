//! Stateless, counter-based random numbers.
//!
//! Every draw is a pure function of a key tuple, so results never depend on
//! the order in which rays, messages or hypotheses are evaluated. The mixer is
//! the SplitMix64 finalizer applied in a chain over the key words.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash an ordered key tuple into 64 well-mixed bits.
#[inline]
pub fn hash_key(words: &[u64]) -> u64 {
    let mut h = GOLDEN;
    for &w in words {
        h = mix64(h.wrapping_add(GOLDEN) ^ w);
    }
    mix64(h)
}

/// A keyed stream: `CounterRng::new(&[seed, a, b]).uniform(0)` always yields
/// the same value for the same key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(words: &[u64]) -> Self {
        Self { key: hash_key(words) }
    }

    #[inline]
    pub fn bits(&self, counter: u64) -> u64 {
        mix64(self.key ^ mix64(counter.wrapping_add(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&self, counter: u64) -> f64 {
        (self.bits(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, n)`. Modulo bias is negligible for the small `n` used here.
    #[inline]
    pub fn below(&self, counter: u64, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.bits(counter) % n
    }

    /// Standard normal via Box-Muller on counters `2c` and `2c + 1`.
    pub fn gaussian(&self, counter: u64) -> f64 {
        let u1 = 1.0 - self.uniform(counter.wrapping_mul(2)); // (0, 1]
        let u2 = self.uniform(counter.wrapping_mul(2).wrapping_add(1));
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
