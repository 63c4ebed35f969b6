//! Counter-based pseudo-random numbers.
//!
//! `value(seed, stream, counter)` is a pure function of its arguments
//! (SplitMix64 finalizer over a mixed key), so any language can reproduce
//! the streams from the README recipe. No state is carried between calls
//! beyond an incrementing counter.

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic stream of f64 values derived from (seed, stream id).
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    stream: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream, counter: 0 }
    }

    /// Raw 64-bit word for the given counter value.
    pub fn word_at(seed: u64, stream: u64, counter: u64) -> u64 {
        splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ counter)
    }

    pub fn next_u64(&mut self) -> u64 {
        let w = Self::word_at(self.seed, self.stream, self.counter);
        self.counter += 1;
        w
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller (consumes two words).
    pub fn normal(&mut self) -> f64 {
        let u1 = self.next_f64().max(f64::MIN_POSITIVE);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}
