//! Deterministic random number generation pinned to a published algorithm.
//!
//! The generator is PCG-XSH-RR 64/32 ("pcg32"): 64-bit LCG state with
//! multiplier `6364136223846793005`, output = 32-bit xorshift-high folded
//! through a random rotation. Seeding follows the reference implementation:
//! `state = 0; inc = (stream << 1) | 1; step(); state += seed; step();`
//!
//! Gaussian variates use the Box–Muller transform on consecutive uniforms:
//! `z0 = √(−2 ln u1) cos(2π u2)`, `z1 = √(−2 ln u1) sin(2π u2)`, where
//! `u1 = (next_u32 + 1) / 2^32` and `u2 = next_u32 / 2^32`; `z1` is cached
//! and returned on the following call. Any implementation, in any language,
//! reproducing these two layers bit-for-bit yields identical samples.

const MULT: u64 = 6364136223846793005;

/// PCG-XSH-RR 64/32 generator.
#[derive(Debug, Clone)]
pub struct Pcg32 {
    state: u64,
    inc: u64,
    spare_normal: Option<f64>,
}

impl Pcg32 {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = Pcg32 {
            state: 0,
            inc: (stream << 1) | 1,
            spare_normal: None,
        };
        rng.next_u32();
        rng.state = rng.state.wrapping_add(seed);
        rng.next_u32();
        rng
    }

    /// Default stream constant used throughout the crate.
    pub fn seeded(seed: u64) -> Self {
        Pcg32::new(seed, 0xda3e_39cb_94b9_5bdb)
    }

    pub fn next_u32(&mut self) -> u32 {
        let old = self.state;
        self.state = old.wrapping_mul(MULT).wrapping_add(self.inc);
        let xorshifted = (((old >> 18) ^ old) >> 27) as u32;
        let rot = (old >> 59) as u32;
        xorshifted.rotate_right(rot)
    }

    /// Uniform in `[0, 1)` with 32-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        self.next_u32() as f64 / 4294967296.0
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `[0, bound)` by rejection-free modulo on 64 bits of
    /// output (bias < 2^-32 for the bounds used here).
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        let hi = self.next_u32() as u64;
        let lo = self.next_u32() as u64;
        (((hi << 32) | lo) % bound as u64) as usize
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = (self.next_u32() as f64 + 1.0) / 4294967296.0;
        let u2 = self.next_u32() as f64 / 4294967296.0;
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_pcg32_reference_stream() {
        // Reference values for pcg32 with seed=42, stream=54 (O'Neill's demo).
        let mut rng = Pcg32::new(42, 54);
        let expect: [u32; 6] = [
            0xa15c_02b7,
            0x7b47_f409,
            0xba1d_3330,
            0x83d2_f293,
            0xbfa4_784b,
            0xcbed_606e,
        ];
        for &e in &expect {
            assert_eq!(rng.next_u32(), e);
        }
    }

    #[test]
    fn deterministic_and_stream_separated() {
        let a: Vec<u32> = {
            let mut r = Pcg32::seeded(7);
            (0..8).map(|_| r.next_u32()).collect()
        };
        let b: Vec<u32> = {
            let mut r = Pcg32::seeded(7);
            (0..8).map(|_| r.next_u32()).collect()
        };
        assert_eq!(a, b);
        let c: Vec<u32> = {
            let mut r = Pcg32::seeded(8);
            (0..8).map(|_| r.next_u32()).collect()
        };
        assert_ne!(a, c);
    }

    #[test]
    fn normal_moments_are_sane() {
        let mut rng = Pcg32::seeded(1);
        let n = 20000;
        let samples: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.03, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }
}
