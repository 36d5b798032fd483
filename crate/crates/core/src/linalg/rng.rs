use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Distinguishes independent streams that share a `(trial, slot, cell)`
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamTag {
    Channel = 1,
    PilotNoise = 2,
    DownlinkNoise = 3,
    Symbols = 4,
    Schedule = 5,
    Estimate = 6,
}

/// Deterministic generator keyed by a seed tuple. Equal tuples give equal
/// streams; no generator state is shared between tuples.
#[derive(Debug, Clone)]
pub struct SeededRng(ChaCha8Rng);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::from_tuple(&[seed])
    }

    /// Stream for one `(trial, slot, cell)` coordinate of a run.
    pub fn for_stream(seed: u64, trial: u64, slot: u64, cell: u64, tag: StreamTag) -> Self {
        Self::from_tuple(&[seed, trial, slot, cell, tag as u64])
    }

    pub fn from_tuple(parts: &[u64]) -> Self {
        let mut acc = 0x6A09_E667_F3BC_C908u64;
        for &p in parts {
            acc = splitmix64(acc ^ splitmix64(p));
        }
        let mut seed = [0u8; 32];
        for (i, chunk) in seed.chunks_mut(8).enumerate() {
            acc = splitmix64(acc.wrapping_add(i as u64));
            chunk.copy_from_slice(&acc.to_le_bytes());
        }
        SeededRng(ChaCha8Rng::from_seed(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        // Lemire's multiply-shift; bias is below 2^-64 * n, negligible here.
        ((self.0.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Circularly-symmetric complex Gaussian with unit total variance,
    /// `CN(0, 1)`, from one Box–Muller transform.
    pub fn complex_normal(&mut self) -> Complex64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        Complex64::new(r * theta.cos(), r * theta.sin())
    }

    pub fn complex_normal_vec(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.complex_normal()).collect()
    }

    /// Unit-energy QPSK symbol.
    pub fn qpsk(&mut self) -> Complex64 {
        let bits = self.0.next_u32();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(if bits & 1 == 0 { s } else { -s }, if bits & 2 == 0 { s } else { -s })
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
