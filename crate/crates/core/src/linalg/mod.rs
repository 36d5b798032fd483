//! Complex-matrix primitives, seeded Gaussian generation and channel
//! composition.

mod channel;
mod matrix;
mod rng;

pub use channel::{
    compose_channel, default_large_scale, sample_fast_fading, ChannelMatrix, ChannelSet, FastFading, LargeScale,
    MIN_BETA,
};
pub use matrix::CMatrix;
pub use rng::{SeededRng, StreamTag};

pub use num_complex::Complex64 as C64;

/// `a^H b`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
