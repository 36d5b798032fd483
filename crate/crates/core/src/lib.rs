//! Multi-cell TDD massive MIMO simulation with coherence-interval user
//! classes, pilot skipping and time-shifted frames.
//!
//! Users whose channel stays coherent for `n` base frames are placed in
//! class `n` and upload a pilot once every `n` slots. Up to `n` users of the
//! same class share one orthogonal pilot sequence by shifting their frames
//! to distinct phases, so the sequence is never transmitted twice in one
//! slot of one cell. Skipping users are precoded with their last estimate.
//!
//! The crate is organised bottom-up:
//!
//! - [`config`]: scenario parameters, JSON loading and validation.
//! - [`linalg`]: complex matrices, seeded Gaussian generation, channel
//!   composition `G = H D^{1/2}`.
//! - [`scheduler`]: pilot/phase assignment, per-slot sparsity masks and
//!   contamination statistics.
//! - [`classifier`]: promote/demote class updates from channel persistence.
//! - [`estimation`]: pilot reception, least-squares estimation, CSI caching
//!   and conjugate (MRT) precoding.
//! - [`metrics`]: closed-form SINR, spectral and energy efficiency, and the
//!   OFDM coherence numerology.
//! - [`harness`]: slot-level Monte Carlo, closed-form sweeps, CSV and SVG
//!   output.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod classifier;
pub mod config;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod scheduler;

pub use config::SystemConfig;
pub use error::{Error, Result};
