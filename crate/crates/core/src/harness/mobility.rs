//! Classifier demo under correlated fading.
//!
//! Channels evolve per slot as a first-order Gauss–Markov process
//! `h_{t+1} = ρ h_t + √(1 − ρ²) w_t` with the Clarke correlation
//! `ρ = J0(2π f_D T_slot)`, `f_D = v f / c`. Every user owns a distinct
//! pilot and uploads every slot so the classifier sees a fresh noisy LS
//! estimate each time.

use super::output::TraceRow;
use crate::classifier::{ClassifierParams, ClassifierState};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::estimation::{ls_estimate, receive_pilots, PilotBook};
use crate::linalg::{compose_channel, sample_fast_fading, LargeScale, SeededRng, StreamTag};
use crate::metrics::{OfdmNumerology, SPEED_OF_LIGHT};
use crate::scheduler::SparsityMask;

/// 1.9 GHz.
pub const CARRIER_FREQ: f64 = 1.9e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MobilityProfile {
    Static,
    /// 1.38 m/s (5 km/h).
    Pedestrian,
    /// 83.33 m/s (300 km/h).
    Train,
    Velocity(f64),
}

impl MobilityProfile {
    pub fn velocity(self) -> f64 {
        match self {
            MobilityProfile::Static => 0.0,
            MobilityProfile::Pedestrian => 1.38,
            MobilityProfile::Train => 83.33,
            MobilityProfile::Velocity(v) => v,
        }
    }

    /// Slot-to-slot channel correlation for frames of `frame_len` samples.
    pub fn correlation(self, frame_len: usize, carrier_freq: f64) -> f64 {
        let slot = OfdmNumerology::default().duration_of(frame_len as f64);
        let doppler = self.velocity() * carrier_freq / SPEED_OF_LIGHT;
        bessel_j0(2.0 * std::f64::consts::PI * doppler * slot)
    }
}

impl std::str::FromStr for MobilityProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(MobilityProfile::Static),
            "pedestrian" => Ok(MobilityProfile::Pedestrian),
            "train" => Ok(MobilityProfile::Train),
            other => Err(Error::Validation {
                field: "profile",
                message: format!("unknown profile {other:?}, expected static, pedestrian or train"),
            }),
        }
    }
}

/// Bessel function of the first kind, order zero, by its power series.
/// Accurate to about 1e-15 for `|x| ≤ 10`; beyond that the series loses
/// digits to cancellation.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Runs `slots` classifier updates for the `K` users of a single cell, all
/// starting at class 1, and returns one trace row per user per slot.
pub fn classify_demo(cfg: &SystemConfig, profile: MobilityProfile, slots: u64, seed: u64) -> Result<Vec<TraceRow>> {
    let k = cfg.num_users;
    let m = cfg.num_antennas;
    if k > cfg.num_pilots {
        return Err(Error::Capacity { required: k, available: cfg.num_pilots });
    }
    let book = PilotBook::fourier(cfg.pilot_len, cfg.num_pilots)?;
    let rho = profile.correlation(cfg.frame_len, CARRIER_FREQ);
    let innovation = (1.0 - rho * rho).max(0.0).sqrt();
    let params = ClassifierParams::from_config(cfg);
    let pilots: Vec<usize> = (0..k).collect();
    let mask = SparsityMask::all(k, true);
    let beta = LargeScale::uniform(k, 1.0)?;

    let mut rng = SeededRng::for_stream(seed, 0, 0, 0, StreamTag::Channel);
    let mut link = compose_channel(sample_fast_fading(m, k, &mut rng), beta)?;
    let mut states: Vec<ClassifierState> = (0..k).map(|u| ClassifierState::new(u, 1)).collect();
    let mut trace = Vec::with_capacity(slots as usize * k);

    for t in 0..slots {
        if t > 0 && innovation > 0.0 {
            let mut rng = SeededRng::for_stream(seed, 0, t, 0, StreamTag::Channel);
            for u in 0..k {
                let w = rng.complex_normal_vec(m);
                let h: Vec<_> = link.user(u).iter().zip(&w).map(|(h, w)| h * rho + w * innovation).collect();
                link.redraw_user(u, &h)?;
            }
        }
        let mut noise = SeededRng::for_stream(seed, 0, t, 0, StreamTag::PilotNoise);
        let block = receive_pilots(
            &[&link],
            std::slice::from_ref(&mask),
            &book,
            std::slice::from_ref(&pilots),
            cfg.uplink_power,
            Some(&mut noise),
        )?;
        let estimates = ls_estimate(&block, &book, &pilots)?;
        for (state, est) in states.iter_mut().zip(&estimates) {
            let up = state.update(est, &params)?;
            trace.push(TraceRow { slot: t, user_id: state.user_id, class_n: up.class_n, persisted: up.persisted });
        }
    }
    Ok(trace)
}
