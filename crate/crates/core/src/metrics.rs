//! Closed-form performance: asymptotic and MRC SINR, spectral efficiency,
//! per-class energy efficiency, and the OFDM coherence numerology that maps
//! user speed to a class.

/// Speed of light rounded to `3·10⁸` m/s, the usual value for wavelength
/// arithmetic (1.9 GHz → 15.79 cm).
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// OFDM timing, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmNumerology {
    pub symbol_interval: f64,
    pub usable_interval: f64,
    pub guard_interval: f64,
}

impl Default for OfdmNumerology {
    /// `T_s = 1/14 ms`, `T_u = 1/15 ms`, `T_g = 1/220 ms`.
    fn default() -> Self {
        OfdmNumerology { symbol_interval: 1e-3 / 14.0, usable_interval: 1e-3 / 15.0, guard_interval: 1e-3 / 220.0 }
    }
}

impl OfdmNumerology {
    /// Nyquist tones per symbol, `T_u / T_g`.
    pub fn nyquist_tones(&self) -> f64 {
        self.usable_interval / self.guard_interval
    }

    /// Samples spanned by an interval of `seconds`.
    pub fn samples_in(&self, seconds: f64) -> f64 {
        seconds / self.symbol_interval * self.nyquist_tones()
    }

    /// Duration of a frame of `samples` samples.
    pub fn duration_of(&self, samples: f64) -> f64 {
        samples / self.nyquist_tones() * self.symbol_interval
    }
}

/// One sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRow {
    pub num_antennas: usize,
    pub class_n: u32,
    /// Users counted in the energy efficiency, `K_n`.
    pub k_n: usize,
    /// Pilots uploaded per slot, `K′`.
    pub k_prime: usize,
    pub l_prime: usize,
    /// Linear SINR.
    pub sinr: f64,
    /// bits/s/Hz.
    pub se: f64,
    /// bits/J, normalized.
    pub ee: f64,
}

impl MetricsRow {
    pub fn sinr_db(&self) -> f64 {
        10.0 * self.sinr.log10()
    }
}

/// Value of [`sinr_asymptotic`] when no cell shares the pilot.
pub const INTERFERENCE_FREE: f64 = f64::INFINITY;

/// Large-`M` SINR `β_j² / Σ β_l²`. Returns [`INTERFERENCE_FREE`] for an
/// empty interferer list.
pub fn sinr_asymptotic(beta_serving: f64, beta_interferers: &[f64]) -> f64 {
    let interference: f64 = beta_interferers.iter().map(|b| b * b).sum();
    if beta_interferers.is_empty() {
        return INTERFERENCE_FREE;
    }
    beta_serving * beta_serving / interference
}

/// MRC uplink SINR with `L′` pilot-sharing cells:
///
/// `τ(M−1)P_u² / (τ(K L̄′² − 1 + γ(L′−1)(M−2)) P_u² + L̄′(K+τ) P_u + 1)`
///
/// with `L̄′ = (L′ − 1)γ + 1`. Meaningful for `M ≥ 2`, `L′ ≥ 1`.
pub fn sinr_closed_form(
    num_antennas: usize,
    num_users: usize,
    tau: usize,
    gamma: f64,
    l_prime: usize,
    uplink_power: f64,
) -> f64 {
    let m = num_antennas as f64;
    let k = num_users as f64;
    let tau = tau as f64;
    let lp = l_prime as f64;
    let lbar = (lp - 1.0) * gamma + 1.0;
    let pu2 = uplink_power * uplink_power;
    let num = tau * (m - 1.0) * pu2;
    let den =
        tau * (k * lbar * lbar - 1.0 + gamma * (lp - 1.0) * (m - 2.0)) * pu2 + lbar * (k + tau) * uplink_power + 1.0;
    num / den
}

/// `((T − τ)/T) K log₂(1 + SINR)`.
pub fn spectral_efficiency(frame_len: usize, tau: usize, num_users: usize, sinr: f64) -> f64 {
    let t = frame_len as f64;
    (t - tau as f64) / t * num_users as f64 * (1.0 + sinr).log2()
}

/// Class-`n` pre-log `n(T − τ) / (nT − (n − 1)τ)`: the data fraction when
/// one pilot is sent per `n` frames.
pub fn energy_prelog(class_n: u32, frame_len: usize, tau: usize) -> f64 {
    let n = class_n as f64;
    let t = frame_len as f64;
    let tau = tau as f64;
    n * (t - tau) / (n * t - (n - 1.0) * tau)
}

/// `(1/P_u) · prelog_n · K_n log₂(1 + SINR)`.
pub fn energy_efficiency(class_n: u32, frame_len: usize, tau: usize, k_n: usize, sinr: f64, uplink_power: f64) -> f64 {
    energy_prelog(class_n, frame_len, tau) * k_n as f64 * (1.0 + sinr).log2() / uplink_power
}

/// Samples in the time a user at `velocity` m/s takes to cross a quarter
/// wavelength at `carrier_freq` Hz, rounded to the nearest integer.
pub fn coherence_samples(velocity: f64, carrier_freq: f64, numerology: &OfdmNumerology) -> u64 {
    let slot = coherence_time(velocity, carrier_freq);
    numerology.samples_in(slot).round() as u64
}

/// Quarter-wavelength crossing time in seconds.
pub fn coherence_time(velocity: f64, carrier_freq: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_freq / 4.0 / velocity
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassChoice {
    pub class_n: u32,
    /// The user's coherence interval is shorter than the base frame.
    pub faster_than_base: bool,
}

/// `min(C(Q), floor(T_user / T_base))`, or class 1 with a warning flag when
/// the user is faster than the base frame allows.
pub fn class_for_coherence(user_samples: u64, base_samples: u64, max_class: u32) -> ClassChoice {
    let base = base_samples.max(1);
    if user_samples < base {
        return ClassChoice { class_n: 1, faster_than_base: true };
    }
    let n = (user_samples / base).min(max_class as u64) as u32;
    ClassChoice { class_n: n.max(1), faster_than_base: false }
}
