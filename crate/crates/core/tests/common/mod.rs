//! Reference calculator shared by the integration tests. Written directly
//! from the printed rate formulas with no calls into the library, so that
//! agreement means two independent evaluations coincide.

#![allow(dead_code)]

/// Effective contaminating-cell count `(L′ − 1)γ + 1`, summed term by term.
pub fn effective_cells(l_prime: usize, gamma: f64) -> f64 {
    let mut total = 1.0;
    for _ in 1..l_prime {
        total += gamma;
    }
    total
}

/// MRC uplink SINR.
pub fn sinr(m: usize, k: usize, tau: usize, gamma: f64, l_prime: usize, pu: f64) -> f64 {
    let (m, k, tau, lp) = (m as f64, k as f64, tau as f64, l_prime as f64);
    let lbar = effective_cells(l_prime, gamma);
    let numerator = tau * (m - 1.0) * pu * pu;
    let coherent = tau * (k * lbar * lbar - 1.0 + gamma * (lp - 1.0) * (m - 2.0)) * pu * pu;
    let noncoherent = lbar * (k + tau) * pu;
    numerator / (coherent + noncoherent + 1.0)
}

pub fn log2_1p(x: f64) -> f64 {
    (1.0 + x).ln() / std::f64::consts::LN_2
}

pub fn spectral_efficiency(t: usize, tau: usize, k: usize, sinr: f64) -> f64 {
    let fraction = (t as f64 - tau as f64) / t as f64;
    fraction * k as f64 * log2_1p(sinr)
}

pub fn energy_efficiency(n: u32, t: usize, tau: usize, k_n: usize, sinr: f64, pu: f64) -> f64 {
    let (n, t, tau) = (n as f64, t as f64, tau as f64);
    let prelog = n * (t - tau) / (n * t - (n - 1.0) * tau);
    prelog * k_n as f64 * log2_1p(sinr) / pu
}

/// `|a − b| / |b|`, or `|a − b|` when `b` is zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}
