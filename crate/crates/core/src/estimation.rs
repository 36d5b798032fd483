//! Uplink pilot reception, least-squares estimation, CSI caching and
//! conjugate beamforming.
//!
//! With an orthonormal pilot book the least-squares solution is a plain
//! projection: correlating the received block with pilot `p` returns
//! `√(τ P_u)` times the sum of every channel that sent `p` in that slot,
//! plus `CN(0, 1)` noise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ChannelMatrix, ChannelSet, SeededRng};
use crate::scheduler::SparsityMask;

/// `OP` mutually orthonormal rows of length `τ`: the first `OP` rows of the
/// normalized DFT basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBook {
    tau: usize,
    rows: Vec<Vec<Complex64>>,
}

impl PilotBook {
    pub fn fourier(tau: usize, num_pilots: usize) -> Result<Self> {
        if tau == 0 || num_pilots > tau {
            return Err(Error::Validation {
                field: "num_pilots",
                message: format!("{num_pilots} orthonormal sequences do not fit in length {tau}"),
            });
        }
        let scale = 1.0 / (tau as f64).sqrt();
        let rows = (0..num_pilots)
            .map(|p| {
                (0..tau)
                    .map(|t| {
                        let angle = -std::f64::consts::TAU * ((p * t) % tau) as f64 / tau as f64;
                        Complex64::from_polar(scale, angle)
                    })
                    .collect()
            })
            .collect();
        Ok(PilotBook { tau, rows })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn sequence(&self, pilot_id: usize) -> Result<&[Complex64]> {
        self.rows.get(pilot_id).map(Vec::as_slice).ok_or(Error::UnknownPilot(pilot_id))
    }
}

/// `Y_j^p`, `M×τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedPilotBlock {
    pub samples: CMatrix,
}

/// Forms the pilot block at one base station. `channels[l]` is the link
/// from the users of cell `l` to this base station; `masks[l]` and
/// `pilot_maps[l]` describe who in cell `l` transmits which sequence.
/// Noise is added when `noise` is given.
pub fn receive_pilots(
    channels: &[&ChannelMatrix],
    masks: &[SparsityMask],
    book: &PilotBook,
    pilot_maps: &[Vec<usize>],
    uplink_power: f64,
    noise: Option<&mut SeededRng>,
) -> Result<ReceivedPilotBlock> {
    if channels.len() != masks.len() || channels.len() != pilot_maps.len() {
        return Err(Error::Dimension(format!(
            "{} channel sets, {} masks, {} pilot maps",
            channels.len(),
            masks.len(),
            pilot_maps.len()
        )));
    }
    let m = channels.first().map(|c| c.num_antennas()).unwrap_or(0);
    let tau = book.tau();

    // Sum channels per pilot first; Y = Σ_p (Σ g) x_p^T.
    let mut per_pilot: Vec<Option<Vec<Complex64>>> = vec![None; book.len()];
    for ((link, mask), map) in channels.iter().zip(masks).zip(pilot_maps) {
        if link.num_antennas() != m || mask.len() != link.num_users() || map.len() != link.num_users() {
            return Err(Error::Dimension(format!(
                "link {}x{}, mask {}, pilot map {}",
                link.num_antennas(),
                link.num_users(),
                mask.len(),
                map.len()
            )));
        }
        for (k, &on) in mask.bits().iter().enumerate() {
            if !on {
                continue;
            }
            let p = map[k];
            book.sequence(p)?;
            let acc = per_pilot[p].get_or_insert_with(|| vec![Complex64::new(0.0, 0.0); m]);
            for (a, g) in acc.iter_mut().zip(link.user(k)) {
                *a += g;
            }
        }
    }

    let gain = (tau as f64 * uplink_power).sqrt();
    let mut samples = CMatrix::zeros(m, tau);
    for (p, acc) in per_pilot.iter().enumerate() {
        let Some(acc) = acc else { continue };
        let x = book.sequence(p)?;
        for (t, xt) in x.iter().enumerate() {
            let coeff = xt * gain;
            for (y, g) in samples.col_mut(t).iter_mut().zip(acc) {
                *y += g * coeff;
            }
        }
    }
    if let Some(rng) = noise {
        for t in 0..tau {
            for y in samples.col_mut(t) {
                *y += rng.complex_normal();
            }
        }
    }
    Ok(ReceivedPilotBlock { samples })
}

/// Projects the block onto each requested pilot: `Y · conj(x_p)`. The
/// result still carries the `√(τ P_u)` gain.
pub fn ls_estimate(
    block: &ReceivedPilotBlock,
    book: &PilotBook,
    active_pilots: &[usize],
) -> Result<Vec<Vec<Complex64>>> {
    let y = &block.samples;
    if y.cols() != book.tau() {
        return Err(Error::Dimension(format!("block has {} columns, pilots have length {}", y.cols(), book.tau())));
    }
    active_pilots
        .iter()
        .map(|&p| {
            let x = book.sequence(p)?;
            let mut est = vec![Complex64::new(0.0, 0.0); y.rows()];
            for (t, xt) in x.iter().enumerate() {
                let c = xt.conj();
                for (e, v) in est.iter_mut().zip(y.col(t)) {
                    *e += v * c;
                }
            }
            Ok(est)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsiEntry {
    pub estimate: Vec<Complex64>,
    /// Slots since the estimate was taken.
    pub age: u32,
}

/// Last estimate per user of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CsiCache {
    num_antennas: usize,
    entries: Vec<Option<CsiEntry>>,
}

impl CsiCache {
    pub fn new(num_users: usize, num_antennas: usize) -> Self {
        CsiCache { num_antennas, entries: vec![None; num_users] }
    }

    pub fn num_users(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, k: usize) -> Option<&CsiEntry> {
        self.entries[k].as_ref()
    }

    /// Refreshes the users flagged in `mask` and ages everyone else.
    /// `new_estimates[k]` must be `Some` exactly where the mask is set.
    pub fn update(&mut self, new_estimates: &[Option<Vec<Complex64>>], mask: &SparsityMask) -> Result<()> {
        if new_estimates.len() != self.entries.len() || mask.len() != self.entries.len() {
            return Err(Error::Dimension(format!(
                "{} estimates and mask of {} for {} users",
                new_estimates.len(),
                mask.len(),
                self.entries.len()
            )));
        }
        for (k, est) in new_estimates.iter().enumerate() {
            match (mask.get(k), est) {
                (false, Some(_)) => return Err(Error::CacheConsistency(k)),
                (true, None) => return Err(Error::Dimension(format!("no estimate for transmitting user {k}"))),
                (true, Some(e)) if e.len() != self.num_antennas => {
                    return Err(Error::Dimension(format!(
                        "estimate of length {}, expected {}",
                        e.len(),
                        self.num_antennas
                    )))
                }
                _ => {}
            }
        }
        for (entry, est) in self.entries.iter_mut().zip(new_estimates) {
            match est {
                Some(e) => *entry = Some(CsiEntry { estimate: e.clone(), age: 0 }),
                None => {
                    if let Some(entry) = entry {
                        entry.age += 1;
                    }
                }
            }
        }
        Ok(())
    }

    fn part(&self, fresh: bool) -> CMatrix {
        let mut out = CMatrix::zeros(self.num_antennas, self.entries.len());
        for (k, entry) in self.entries.iter().enumerate() {
            if let Some(e) = entry {
                if (e.age == 0) == fresh {
                    out.col_mut(k).copy_from_slice(&e.estimate);
                }
            }
        }
        out
    }

    /// `Ĝ`: columns estimated this slot, zero elsewhere.
    pub fn fresh_part(&self) -> CMatrix {
        self.part(true)
    }

    /// The complement of `Ĝ`: stale columns, zero for fresh ones.
    pub fn stale_part(&self) -> CMatrix {
        self.part(false)
    }
}

/// Conjugate beamformer `[Ĝ + Ĝ̄]^*`.
pub fn precode_mrt(cache: &CsiCache) -> Result<CMatrix> {
    if let Some(k) = cache.entries.iter().position(Option::is_none) {
        return Err(Error::ColdStart(k));
    }
    Ok(precode_mrt_available(cache))
}

/// Like [`precode_mrt`], with zero columns for users never estimated.
pub fn precode_mrt_available(cache: &CsiCache) -> CMatrix {
    let mut w = CMatrix::zeros(cache.num_antennas, cache.entries.len());
    for (k, entry) in cache.entries.iter().enumerate() {
        if let Some(e) = entry {
            for (dst, src) in w.col_mut(k).iter_mut().zip(&e.estimate) {
                *dst = src.conj();
            }
        }
    }
    w
}

/// `G^T W`: entry `(k, k')` is the gain from stream `k'` of the
/// transmitting base station to user `k` of the receiving cell.
pub fn downlink_gains(link: &ChannelMatrix, precoder: &CMatrix) -> Result<CMatrix> {
    let g = link.entries();
    if g.rows() != precoder.rows() {
        return Err(Error::Dimension(format!(
            "channel {}x{}, precoder {}x{}",
            g.rows(),
            g.cols(),
            precoder.rows(),
            precoder.cols()
        )));
    }
    Ok(CMatrix::from_fn(g.cols(), precoder.cols(), |k, kp| {
        g.col(k).iter().zip(precoder.col(kp)).map(|(a, b)| a * b).sum()
    }))
}

/// Downlink samples at every cell: `y_j = √P_d Σ_l G_{l→j}^T W_l x_l + w_j`.
pub fn downlink_receive(
    channels: &ChannelSet,
    precoders: &[CMatrix],
    symbols: &[Vec<Complex64>],
    downlink_power: f64,
    mut noise: Option<&mut SeededRng>,
) -> Result<Vec<Vec<Complex64>>> {
    let l = channels.num_cells();
    if precoders.len() != l || symbols.len() != l {
        return Err(Error::Dimension(format!(
            "{} precoders and {} symbol vectors for {l} cells",
            precoders.len(),
            symbols.len()
        )));
    }
    let amp = downlink_power.sqrt();
    let mut out = Vec::with_capacity(l);
    for cell in 0..l {
        let k = channels.link(cell, cell).num_users();
        let mut y = vec![Complex64::new(0.0, 0.0); k];
        for bs in 0..l {
            let gains = downlink_gains(channels.link(bs, cell), &precoders[bs])?;
            if symbols[bs].len() != gains.cols() {
                return Err(Error::Dimension(format!("{} symbols for {} streams", symbols[bs].len(), gains.cols())));
            }
            for (kp, x) in symbols[bs].iter().enumerate() {
                for (yk, a) in y.iter_mut().zip(gains.col(kp)) {
                    *yk += a * x * amp;
                }
            }
        }
        if let Some(rng) = noise.as_deref_mut() {
            for yk in &mut y {
                *yk += rng.complex_normal();
            }
        }
        out.push(y);
    }
    Ok(out)
}
