//! Slot-by-slot Monte Carlo of the whole uplink-training/downlink chain.
//!
//! Each trial walks `num_slots` slots. In every slot each cell's scheduled
//! users send their pilots, every base station forms its pilot block and
//! estimates the channels of its own transmitting users, the CSI caches and
//! classifiers are updated, and the conjugate precoders of all cells are
//! applied to the true channels. Per-user signal and interference powers
//! are accumulated from the downlink gain matrices.
//!
//! True channels are block-faded per user: a user with coherence period
//! `n` and offset `φ` gets a fresh `CN(0, 1)` channel (to every base
//! station) on slots `t ≡ φ (mod n)` and keeps it otherwise.

use rayon::prelude::*;

use super::output::TraceRow;
use crate::classifier::{ClassifierParams, ClassifierState};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::estimation::{downlink_gains, ls_estimate, precode_mrt_available, receive_pilots, CsiCache, PilotBook};
use crate::linalg::{ChannelSet, SeededRng, StreamTag};
use crate::scheduler::{sparsity_mask, PilotPlan, SparsityMask};

/// Block-fading period and alignment of one user's true channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coherence {
    pub period: u32,
    pub offset: u32,
}

impl Coherence {
    fn redraws_at(&self, slot: u64) -> bool {
        slot > 0 && slot % self.period as u64 == self.offset as u64 % self.period as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub num_slots: u64,
    pub trials: usize,
    /// Adds `CN(0, 1)` noise to the pilot blocks and counts unit noise power
    /// in the downlink SINR.
    pub noise: bool,
    /// Per cell, per user channel dynamics. Defaults to each user's planned
    /// `(class_n, phase)`.
    pub coherence: Option<Vec<Vec<Coherence>>>,
    /// Leading slots that run the full chain but are left out of the
    /// tallies, so that every user holds CSI once measurement starts.
    pub warmup_slots: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { num_slots: 30, trials: 10, noise: true, coherence: None, warmup_slots: 0 }
    }
}

/// Accumulated downlink powers of one user.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PowerTally {
    pub signal: f64,
    pub interference: f64,
    pub noise: f64,
    /// Slots in which the user had CSI and was served.
    pub slots: u64,
}

impl PowerTally {
    /// Ratio of averaged powers.
    pub fn sinr(&self) -> f64 {
        self.signal / (self.interference + self.noise)
    }

    fn absorb(&mut self, other: &PowerTally) {
        self.signal += other.signal;
        self.interference += other.interference;
        self.noise += other.noise;
        self.slots += other.slots;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    /// `tallies[cell][user]`, summed over trials.
    pub tallies: Vec<Vec<PowerTally>>,
    /// Classifier evaluations of the first trial. User ids are global,
    /// `cell * K + user`.
    pub trace: Vec<TraceRow>,
    /// Classifier state at the end of the first trial.
    pub final_classes: Vec<Vec<u32>>,
}

impl SimOutcome {
    pub fn sinr(&self) -> Vec<Vec<f64>> {
        self.tallies.iter().map(|c| c.iter().map(PowerTally::sinr).collect()).collect()
    }

    /// Network-wide ratio of averaged powers.
    pub fn mean_sinr(&self) -> f64 {
        let mut total = PowerTally::default();
        for t in self.tallies.iter().flatten() {
            total.absorb(t);
        }
        total.sinr()
    }
}

struct TrialResult {
    tallies: Vec<Vec<PowerTally>>,
    trace: Vec<TraceRow>,
    final_classes: Vec<Vec<u32>>,
}

fn check_plan(cfg: &SystemConfig, plan: &PilotPlan) -> Result<()> {
    if plan.cells() != (0..cfg.num_cells).collect::<Vec<_>>() {
        return Err(Error::Dimension(format!("plan covers cells {:?}, expected 0..{}", plan.cells(), cfg.num_cells)));
    }
    for cell in 0..cfg.num_cells {
        let users: Vec<usize> = plan.cell(cell).map(|u| u.user_id).collect();
        if users != (0..cfg.num_users).collect::<Vec<_>>() {
            return Err(Error::Dimension(format!("cell {cell} plan does not list users 0..{}", cfg.num_users)));
        }
    }
    if let Some(u) = plan.assignments().iter().find(|u| u.class_n > cfg.max_class) {
        return Err(Error::ClassBound { class_n: u.class_n, max_class: cfg.max_class });
    }
    if let Some(u) = plan.assignments().iter().find(|u| u.pilot_id >= cfg.num_pilots) {
        return Err(Error::UnknownPilot(u.pilot_id));
    }
    Ok(())
}

/// Runs `opts.trials` independent trials in parallel and sums their
/// tallies in trial order, so the outcome depends only on
/// `(cfg, plan, opts, seed)`.
pub fn run_slot_simulation(cfg: &SystemConfig, plan: &PilotPlan, opts: &SimOptions, seed: u64) -> Result<SimOutcome> {
    check_plan(cfg, plan)?;
    if opts.trials == 0 {
        return Err(Error::Validation { field: "trials", message: "must be >= 1".into() });
    }
    let coherence = match &opts.coherence {
        Some(c) => {
            if c.len() != cfg.num_cells || c.iter().any(|v| v.len() != cfg.num_users || v.iter().any(|x| x.period == 0))
            {
                return Err(Error::Dimension("coherence must give a nonzero period for every user".into()));
            }
            c.clone()
        }
        None => (0..cfg.num_cells)
            .map(|cell| plan.cell(cell).map(|u| Coherence { period: u.class_n, offset: u.phase }).collect())
            .collect(),
    };
    let book = PilotBook::fourier(cfg.pilot_len, cfg.num_pilots)?;

    let results: Vec<TrialResult> = (0..opts.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, plan, opts, &coherence, &book, seed, trial as u64))
        .collect::<Result<_>>()?;

    let mut tallies = vec![vec![PowerTally::default(); cfg.num_users]; cfg.num_cells];
    for r in &results {
        for (acc, t) in tallies.iter_mut().flatten().zip(r.tallies.iter().flatten()) {
            acc.absorb(t);
        }
    }
    let first = results.into_iter().next().expect("at least one trial");
    Ok(SimOutcome { tallies, trace: first.trace, final_classes: first.final_classes })
}

fn run_trial(
    cfg: &SystemConfig,
    plan: &PilotPlan,
    opts: &SimOptions,
    coherence: &[Vec<Coherence>],
    book: &PilotBook,
    seed: u64,
    trial: u64,
) -> Result<TrialResult> {
    let l = cfg.num_cells;
    let k = cfg.num_users;
    let m = cfg.num_antennas;
    let params = ClassifierParams::from_config(cfg);
    let pilot_maps: Vec<Vec<usize>> = (0..l).map(|c| plan.pilot_map(c)).collect();

    let mut channels = ChannelSet::draw(cfg, |bs| SeededRng::for_stream(seed, trial, 0, bs as u64, StreamTag::Channel));
    let mut caches: Vec<CsiCache> = (0..l).map(|_| CsiCache::new(k, m)).collect();
    let mut classifiers: Vec<Vec<ClassifierState>> =
        (0..l).map(|c| plan.cell(c).map(|u| ClassifierState::new(c * k + u.user_id, u.class_n)).collect()).collect();
    let mut tallies = vec![vec![PowerTally::default(); k]; l];
    let mut trace = Vec::new();

    for t in 0..opts.num_slots {
        // block-fading redraws, every link of the user at once
        for (cell, users) in coherence.iter().enumerate() {
            let mut rng = SeededRng::for_stream(seed, trial, t, cell as u64, StreamTag::Channel);
            for (user, coh) in users.iter().enumerate() {
                if coh.redraws_at(t) {
                    for bs in 0..l {
                        let h = rng.complex_normal_vec(m);
                        channels.link_mut(bs, cell).redraw_user(user, &h)?;
                    }
                }
            }
        }

        let masks: Vec<SparsityMask> = (0..l).map(|c| sparsity_mask(plan, c, t)).collect();
        for bs in 0..l {
            let links: Vec<_> = (0..l).map(|c| channels.link(bs, c)).collect();
            let mut noise = SeededRng::for_stream(seed, trial, t, bs as u64, StreamTag::PilotNoise);
            let block =
                receive_pilots(&links, &masks, book, &pilot_maps, cfg.uplink_power, opts.noise.then_some(&mut noise))?;
            let active: Vec<usize> = (0..k).filter(|&u| masks[bs].get(u)).collect();
            let pilots: Vec<usize> = active.iter().map(|&u| pilot_maps[bs][u]).collect();
            let estimates = ls_estimate(&block, book, &pilots)?;

            let mut fresh: Vec<Option<Vec<_>>> = vec![None; k];
            let evaluate = t % cfg.classify_period as u64 == 0;
            for (&u, est) in active.iter().zip(estimates) {
                if evaluate {
                    let up = classifiers[bs][u].update(&est, &params)?;
                    if trial == 0 {
                        trace.push(TraceRow {
                            slot: t,
                            user_id: bs * k + u,
                            class_n: up.class_n,
                            persisted: up.persisted,
                        });
                    }
                }
                fresh[u] = Some(est);
            }
            caches[bs].update(&fresh, &masks[bs])?;
        }

        if t < opts.warmup_slots {
            continue;
        }
        let precoders: Vec<_> = caches.iter().map(precode_mrt_available).collect();
        for cell in 0..l {
            let gains: Vec<_> =
                (0..l).map(|bs| downlink_gains(channels.link(bs, cell), &precoders[bs])).collect::<Result<_>>()?;
            for user in 0..k {
                if caches[cell].entry(user).is_none() {
                    continue;
                }
                let mut own = 0.0;
                let mut other = 0.0;
                for (bs, g) in gains.iter().enumerate() {
                    for stream in 0..k {
                        let p = cfg.downlink_power * g[(user, stream)].norm_sqr();
                        if bs == cell && stream == user {
                            own += p;
                        } else {
                            other += p;
                        }
                    }
                }
                let tally = &mut tallies[cell][user];
                tally.signal += own;
                tally.interference += other;
                tally.noise += if opts.noise { 1.0 } else { 0.0 };
                tally.slots += 1;
            }
        }
    }

    let final_classes = classifiers.iter().map(|c| c.iter().map(|s| s.class_n).collect()).collect();
    Ok(TrialResult { tallies, trace, final_classes })
}
