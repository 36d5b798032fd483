use super::{Provenance, ResultTable};
use crate::config::{validate, SystemConfig};
use crate::error::{Error, Result};
use crate::metrics::{energy_efficiency, sinr_closed_form, spectral_efficiency, MetricsRow};
use crate::scheduler::contamination_stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Antennas,
    ClassIndex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<usize>,
    /// Monte Carlo trials per point. Closed-form sweeps ignore it.
    pub trials: usize,
    pub fixed: SystemConfig,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, grid: Vec<usize>, trials: usize, fixed: SystemConfig) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Validation { field: "grid", message: "must not be empty".into() });
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation { field: "grid", message: "must be strictly increasing".into() });
        }
        if trials == 0 {
            return Err(Error::Validation { field: "trials", message: "must be >= 1".into() });
        }
        Ok(SweepSpec { variable, grid, trials, fixed: validate(fixed)? })
    }

    /// `lo..=hi` in steps of `step`.
    pub fn range(variable: SweepVariable, lo: usize, hi: usize, step: usize, fixed: SystemConfig) -> Result<Self> {
        if step == 0 || lo > hi {
            return Err(Error::Validation { field: "grid", message: format!("empty range {lo}..={hi} step {step}") });
        }
        Self::new(variable, (lo..=hi).step_by(step).collect(), 1, fixed)
    }
}

/// Evaluates one `(M, n)` point: `K′ = ceil(K/n)` pilots per slot set the
/// contamination level `L′`, which feeds the MRC SINR, the spectral
/// efficiency and the class-`n` energy efficiency (with `K_n = K`).
pub fn closed_form_point(cfg: &SystemConfig, num_antennas: usize, class_n: u32) -> Result<MetricsRow> {
    if class_n == 0 || class_n > cfg.max_class {
        return Err(Error::ClassBound { class_n, max_class: cfg.max_class });
    }
    let k = cfg.num_users;
    let k_prime = k.div_ceil(class_n as usize);
    let stats = contamination_stats(k_prime, cfg.num_pilots, cfg.num_cells, cfg.intercell_factor)?;
    let sinr = sinr_closed_form(num_antennas, k, cfg.pilot_len, cfg.intercell_factor, stats.l_prime, cfg.uplink_power);
    Ok(MetricsRow {
        num_antennas,
        class_n,
        k_n: k,
        k_prime,
        l_prime: stats.l_prime,
        sinr,
        se: spectral_efficiency(cfg.frame_len, cfg.pilot_len, k, sinr),
        ee: energy_efficiency(class_n, cfg.frame_len, cfg.pilot_len, k, sinr, cfg.uplink_power),
    })
}

/// Rows sorted by `(class, M)`.
pub fn sweep_antennas(spec: &SweepSpec, classes: &[u32]) -> Result<ResultTable> {
    if spec.variable != SweepVariable::Antennas {
        return Err(Error::Validation { field: "variable", message: "expected an antenna sweep".into() });
    }
    if let Some(&m) = spec.grid.iter().find(|&&m| !(2..=10_000).contains(&m)) {
        return Err(Error::Validation { field: "grid", message: format!("antenna count {m} outside [2, 10000]") });
    }
    let mut classes = classes.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut rows = Vec::with_capacity(classes.len() * spec.grid.len());
    for &n in &classes {
        for &m in &spec.grid {
            rows.push(closed_form_point(&spec.fixed, m, n)?);
        }
    }
    Ok(ResultTable { rows, provenance: Provenance::of(&spec.fixed) })
}

/// Class-index sweep at `spec.fixed.num_antennas`; rows sorted by class.
pub fn sweep_class(spec: &SweepSpec) -> Result<ResultTable> {
    if spec.variable != SweepVariable::ClassIndex {
        return Err(Error::Validation { field: "variable", message: "expected a class sweep".into() });
    }
    let mut rows = Vec::with_capacity(spec.grid.len());
    for &n in &spec.grid {
        let n =
            u32::try_from(n).map_err(|_| Error::ClassBound { class_n: u32::MAX, max_class: spec.fixed.max_class })?;
        rows.push(closed_form_point(&spec.fixed, spec.fixed.num_antennas, n)?);
    }
    Ok(ResultTable { rows, provenance: Provenance::of(&spec.fixed) })
}
