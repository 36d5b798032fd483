//! Experiment driver: closed-form sweeps, the slot-level Monte Carlo, the
//! classifier demo, and CSV/SVG output.

mod mobility;
mod output;
mod plot;
mod sim;
mod sweep;

pub use mobility::{bessel_j0, classify_demo, MobilityProfile, CARRIER_FREQ};
pub use output::{
    emit_csv, emit_trace_csv, format_sig, parse_csv, write_csv, write_trace_csv, SweepCsvRow, TraceRow, CSV_HEADER,
    TRACE_HEADER,
};
pub use plot::{emit_plot, render_svg, PlotMetric};
pub use sim::{run_slot_simulation, Coherence, PowerTally, SimOptions, SimOutcome};
pub use sweep::{closed_form_point, sweep_antennas, sweep_class, SweepSpec, SweepVariable};

use sha2::{Digest, Sha256};

use crate::config::{emit_config, SystemConfig};
use crate::metrics::MetricsRow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// First 16 hex digits of the SHA-256 of the emitted config.
    pub config_hash: String,
    pub seed: u64,
    /// Unix seconds, when recorded. Not written to CSV.
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn of(config: &SystemConfig) -> Self {
        let digest = Sha256::digest(emit_config(config).as_bytes());
        Provenance { config_hash: hex::encode(&digest[..8]), seed: config.rng_seed, timestamp: None }
    }

    pub fn stamped(mut self) -> Self {
        self.timestamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).ok().map(|d| d.as_secs());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<MetricsRow>,
    pub provenance: Provenance,
}

impl ResultTable {
    /// Rows of one class, in table order.
    pub fn class_rows(&self, class_n: u32) -> Vec<&MetricsRow> {
        self.rows.iter().filter(|r| r.class_n == class_n).collect()
    }

    pub fn classes(&self) -> Vec<u32> {
        let mut c: Vec<u32> = self.rows.iter().map(|r| r.class_n).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    pub fn antenna_counts(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.rows.iter().map(|r| r.num_antennas).collect();
        m.sort_unstable();
        m.dedup();
        m
    }
}
