//! Scenario configuration.
//!
//! A config file is a flat JSON object whose keys are exactly the field
//! names of [`SystemConfig`]. Missing keys take the reference-scenario
//! defaults (seven cells, 30 users, 30 pilot symbols, 99-sample frames,
//! interference factor 0.3, class cap 30). Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// How a user is demoted when its channel fails to persist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Demotion {
    /// Drop one class per failed slot.
    #[default]
    Step,
    /// Fall straight back to class 1.
    Reset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// `L`, number of cells.
    pub num_cells: usize,
    /// `K`, users per cell.
    pub num_users: usize,
    /// `M`, antennas per base station.
    pub num_antennas: usize,
    /// `τ`, pilot symbols per frame.
    pub pilot_len: usize,
    /// `T`, symbols per frame; the class-1 coherence interval in samples.
    pub frame_len: usize,
    /// `γ` in `[0, 1]`.
    pub intercell_factor: f64,
    /// `P_u` as a per-symbol SNR (noise variance is 1).
    pub uplink_power: f64,
    /// `P_d`, normalized received downlink SNR.
    pub downlink_power: f64,
    /// `OP`, orthogonal pilot sequences available per cell.
    pub num_pilots: usize,
    /// `C(Q)`, the class cap.
    pub max_class: u32,
    /// `|ε|`, classifier tolerance on normalized correlation.
    pub persistence_tol: f64,
    pub rng_seed: u64,
    pub demotion: Demotion,
    /// Classifier runs on slots where `slot % classify_period == 0`.
    pub classify_period: u32,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            num_cells: 7,
            num_users: 30,
            num_antennas: 100,
            pilot_len: 30,
            frame_len: 99,
            intercell_factor: 0.3,
            uplink_power: 1.0,
            downlink_power: 1.0,
            num_pilots: 30,
            max_class: 30,
            persistence_tol: 0.05,
            rng_seed: 1,
            demotion: Demotion::Step,
            classify_period: 1,
        }
    }
}

fn field<T: serde::de::DeserializeOwned>(key: &str, value: Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Schema { key: key.to_string(), message: e.to_string() })
}

/// Parses a config document. Empty or whitespace-only text yields the
/// defaults. When `downlink_power` or `num_pilots` are absent they follow
/// `uplink_power` and `pilot_len` respectively.
pub fn load_config(text: &str) -> Result<SystemConfig> {
    let mut cfg = SystemConfig::default();
    if text.trim().is_empty() {
        return validate(cfg);
    }
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Schema { key: "<document>".into(), message: e.to_string() })?;
    let obj: Map<String, Value> = match doc {
        Value::Object(obj) => obj,
        other => {
            return Err(Error::Schema {
                key: "<document>".into(),
                message: format!("expected a JSON object, found {other}"),
            })
        }
    };

    let mut saw_pd = false;
    let mut saw_op = false;
    for (key, value) in obj {
        match key.as_str() {
            "num_cells" => cfg.num_cells = field(&key, value)?,
            "num_users" => cfg.num_users = field(&key, value)?,
            "num_antennas" => cfg.num_antennas = field(&key, value)?,
            "pilot_len" => cfg.pilot_len = field(&key, value)?,
            "frame_len" => cfg.frame_len = field(&key, value)?,
            "intercell_factor" => cfg.intercell_factor = field(&key, value)?,
            "uplink_power" => cfg.uplink_power = field(&key, value)?,
            "downlink_power" => {
                cfg.downlink_power = field(&key, value)?;
                saw_pd = true;
            }
            "num_pilots" => {
                cfg.num_pilots = field(&key, value)?;
                saw_op = true;
            }
            "max_class" => cfg.max_class = field(&key, value)?,
            "persistence_tol" => cfg.persistence_tol = field(&key, value)?,
            "rng_seed" => cfg.rng_seed = field(&key, value)?,
            "demotion" => cfg.demotion = field(&key, value)?,
            "classify_period" => cfg.classify_period = field(&key, value)?,
            _ => return Err(Error::Schema { key, message: "unknown key".into() }),
        }
    }
    if !saw_pd {
        cfg.downlink_power = cfg.uplink_power;
    }
    if !saw_op {
        cfg.num_pilots = cfg.pilot_len;
    }
    validate(cfg)
}

/// Serializes every field, so `load_config(&emit_config(c))` returns `c`.
pub fn emit_config(cfg: &SystemConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}

fn positive(field: &'static str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Validation { field, message: "must be >= 1".into() });
    }
    Ok(())
}

fn positive_real(field: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Validation { field, message: format!("must be finite and > 0, got {v}") });
    }
    Ok(())
}

pub fn validate(cfg: SystemConfig) -> Result<SystemConfig> {
    positive("num_cells", cfg.num_cells)?;
    positive("num_users", cfg.num_users)?;
    positive("num_antennas", cfg.num_antennas)?;
    positive("pilot_len", cfg.pilot_len)?;
    positive("frame_len", cfg.frame_len)?;
    positive("num_pilots", cfg.num_pilots)?;
    positive("max_class", cfg.max_class as usize)?;
    positive("classify_period", cfg.classify_period as usize)?;
    if cfg.pilot_len >= cfg.frame_len {
        return Err(Error::Validation {
            field: "pilot_len",
            message: format!("must be < frame_len ({}), got {}", cfg.frame_len, cfg.pilot_len),
        });
    }
    if !(0.0..=1.0).contains(&cfg.intercell_factor) {
        return Err(Error::Validation {
            field: "intercell_factor",
            message: format!("must lie in [0, 1], got {}", cfg.intercell_factor),
        });
    }
    positive_real("uplink_power", cfg.uplink_power)?;
    positive_real("downlink_power", cfg.downlink_power)?;
    let eps = cfg.persistence_tol;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Validation { field: "persistence_tol", message: format!("must lie in (0, 1), got {eps}") });
    }
    Ok(cfg)
}
