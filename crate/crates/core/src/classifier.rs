//! Coherence-class tracking from successive channel estimates.
//!
//! Each evaluated slot compares the new estimate against the previous
//! `C(k)` estimates. The slot persists when every comparison reaches
//! `1 − ε` normalized correlation. `C(k) + 1` consecutive persistent slots
//! promote the user (up to `C(Q)`); any failed slot demotes it.

use std::collections::VecDeque;

use num_complex::Complex64;

use crate::config::{Demotion, SystemConfig};
use crate::error::{Error, Result};
use crate::linalg::{inner, norm};

/// `|a^H b| / (‖a‖ ‖b‖)`, in `[0, 1]`.
pub fn similarity(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((inner(a, b).norm() / (na * nb)).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierParams {
    pub epsilon: f64,
    pub max_class: u32,
    pub demotion: Demotion,
}

impl ClassifierParams {
    pub fn from_config(cfg: &SystemConfig) -> Self {
        ClassifierParams { epsilon: cfg.persistence_tol, max_class: cfg.max_class, demotion: cfg.demotion }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierState {
    pub user_id: usize,
    pub class_n: u32,
    /// Newest first, at most `max_class + 1` entries.
    history: VecDeque<Vec<Complex64>>,
    pub persist_count: u32,
}

/// Outcome of one [`ClassifierState::update`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassUpdate {
    pub persisted: bool,
    pub class_n: u32,
    pub changed: bool,
}

impl ClassifierState {
    pub fn new(user_id: usize, class_n: u32) -> Self {
        ClassifierState { user_id, class_n: class_n.max(1), history: VecDeque::new(), persist_count: 0 }
    }

    pub fn history(&self) -> impl Iterator<Item = &[Complex64]> {
        self.history.iter().map(Vec::as_slice)
    }

    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    /// Feeds the current slot's estimate. With no history yet the slot
    /// persists vacuously.
    pub fn update(&mut self, estimate: &[Complex64], params: &ClassifierParams) -> Result<ClassUpdate> {
        if norm(estimate) == 0.0 {
            return Err(Error::ZeroVector);
        }
        let threshold = 1.0 - params.epsilon;
        let lookback = self.class_n as usize;
        let mut persisted = true;
        for past in self.history.iter().take(lookback) {
            if similarity(estimate, past)? < threshold {
                persisted = false;
                break;
            }
        }

        self.history.push_front(estimate.to_vec());
        self.history.truncate(params.max_class as usize + 1);

        let before = self.class_n;
        if persisted {
            self.persist_count += 1;
            if self.persist_count > self.class_n && self.class_n < params.max_class {
                self.class_n += 1;
                self.persist_count = 0;
            }
        } else {
            self.persist_count = 0;
            self.class_n = match params.demotion {
                Demotion::Step => self.class_n.saturating_sub(1).max(1),
                Demotion::Reset => 1,
            };
        }
        self.class_n = self.class_n.min(params.max_class);
        Ok(ClassUpdate { persisted, class_n: self.class_n, changed: self.class_n != before })
    }
}
