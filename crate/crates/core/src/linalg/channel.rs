use num_complex::Complex64;

use super::{CMatrix, SeededRng};
use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Floor applied to large-scale gains so `D^{1/2}` stays well defined.
pub const MIN_BETA: f64 = 1e-12;

/// `M×K` matrix of i.i.d. `CN(0, 1)` small-scale coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FastFading {
    pub entries: CMatrix,
}

/// Per-user large-scale gains `β_k`, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScale {
    betas: Vec<f64>,
}

impl LargeScale {
    pub fn new(betas: Vec<f64>) -> Result<Self> {
        if let Some((k, b)) = betas.iter().enumerate().find(|(_, b)| !(b.is_finite() && **b > 0.0)) {
            return Err(Error::Validation {
                field: "beta",
                message: format!("beta[{k}] = {b} is not strictly positive"),
            });
        }
        Ok(LargeScale { betas })
    }

    pub fn uniform(k: usize, beta: f64) -> Result<Self> {
        Self::new(vec![beta; k])
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }
}

/// `G = H D^{1/2}` together with the factors it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    entries: CMatrix,
    fast: FastFading,
    large: LargeScale,
}

impl ChannelMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn fast(&self) -> &FastFading {
        &self.fast
    }

    pub fn large(&self) -> &LargeScale {
        &self.large
    }

    pub fn num_antennas(&self) -> usize {
        self.entries.rows()
    }

    pub fn num_users(&self) -> usize {
        self.entries.cols()
    }

    /// Channel vector `g_k`.
    pub fn user(&self, k: usize) -> &[Complex64] {
        self.entries.col(k)
    }

    /// Replaces user `k`'s small-scale column and recomposes `g_k`.
    pub fn redraw_user(&mut self, k: usize, h: &[Complex64]) -> Result<()> {
        let m = self.entries.rows();
        if h.len() != m {
            return Err(Error::Dimension(format!("fast-fading column of length {}, expected {m}", h.len())));
        }
        let s = self.large.betas[k].sqrt();
        self.fast.entries.col_mut(k).copy_from_slice(h);
        for (g, x) in self.entries.col_mut(k).iter_mut().zip(h) {
            *g = x * s;
        }
        Ok(())
    }
}

pub fn sample_fast_fading(m: usize, k: usize, rng: &mut SeededRng) -> FastFading {
    FastFading { entries: CMatrix::from_fn(m, k, |_, _| rng.complex_normal()) }
}

pub fn compose_channel(h: FastFading, beta: LargeScale) -> Result<ChannelMatrix> {
    let k = h.entries.cols();
    if beta.betas.len() != k {
        return Err(Error::Dimension(format!("{} betas for {k} users", beta.betas.len())));
    }
    let mut entries = h.entries.clone();
    for (c, b) in beta.betas.iter().enumerate() {
        let s = b.sqrt();
        for g in entries.col_mut(c) {
            *g *= s;
        }
    }
    Ok(ChannelMatrix { entries, fast: h, large: beta })
}

/// Gain from the users of `source_cell` to the base station of
/// `serving_cell` (zero-based): 1 for the own cell and `γ` across cells,
/// floored at [`MIN_BETA`].
pub fn default_large_scale(config: &SystemConfig, serving_cell: usize, source_cell: usize) -> LargeScale {
    debug_assert!(serving_cell < config.num_cells && source_cell < config.num_cells);
    let beta = if serving_cell == source_cell { 1.0 } else { config.intercell_factor.max(MIN_BETA) };
    LargeScale { betas: vec![beta; config.num_users] }
}

/// Every base-station-to-cell channel of the network. `link(bs, cell)` is
/// the `M×K` matrix from the users of `cell` to the antennas of `bs`.
#[derive(Debug, Clone)]
pub struct ChannelSet {
    num_cells: usize,
    links: Vec<ChannelMatrix>,
}

impl ChannelSet {
    /// Links are listed base-station-major: `links[bs * L + cell]`.
    pub fn new(num_cells: usize, links: Vec<ChannelMatrix>) -> Result<Self> {
        if links.len() != num_cells * num_cells {
            return Err(Error::Dimension(format!("{} links for {num_cells} cells", links.len())));
        }
        Ok(ChannelSet { num_cells, links })
    }

    /// Draws a full network with the default large-scale model. The stream
    /// for base station `bs` is `rng_for(bs)`.
    pub fn draw(config: &SystemConfig, mut rng_for: impl FnMut(usize) -> SeededRng) -> Self {
        let l = config.num_cells;
        let mut links = Vec::with_capacity(l * l);
        for bs in 0..l {
            let mut rng = rng_for(bs);
            for cell in 0..l {
                let h = sample_fast_fading(config.num_antennas, config.num_users, &mut rng);
                links.push(compose_channel(h, default_large_scale(config, bs, cell)).expect("dimensions agree"));
            }
        }
        ChannelSet { num_cells: l, links }
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn link(&self, bs: usize, cell: usize) -> &ChannelMatrix {
        &self.links[bs * self.num_cells + cell]
    }

    pub fn link_mut(&mut self, bs: usize, cell: usize) -> &mut ChannelMatrix {
        &mut self.links[bs * self.num_cells + cell]
    }
}
