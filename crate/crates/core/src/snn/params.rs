use alloc::format;
use alloc::vec::Vec;

use super::graph::SnnGraph;
use crate::error::{Error, Result};

/// Thresholds for density clustering on the SNN graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SnnParams {
    /// Neighbourhood size the graph was built with.
    pub k: usize,
    /// Minimum similarity for two points to be directly connected, in `[1, k]`.
    pub eps: u32,
    /// Minimum SNN density for a core point.
    pub min_pts: u32,
}

impl SnnParams {
    pub fn new(k: usize, eps: u32, min_pts: u32) -> Result<Self> {
        let p = SnnParams { k, eps, min_pts };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps == 0 || self.eps as usize > self.k {
            return Err(Error::InvalidParameter(format!(
                "eps must lie in [1, {}], got {}",
                self.k, self.eps
            )));
        }
        if self.min_pts == 0 {
            return Err(Error::InvalidParameter("min_pts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Pick Eps and MinPts from the similarity distribution of `g`.
///
/// Eps is the nearest-rank `eps_percentile` quantile of the edge
/// similarities. MinPts is the smallest value for which at most
/// `core_fraction` of the points reach that density, capped at the largest
/// density present so that at least one core exists.
pub fn estimate_params(g: &SnnGraph, eps_percentile: f64, core_fraction: f64) -> Result<SnnParams> {
    check_fractions(eps_percentile, core_fraction)?;
    let mut sims: Vec<u32> = g.edges().map(|(_, _, s)| s).collect();
    if sims.is_empty() {
        return Err(Error::EmptyGraph);
    }
    sims.sort_unstable();
    let eps = nearest_rank(&sims, eps_percentile).clamp(1, g.k().max(1) as u32);
    let min_pts = min_pts_for(g, eps, core_fraction);
    Ok(SnnParams { k: g.k(), eps, min_pts })
}

pub(crate) fn check_fractions(eps_percentile: f64, core_fraction: f64) -> Result<()> {
    if !(eps_percentile > 0.0 && eps_percentile <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps percentile must lie in (0, 1], got {eps_percentile}"
        )));
    }
    if !(0.0..=1.0).contains(&core_fraction) {
        return Err(Error::InvalidParameter(format!(
            "core fraction must lie in [0, 1], got {core_fraction}"
        )));
    }
    Ok(())
}

/// Nearest-rank quantile of an ascending slice.
pub(crate) fn nearest_rank(sorted: &[u32], q: f64) -> u32 {
    let n = sorted.len();
    // The slack keeps e.g. 0.3 * 10 from rounding up to rank 4.
    let rank = libm::ceil(q * n as f64 - 1e-9).max(1.0) as usize;
    sorted[rank.min(n) - 1]
}

/// MinPts at a fixed Eps (see [`estimate_params`]).
pub(crate) fn min_pts_for(g: &SnnGraph, eps: u32, core_fraction: f64) -> u32 {
    let n = g.len();
    let densities: Vec<u32> = (0..n).map(|p| g.density(p, eps)).collect();
    let max_density = densities.iter().copied().max().unwrap_or(0);
    // at_least[m] = number of points with density >= m
    let mut at_least = alloc::vec![0usize; max_density as usize + 2];
    for &d in &densities {
        at_least[d as usize] += 1;
    }
    for m in (0..=max_density as usize).rev() {
        at_least[m] += at_least[m + 1];
    }
    let budget = core_fraction * n as f64 + 1e-9;
    let m = (1..=max_density + 1)
        .find(|&m| at_least[m as usize] as f64 <= budget)
        .unwrap_or(max_density + 1);
    m.clamp(1, max_density.max(1))
}
