//! Quality measures for a reduced dataset.
//!
//! Distances are taken in the normalised feature space of the source
//! dataset's non-null points, the same space the SNN reduction works in.

use alloc::vec::Vec;

use crate::data::{filter_null, Dataset, FeatureSpace, Method, ReducedDataset};
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::neighbors::KdTree;
use crate::par;
use crate::pipeline::Reduction;

/// Representative count over non-null source count.
pub fn reduction_ratio(r: &ReducedDataset) -> f64 {
    r.len() as f64 / r.provenance().nonnull_count as f64
}

/// Largest and mean distance from a source point to its nearest representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub radius: f64,
    pub mean: f64,
}

/// Per-point distance to the nearest of `reps`, in position order of the
/// non-null points of `d`.
pub fn nearest_distances(d: &Dataset, reps: &Dataset) -> Result<Vec<f64>> {
    if reps.is_empty() {
        return Err(Error::NoRepresentatives);
    }
    if reps.n_attrs() != d.n_attrs() {
        return Err(Error::InvalidData(alloc::format!(
            "representatives carry {} attributes, the source {}",
            reps.n_attrs(),
            d.n_attrs()
        )));
    }
    let points = filter_null(d);
    if points.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, found: 0 });
    }
    let space = FeatureSpace::of(&points)?;
    let rep_features = space.embed_all(reps)?;
    let src = space.embed_all(&points)?;
    let tree = KdTree::build(&rep_features);
    Ok(par::map_range(src.len(), |i| {
        let (d2, _) = tree.nearest(src.row(i)).expect("tree is not empty");
        sqrt(d2)
    }))
}

pub fn coverage(d: &Dataset, r: &ReducedDataset) -> Result<Coverage> {
    coverage_of(d, r.representatives())
}

/// [`coverage`] for a bare representative set.
pub fn coverage_of(d: &Dataset, reps: &Dataset) -> Result<Coverage> {
    let dist = nearest_distances(d, reps)?;
    let radius = dist.iter().copied().fold(0.0, f64::max);
    let mean = dist.iter().sum::<f64>() / dist.len() as f64;
    Ok(Coverage { radius, mean })
}

/// Maximum over non-null source points of the distance to the nearest representative.
pub fn coverage_radius(d: &Dataset, r: &ReducedDataset) -> Result<f64> {
    coverage(d, r).map(|c| c.radius)
}

/// Mean over non-null source points of the distance to the nearest representative.
pub fn mean_nn_error(d: &Dataset, r: &ReducedDataset) -> Result<f64> {
    coverage(d, r).map(|c| c.mean)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub method: Method,
    pub reduction_ratio: f64,
    pub coverage_radius: f64,
    pub mean_nn_error: f64,
    pub cluster_count: usize,
    pub core_fraction: f64,
    pub noise_fraction: f64,
    pub runtime_ms: u64,
}

impl ReductionReport {
    pub const HEADER: &'static str =
        "method,reduction_ratio,coverage_radius,mean_nn_error,cluster_count,core_fraction,noise_fraction,runtime_ms";

    /// Score a finished reduction of `d`.
    pub fn measure(d: &Dataset, run: &Reduction, runtime_ms: u64) -> Result<Self> {
        let c = coverage(d, &run.reduced)?;
        Ok(ReductionReport {
            method: run.reduced.provenance().method(),
            reduction_ratio: reduction_ratio(&run.reduced),
            coverage_radius: c.radius,
            mean_nn_error: c.mean,
            cluster_count: run.cluster_count,
            core_fraction: run.core_fraction,
            noise_fraction: run.noise_fraction,
            runtime_ms,
        })
    }

    /// Comma-separated row matching [`ReductionReport::HEADER`]. Floats use
    /// the shortest representation that reads back exactly.
    pub fn csv_row(&self) -> alloc::string::String {
        alloc::format!(
            "{},{:?},{:?},{:?},{},{:?},{:?},{}",
            self.method,
            self.reduction_ratio,
            self.coverage_radius,
            self.mean_nn_error,
            self.cluster_count,
            self.core_fraction,
            self.noise_fraction,
            self.runtime_ms
        )
    }
}
