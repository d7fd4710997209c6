//! Grid geometry, point storage, feature normalisation and the reduced-set
//! container shared by every reduction method.

mod dataset;
mod feature;
mod grid;
mod reduced;

pub use dataset::{filter_null, AttrRange, Dataset, PointRecord, PointView};
pub use feature::{normalize_point, FeatureSpace, Features};
pub use grid::{GridSpec, DEFAULT_NULL_SENTINEL};
pub use reduced::{
    KMedoidsProvenance, Method, MethodParams, ReducedDataset, ReductionProvenance,
    ScalingProvenance, SlabSummary, SnnProvenance,
};
