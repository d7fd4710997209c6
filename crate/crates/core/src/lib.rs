//! Numerosity reduction for large gridded volumes.
//!
//! A dataset of grid samples (`X, Y, Z` plus one or more attributes) is
//! replaced by a small set of representatives. The main method builds a
//! shared-nearest-neighbour similarity graph over the normalised feature
//! space, runs a DBSCAN-style density clustering on that graph, and keeps a
//! greedy cover of the core points ("specific cores"). Two comparison
//! reductions are provided: box averaging over the grid and K-Medoids
//! selection. The [`evaluate`] module measures how well a reduced set covers
//! the source points.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature distributes per-point work over a rayon
//! pool; results are identical for any thread count.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baselines;
pub mod data;
mod error;
pub mod evaluate;
mod math;
pub mod neighbors;
mod par;
pub mod partition;
pub mod pipeline;
pub mod snn;

pub use crate::error::{Error, Result};

pub use crate::baselines::{
    kmedoids, kmedoids_reduce, kmedoids_reduce_with, scale_reduce, KMedoids, KMedoidsParams, ScalingParams,
};
pub use crate::data::{
    filter_null, normalize_point, AttrRange, Dataset, FeatureSpace, Features, GridSpec, Method,
    MethodParams, PointRecord, PointView, ReducedDataset, ReductionProvenance,
    DEFAULT_NULL_SENTINEL,
};
pub use crate::evaluate::{coverage, coverage_of, coverage_radius, Coverage, mean_nn_error, reduction_ratio, ReductionReport};
pub use crate::neighbors::{knn_brute, knn_indexed, KdTree, NeighborList};
pub use crate::partition::{partitioned_reduce, partitioned_reduce_concurrent, plan_partitions, PartitionPlan, SplitAxis};
pub use crate::pipeline::{reduce, MethodConfig, PartitionSettings, Reduction};
pub use crate::snn::{
    build_snn_graph, estimate_params, select_specific_cores, snn_dbscan, snn_reduce,
    ClusterAssignment, Role, SnnConfig, SnnGraph, SnnMode, SnnOutcome, SnnParams,
};
