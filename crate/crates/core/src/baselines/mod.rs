//! Comparison reductions: box averaging over the grid and K-Medoids.

mod kmedoids;
mod scaling;

pub use kmedoids::{kmedoids, kmedoids_reduce, kmedoids_reduce_with, KMedoids, KMedoidsParams, DEFAULT_SAMPLE_SIZE};
pub use scaling::{scale_reduce, ScalingParams};
