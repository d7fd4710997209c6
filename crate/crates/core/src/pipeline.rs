//! One entry point for every reduction method.

use alloc::vec::Vec;

use crate::baselines::{kmedoids_reduce_with, scale_reduce, KMedoidsParams, ScalingParams};
use crate::data::{Dataset, ReducedDataset};
use crate::error::Result;
use crate::partition::{partitioned_reduce, partitioned_reduce_concurrent, plan_partitions, SplitAxis};
use crate::snn::{snn_reduce, Role, SnnConfig, SnnOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSettings {
    pub n_parts: usize,
    pub axis: SplitAxis,
    /// Cluster slabs in parallel instead of one at a time.
    pub concurrent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodConfig {
    Snn {
        config: SnnConfig,
        partition: Option<PartitionSettings>,
    },
    Scaling(ScalingParams),
    KMedoids(KMedoidsParams),
}

impl MethodConfig {
    pub fn snn(config: SnnConfig) -> Self {
        MethodConfig::Snn { config, partition: None }
    }
}

/// A reduction plus the clustering statistics reported alongside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub reduced: ReducedDataset,
    /// Cluster label and role per representative (SNN only).
    pub annotations: Option<Vec<(Option<u32>, Role)>>,
    /// SNN clusters, K-Medoids clusters, or non-empty boxes for scaling.
    pub cluster_count: usize,
    /// Share of non-null points that are core points (SNN only, else 0).
    pub core_fraction: f64,
    /// Share of non-null points labelled noise (SNN only, else 0).
    pub noise_fraction: f64,
}

impl Reduction {
    fn from_snn(out: SnnOutcome) -> Self {
        let n = out.points.len() as f64;
        let a = &out.assignment;
        Reduction {
            annotations: Some(out.representative_annotations()),
            cluster_count: a.n_clusters(),
            core_fraction: a.core_count() as f64 / n,
            noise_fraction: a.noise_count() as f64 / n,
            reduced: out.reduced,
        }
    }
}

pub fn reduce(d: &Dataset, method: &MethodConfig) -> Result<Reduction> {
    match method {
        MethodConfig::Snn { config, partition: None } => snn_reduce(d, config).map(Reduction::from_snn),
        MethodConfig::Snn { config, partition: Some(p) } => {
            let plan = plan_partitions(d, p.n_parts, p.axis)?;
            let out = if p.concurrent {
                partitioned_reduce_concurrent(d, &plan, config)?
            } else {
                partitioned_reduce(d, &plan, config)?
            };
            Ok(Reduction::from_snn(out))
        }
        MethodConfig::Scaling(s) => {
            let reduced = scale_reduce(d, s)?;
            Ok(Reduction {
                cluster_count: reduced.len(),
                reduced,
                annotations: None,
                core_fraction: 0.0,
                noise_fraction: 0.0,
            })
        }
        MethodConfig::KMedoids(p) => {
            let (reduced, km) = kmedoids_reduce_with(d, p, None)?;
            Ok(Reduction {
                reduced,
                annotations: None,
                cluster_count: km.medoids.len(),
                core_fraction: 0.0,
                noise_fraction: 0.0,
            })
        }
    }
}
