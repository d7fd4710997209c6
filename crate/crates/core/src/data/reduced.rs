use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Snn,
    Scaling,
    KMedoids,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Snn => "snn",
            Method::Scaling => "scaling",
            Method::KMedoids => "kmedoids",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snn" => Ok(Method::Snn),
            "scaling" => Ok(Method::Scaling),
            "kmedoids" => Ok(Method::KMedoids),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

/// Outcome of one slab of an SNN run.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabSummary {
    pub points: usize,
    pub eps: u32,
    pub min_pts: u32,
    pub clusters: usize,
    pub representatives: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnnProvenance {
    pub k: usize,
    pub mutual: bool,
    pub eps_percentile: f64,
    pub core_fraction: f64,
    /// `false` when Eps/MinPts were supplied by the caller.
    pub estimated: bool,
    /// Split axis (`x`, `y` or `z`) for partitioned runs.
    pub split_axis: Option<char>,
    /// One entry per slab; a single entry for unpartitioned runs.
    pub slabs: Vec<SlabSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingProvenance {
    pub divisions: [u32; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMedoidsProvenance {
    pub n_clusters: usize,
    pub per_cluster: usize,
    pub max_swap_iters: usize,
    pub sample_size: Option<usize>,
    pub sampled: bool,
    pub seed: u64,
    pub swap_passes: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodParams {
    Snn(SnnProvenance),
    Scaling(ScalingProvenance),
    KMedoids(KMedoidsProvenance),
}

impl MethodParams {
    pub fn method(&self) -> Method {
        match self {
            MethodParams::Snn(_) => Method::Snn,
            MethodParams::Scaling(_) => Method::Scaling,
            MethodParams::KMedoids(_) => Method::KMedoids,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionProvenance {
    pub params: MethodParams,
    pub source_count: usize,
    pub nonnull_count: usize,
    pub partition_count: usize,
}

impl ReductionProvenance {
    pub fn method(&self) -> Method {
        self.params.method()
    }

    /// Scaling representatives are box averages, not source points.
    pub fn synthetic(&self) -> bool {
        self.method() == Method::Scaling
    }

    pub fn validate(&self) -> Result<()> {
        if self.nonnull_count == 0 || self.nonnull_count > self.source_count {
            return Err(Error::InvalidData(format!(
                "provenance counts inconsistent: {} non-null of {} source points",
                self.nonnull_count, self.source_count
            )));
        }
        if self.partition_count == 0 {
            return Err(Error::InvalidData("partition count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Representatives plus a record of how they were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDataset {
    representatives: Dataset,
    provenance: ReductionProvenance,
}

impl ReducedDataset {
    pub fn new(representatives: Dataset, provenance: ReductionProvenance) -> Result<Self> {
        provenance.validate()?;
        if representatives.len() > provenance.source_count {
            return Err(Error::InvalidData(format!(
                "{} representatives exceed {} source points",
                representatives.len(),
                provenance.source_count
            )));
        }
        Ok(ReducedDataset {
            representatives,
            provenance,
        })
    }

    pub fn representatives(&self) -> &Dataset {
        &self.representatives
    }

    pub fn provenance(&self) -> &ReductionProvenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn into_parts(self) -> (Dataset, ReductionProvenance) {
        (self.representatives, self.provenance)
    }
}
