//! Slab partitioning for reductions that must fit a memory budget.
//!
//! The non-null points are sorted along one grid axis (ties by id) and cut
//! into equal-frequency slabs. Each slab is clustered on its own, in a feature
//! space normalised over the whole dataset, and the representatives are
//! concatenated.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::data::{
    filter_null, Dataset, FeatureSpace, MethodParams, ReducedDataset, ReductionProvenance,
    SlabSummary, SnnProvenance,
};
use crate::error::{Error, Result};
use crate::snn::{cluster_points, ClusterAssignment, Role, SlabClustering, SnnConfig, SnnMode, SnnOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitAxis {
    X,
    Y,
    Z,
    /// Axis with the largest grid extent; ties prefer x, then y.
    #[default]
    Auto,
}

impl SplitAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SplitAxis::X => "x",
            SplitAxis::Y => "y",
            SplitAxis::Z => "z",
            SplitAxis::Auto => "auto",
        }
    }

    /// Concrete axis index for a grid of the given extents.
    pub fn resolve(self, dims: [u32; 3]) -> usize {
        match self {
            SplitAxis::X => 0,
            SplitAxis::Y => 1,
            SplitAxis::Z => 2,
            SplitAxis::Auto => {
                let mut best = 0;
                for a in 1..3 {
                    if dims[a] > dims[best] {
                        best = a;
                    }
                }
                best
            }
        }
    }
}

impl fmt::Display for SplitAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(SplitAxis::X),
            "y" => Ok(SplitAxis::Y),
            "z" => Ok(SplitAxis::Z),
            "auto" => Ok(SplitAxis::Auto),
            other => Err(Error::InvalidParameter(format!("unknown split axis `{other}`"))),
        }
    }
}

/// Equal-frequency slabs along one axis.
///
/// Slab `s` holds the points whose `(coordinate, id)` key lies in
/// `[cuts[s - 1], cuts[s])`, with open ends for the first and last slab.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPlan {
    n_parts: usize,
    axis: usize,
    cuts: Vec<(u32, u64)>,
    counts: Vec<usize>,
}

impl PartitionPlan {
    pub fn n_parts(&self) -> usize {
        self.n_parts
    }

    /// Resolved axis index, 0 = x.
    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn axis_char(&self) -> char {
        b"xyz"[self.axis] as char
    }

    /// Lower `(coordinate, id)` key of slabs `1..n_parts`.
    pub fn cuts(&self) -> &[(u32, u64)] {
        &self.cuts
    }

    /// Non-null point count per slab for the planned dataset.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Slab index of a point with grid index `idx` and id `id`.
    pub fn slab_of(&self, idx: [u32; 3], id: u64) -> usize {
        let key = (idx[self.axis], id);
        self.cuts.partition_point(|c| *c <= key)
    }

    /// Ascending positions of the non-null points of `d` in each slab.
    pub fn slabs(&self, d: &Dataset) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_parts];
        for p in 0..d.len() {
            if !d.is_null(p) {
                out[self.slab_of(d.idx(p), d.id(p))].push(p);
            }
        }
        out
    }
}

pub fn plan_partitions(d: &Dataset, n_parts: usize, axis: SplitAxis) -> Result<PartitionPlan> {
    if n_parts == 0 {
        return Err(Error::InvalidParameter("number of parts must be at least 1".into()));
    }
    let n = d.nonnull_count();
    if n_parts > n {
        return Err(Error::InvalidParameter(format!(
            "{n_parts} parts requested for {n} non-null points"
        )));
    }
    let axis = axis.resolve(d.spec().dims);
    let mut keys: Vec<(u32, u64)> = (0..d.len())
        .filter(|&p| !d.is_null(p))
        .map(|p| (d.idx(p)[axis], d.id(p)))
        .collect();
    keys.sort_unstable();
    let (base, extra) = (n / n_parts, n % n_parts);
    let counts: Vec<usize> = (0..n_parts).map(|s| base + usize::from(s < extra)).collect();
    let mut cuts = Vec::with_capacity(n_parts - 1);
    let mut start = 0;
    for &c in &counts[..n_parts - 1] {
        start += c;
        cuts.push(keys[start]);
    }
    Ok(PartitionPlan { n_parts, axis, cuts, counts })
}

/// Run [`crate::snn_reduce`] on every slab of `plan` and merge the results.
///
/// Slabs are processed one after another, so only one slab's neighbour
/// lists and graph exist at a time. See [`partitioned_reduce_concurrent`].
pub fn partitioned_reduce(d: &Dataset, plan: &PartitionPlan, cfg: &SnnConfig) -> Result<SnnOutcome> {
    run(d, plan, cfg, false)
}

/// As [`partitioned_reduce`], with slabs clustered in parallel when the
/// `parallel` feature is enabled. Output is identical.
pub fn partitioned_reduce_concurrent(d: &Dataset, plan: &PartitionPlan, cfg: &SnnConfig) -> Result<SnnOutcome> {
    run(d, plan, cfg, true)
}

fn run(d: &Dataset, plan: &PartitionPlan, cfg: &SnnConfig, concurrent: bool) -> Result<SnnOutcome> {
    cfg.validate()?;
    let points = filter_null(d);
    let space = FeatureSpace::of(&points).map_err(|_| Error::TooFewPoints { needed: 2, found: 0 })?;
    let slabs = plan.slabs(&points);
    if slabs.iter().map(Vec::len).sum::<usize>() != points.len() || slabs.iter().any(Vec::is_empty) {
        return Err(Error::InvalidParameter("partition plan does not match the dataset".into()));
    }
    let one = |s: usize| -> Result<SlabClustering> {
        let slab = points.subset(&slabs[s]);
        cluster_points(&slab, &space, cfg).map_err(|e| Error::Slab { slab: s, source: e.into() })
    };
    let results: Vec<SlabClustering> = if concurrent {
        crate::par::map_range(slabs.len(), one).into_iter().collect::<Result<_>>()?
    } else {
        (0..slabs.len()).map(one).collect::<Result<_>>()?
    };

    let n = points.len();
    let mut labels = vec![None; n];
    let mut roles = vec![Role::Noise; n];
    let mut density = vec![0u32; n];
    let mut specific = Vec::new();
    let mut summaries = Vec::with_capacity(slabs.len());
    let mut offset = 0u32;
    for (pos, c) in slabs.iter().zip(&results) {
        let a = &c.assignment;
        for (local, &global) in pos.iter().enumerate() {
            labels[global] = a.label(local).map(|l| l + offset);
            roles[global] = a.role(local);
            density[global] = a.density(local);
        }
        specific.extend(c.specific.iter().map(|&s| pos[s]));
        offset += a.n_clusters() as u32;
        summaries.push(SlabSummary {
            points: pos.len(),
            eps: c.params.eps,
            min_pts: c.params.min_pts,
            clusters: a.n_clusters(),
            representatives: c.specific.len(),
        });
    }
    let mut assignment = ClusterAssignment::from_parts(labels, roles, density, offset as usize);
    assignment.canonicalize();
    specific.sort_unstable();

    let reps = points.subset(&specific);
    let provenance = ReductionProvenance {
        params: MethodParams::Snn(SnnProvenance {
            k: cfg.k,
            mutual: cfg.mode == SnnMode::Mutual,
            eps_percentile: cfg.eps_percentile,
            core_fraction: cfg.core_fraction,
            estimated: cfg.estimated(),
            split_axis: Some(plan.axis_char()),
            slabs: summaries,
        }),
        source_count: d.len(),
        nonnull_count: n,
        partition_count: plan.n_parts(),
    };
    Ok(SnnOutcome {
        reduced: ReducedDataset::new(reps, provenance)?,
        assignment,
        points,
        params: results.into_iter().map(|c| c.params).collect(),
    })
}
