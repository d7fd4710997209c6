//! Shared-nearest-neighbour density clustering and representative selection.
//!
//! The pipeline filters null points, builds exact kNN lists, turns them into
//! an SNN similarity graph, picks Eps/MinPts from the similarity
//! distribution (unless supplied), runs DBSCAN on the graph and keeps a
//! greedy cover of the core points as representatives.

mod dbscan;
mod graph;
mod params;
mod specific;

use alloc::vec;
use alloc::vec::Vec;

pub use dbscan::{snn_dbscan, ClusterAssignment, Role};
pub use graph::{build_snn_graph, SnnGraph, SnnMode};
pub use params::{estimate_params, SnnParams};
pub use specific::select_specific_cores;

use crate::data::{
    filter_null, Dataset, FeatureSpace, MethodParams, ReducedDataset, ReductionProvenance,
    SlabSummary, SnnProvenance,
};
use crate::error::{Error, Result};
use crate::neighbors::NeighborList;

pub const DEFAULT_K: usize = 20;
pub const DEFAULT_EPS_PERCENTILE: f64 = 0.30;
pub const DEFAULT_CORE_FRACTION: f64 = 0.40;

#[derive(Debug, Clone, PartialEq)]
pub struct SnnConfig {
    pub k: usize,
    pub mode: SnnMode,
    pub eps_percentile: f64,
    pub core_fraction: f64,
    /// Fixed Eps; estimated from the graph when `None`.
    pub eps: Option<u32>,
    /// Fixed MinPts; estimated at the chosen Eps when `None`.
    pub min_pts: Option<u32>,
}

impl Default for SnnConfig {
    fn default() -> Self {
        SnnConfig {
            k: DEFAULT_K,
            mode: SnnMode::Mutual,
            eps_percentile: DEFAULT_EPS_PERCENTILE,
            core_fraction: DEFAULT_CORE_FRACTION,
            eps: None,
            min_pts: None,
        }
    }
}

impl SnnConfig {
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_params(mut self, eps: u32, min_pts: u32) -> Self {
        self.eps = Some(eps);
        self.min_pts = Some(min_pts);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        params::check_fractions(self.eps_percentile, self.core_fraction)?;
        SnnParams::new(self.k, self.eps.unwrap_or(1), self.min_pts.unwrap_or(1))?;
        Ok(())
    }

    /// Resolve Eps/MinPts for a graph: overrides first, estimates otherwise.
    pub fn params_for(&self, g: &SnnGraph) -> Result<SnnParams> {
        match (self.eps, self.min_pts) {
            (Some(eps), Some(min_pts)) => SnnParams::new(self.k, eps, min_pts),
            (Some(eps), None) => {
                let p = SnnParams::new(self.k, eps, 1)?;
                let min_pts = params::min_pts_for(g, p.eps, self.core_fraction);
                SnnParams::new(self.k, eps, min_pts)
            }
            (None, min_pts) => {
                let mut p = estimate_params(g, self.eps_percentile, self.core_fraction)?;
                if let Some(m) = min_pts {
                    p.min_pts = m;
                }
                p.validate()?;
                Ok(p)
            }
        }
    }

    pub(crate) fn estimated(&self) -> bool {
        self.eps.is_none() || self.min_pts.is_none()
    }
}

/// Clustering of one (sub)set of non-null points.
#[derive(Debug, Clone)]
pub(crate) struct SlabClustering {
    pub params: SnnParams,
    pub assignment: ClusterAssignment,
    /// Ascending positions of the specific cores.
    pub specific: Vec<usize>,
}

/// Cluster the non-null dataset `d` in the feature space `space`.
pub(crate) fn cluster_points(d: &Dataset, space: &FeatureSpace, cfg: &SnnConfig) -> Result<SlabClustering> {
    debug_assert_eq!(d.nonnull_count(), d.len());
    if d.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: d.len() });
    }
    let features = space.embed_all(d)?;
    let nl = NeighborList::indexed(&features, d.ids().to_vec(), cfg.k)?;
    drop(features);
    let g = SnnGraph::build(&nl, cfg.mode);
    drop(nl);
    let params = cfg.params_for(&g)?;
    let mut assignment = snn_dbscan(&g, &params);
    let specific = select_specific_cores(&assignment, &g, &params);
    assignment.mark_specific(&specific);
    Ok(SlabClustering { params, assignment, specific })
}

/// Result of [`snn_reduce`].
#[derive(Debug, Clone)]
pub struct SnnOutcome {
    pub reduced: ReducedDataset,
    /// Labels and roles of the non-null points, by position in `points`.
    pub assignment: ClusterAssignment,
    /// The non-null points that were clustered.
    pub points: Dataset,
    /// Parameters per slab; one entry when unpartitioned.
    pub params: Vec<SnnParams>,
}

impl SnnOutcome {
    /// Cluster label and role of every representative, in representative order.
    pub fn representative_annotations(&self) -> Vec<(Option<u32>, Role)> {
        self.reduced
            .representatives()
            .ids()
            .iter()
            .map(|&id| {
                let p = self.points.position_of(id).expect("representative is a source point");
                (self.assignment.label(p), self.assignment.role(p))
            })
            .collect()
    }
}

/// Reduce `d` to the specific cores of its SNN-DBSCAN clustering.
pub fn snn_reduce(d: &Dataset, cfg: &SnnConfig) -> Result<SnnOutcome> {
    cfg.validate()?;
    let points = filter_null(d);
    let space = FeatureSpace::of(&points).map_err(|_| Error::TooFewPoints { needed: 2, found: 0 })?;
    let c = cluster_points(&points, &space, cfg)?;
    let reps = points.subset(&c.specific);
    let provenance = ReductionProvenance {
        params: MethodParams::Snn(SnnProvenance {
            k: cfg.k,
            mutual: cfg.mode == SnnMode::Mutual,
            eps_percentile: cfg.eps_percentile,
            core_fraction: cfg.core_fraction,
            estimated: cfg.estimated(),
            split_axis: None,
            slabs: vec![SlabSummary {
                points: points.len(),
                eps: c.params.eps,
                min_pts: c.params.min_pts,
                clusters: c.assignment.n_clusters(),
                representatives: reps.len(),
            }],
        }),
        source_count: d.len(),
        nonnull_count: points.len(),
        partition_count: 1,
    };
    Ok(SnnOutcome {
        reduced: ReducedDataset::new(reps, provenance)?,
        assignment: c.assignment,
        points,
        params: vec![c.params],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::GridSpec;

    fn ids(n: usize) -> Vec<u64> {
        (0..n as u64).collect()
    }

    fn lists(raw: &[&[u32]]) -> NeighborList {
        let width = raw[0].len();
        let l = raw.iter().map(|r| r.iter().map(|&q| (q, 1.0)).collect()).collect();
        NeighborList::from_lists(width, ids(raw.len()), l).unwrap()
    }

    #[test]
    fn mutual_pair_without_common_neighbour_has_no_edge() {
        // 0 <-> 1 mutual, but 0 also lists 2 and 1 lists 3.
        let nl = lists(&[&[1, 2], &[0, 3], &[3, 0], &[2, 1]]);
        let g = build_snn_graph(&nl);
        assert_eq!(g.sim(0, 1), 0);
        assert_eq!(g.sim(1, 0), 0);
    }

    #[test]
    fn hand_counted_intersection() {
        // k = 3; NN(0) = {1,2,3}, NN(1) = {0,2,3}: mutual, share {2,3}.
        let nl = lists(&[&[1, 2, 3], &[0, 2, 3], &[0, 1, 4], &[0, 1, 4], &[2, 3, 0]]);
        let g = build_snn_graph(&nl);
        assert_eq!(g.sim(0, 1), 2);
        assert_eq!(g.sim(1, 0), 2);
        // 2 and 3 share {0,1,4} but are not in each other's lists.
        assert_eq!(g.sim(2, 3), 0);
        // 2 <-> 0 mutual: NN(2) ∩ NN(0) = {1}
        assert_eq!(g.sim(0, 2), 1);
    }

    #[test]
    fn one_sided_membership_is_not_an_edge() {
        // 0 lists 2, 2 does not list 0.
        let nl = lists(&[&[1, 2], &[0, 2], &[1, 3], &[2, 1]]);
        let g = build_snn_graph(&nl);
        assert_eq!(g.sim(0, 2), 0);
        let shared = SnnGraph::build(&nl, SnnMode::Shared);
        assert_eq!(shared.sim(0, 2), 1); // both list 1
    }

    #[test]
    fn constant_similarities_give_that_eps() {
        // Complete graph on 9 points with k = 8: every pair shares 7 neighbours.
        let raw: Vec<Vec<u32>> = (0..9u32).map(|p| (0..9).filter(|&q| q != p).collect()).collect();
        let refs: Vec<&[u32]> = raw.iter().map(Vec::as_slice).collect();
        let g = build_snn_graph(&lists(&refs));
        assert!(g.edges().all(|(_, _, s)| s == 7));
        let p = estimate_params(&g, 0.3, 0.4).unwrap();
        assert_eq!(p.eps, 7);
        // every density is 8, so the cap keeps all points core
        assert_eq!(p.min_pts, 8);
    }

    #[test]
    fn empty_graph_has_no_params() {
        let nl = lists(&[&[1], &[2], &[0]]);
        let g = build_snn_graph(&nl);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(estimate_params(&g, 0.3, 0.4), Err(Error::EmptyGraph));
    }

    #[test]
    fn clique_gives_one_specific_core() {
        let raw: Vec<Vec<u32>> = (0..6u32).map(|p| (0..6).filter(|&q| q != p).collect()).collect();
        let refs: Vec<&[u32]> = raw.iter().map(Vec::as_slice).collect();
        let g = build_snn_graph(&lists(&refs));
        let params = SnnParams::new(5, 4, 1).unwrap();
        let a = snn_dbscan(&g, &params);
        assert_eq!(a.n_clusters(), 1);
        assert_eq!(select_specific_cores(&a, &g, &params), vec![0]);
    }

    #[test]
    fn min_pts_above_max_density_is_all_noise() {
        let nl = lists(&[&[1, 2], &[0, 2], &[0, 1], &[0, 1]]);
        let g = build_snn_graph(&nl);
        let a = snn_dbscan(&g, &SnnParams::new(2, 1, 50).unwrap());
        assert_eq!(a.n_clusters(), 0);
        assert!(a.labels().iter().all(Option::is_none));
        assert!(a.roles().iter().all(|&r| r == Role::Noise));
    }

    #[test]
    fn duplicate_clique_reduces_to_one_point() {
        // With k = n - 1 every list holds all other points: the graph is a clique.
        let s = GridSpec::new([6, 1, 1], ["a"]).unwrap();
        let d = Dataset::grid(s, vec![0.5; 6]).unwrap();
        let out = snn_reduce(&d, &SnnConfig::default().with_k(5)).unwrap();
        assert_eq!(out.assignment.n_clusters(), 1);
        assert_eq!(out.reduced.len(), 1);
    }

    #[test]
    fn representatives_are_source_points() {
        let s = GridSpec::new([8, 8, 2], ["a"]).unwrap();
        let v: Vec<f64> = (0..128).map(|i| f64::from((i * 37) % 11)).collect();
        let d = Dataset::grid(s, v).unwrap();
        let out = snn_reduce(&d, &SnnConfig::default().with_k(8)).unwrap();
        for p in out.reduced.representatives().points() {
            let src = d.point(d.position_of(p.id).unwrap());
            assert_eq!(src, p);
        }
    }
}
