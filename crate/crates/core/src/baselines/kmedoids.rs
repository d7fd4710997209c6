use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{
    filter_null, Dataset, FeatureSpace, Features, KMedoidsProvenance, MethodParams, ReducedDataset,
    ReductionProvenance,
};
use crate::error::{Error, Result};
use crate::math::{dist, dist2};
use crate::neighbors::KdTree;
use crate::par;

/// Point count above which PAM runs on a random sample.
pub const DEFAULT_SAMPLE_SIZE: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMedoidsParams {
    pub n_clusters: usize,
    /// Representatives kept per cluster, medoid included.
    pub per_cluster: usize,
    /// Maximum number of SWAP passes over all candidates.
    pub max_swap_iters: usize,
    /// Cluster a seeded sample of this size when there are more points.
    pub sample_size: Option<usize>,
    pub seed: u64,
}

impl KMedoidsParams {
    pub fn new(n_clusters: usize, per_cluster: usize) -> Self {
        KMedoidsParams {
            n_clusters,
            per_cluster,
            max_swap_iters: 100,
            sample_size: Some(DEFAULT_SAMPLE_SIZE),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.n_clusters == 0 || self.per_cluster == 0 {
            return Err(Error::InvalidParameter(
                "cluster count and per-cluster count must be positive".into(),
            ));
        }
        if self.n_clusters > n {
            return Err(Error::InvalidParameter(format!(
                "{} clusters requested for {n} points",
                self.n_clusters
            )));
        }
        if let Some(s) = self.sample_size {
            if s < self.n_clusters {
                return Err(Error::InvalidParameter(format!(
                    "sample size {s} is smaller than the cluster count {}",
                    self.n_clusters
                )));
            }
        }
        Ok(())
    }
}

/// K-Medoids clustering of a feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct KMedoids {
    /// Medoid rows, ascending. Cluster `c` is the cluster of `medoids[c]`.
    pub medoids: Vec<usize>,
    /// Cluster of every row.
    pub labels: Vec<u32>,
    /// Total distance of all rows to their medoid.
    pub cost: f64,
    pub sampled: bool,
    pub swap_passes: usize,
}

/// PAM BUILD followed by eager SWAP passes.
///
/// When more rows than `sample_size` are given, PAM runs on a seeded uniform
/// sample and every row is then assigned to its nearest medoid.
pub fn kmedoids(points: &Features, p: &KMedoidsParams) -> Result<KMedoids> {
    let n = points.len();
    p.validate(n)?;
    let (rows, sampled): (Vec<usize>, bool) = match p.sample_size {
        Some(s) if n > s => {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            let mut rows = rand::seq::index::sample(&mut rng, n, s).into_vec();
            rows.sort_unstable();
            (rows, true)
        }
        _ => ((0..n).collect(), false),
    };
    let mut pam = Pam::new(points, &rows);
    pam.build(p.n_clusters);
    let swap_passes = pam.swap(p.max_swap_iters);
    let mut medoids: Vec<usize> = pam.medoids.iter().map(|&m| rows[m]).collect();
    medoids.sort_unstable();

    let (labels, cost) = assign(points, &medoids);
    Ok(KMedoids { medoids, labels, cost, sampled, swap_passes })
}

/// Nearest medoid per row (lowest medoid on ties; a medoid keeps itself).
fn assign(points: &Features, medoids: &[usize]) -> (Vec<u32>, f64) {
    let dim = points.dim();
    let mut med_rows = Vec::with_capacity(medoids.len() * dim);
    for &m in medoids {
        med_rows.extend_from_slice(points.row(m));
    }
    let med_features = Features::from_rows(dim, med_rows);
    let tree = KdTree::build(&med_features);
    let nearest = par::map_range(points.len(), |i| {
        if let Ok(c) = medoids.binary_search(&i) {
            return (c as u32, 0.0);
        }
        let (d2, c) = tree.nearest(points.row(i)).expect("at least one medoid");
        (c, crate::math::sqrt(d2))
    });
    let cost = nearest.iter().map(|x| x.1).sum();
    (nearest.into_iter().map(|x| x.0).collect(), cost)
}

/// PAM state over a subset of rows. Indices below are positions in `rows`.
struct Pam<'a> {
    points: &'a Features,
    rows: &'a [usize],
    medoids: Vec<usize>,
    near: Vec<(usize, f64)>,
    second: Vec<(usize, f64)>,
}

impl<'a> Pam<'a> {
    fn new(points: &'a Features, rows: &'a [usize]) -> Self {
        Pam { points, rows, medoids: Vec::new(), near: Vec::new(), second: Vec::new() }
    }

    fn d(&self, a: usize, b: usize) -> f64 {
        dist(self.points.row(self.rows[a]), self.points.row(self.rows[b]))
    }

    fn build(&mut self, k: usize) {
        let n = self.rows.len();
        let first = argmin(&par::map_range(n, |c| (0..n).map(|j| self.d(j, c)).sum::<f64>()));
        self.medoids.push(first);
        let mut nearest: Vec<f64> = (0..n).map(|j| self.d(j, first)).collect();
        let mut is_medoid = vec![false; n];
        is_medoid[first] = true;
        while self.medoids.len() < k {
            let gains = par::map_range(n, |c| {
                if is_medoid[c] {
                    return f64::NEG_INFINITY;
                }
                (0..n).map(|j| (nearest[j] - self.d(j, c)).max(0.0)).sum::<f64>()
            });
            let best = argmax(&gains);
            is_medoid[best] = true;
            self.medoids.push(best);
            for (j, nj) in nearest.iter_mut().enumerate() {
                *nj = nj.min(self.d(j, best));
            }
        }
    }

    fn refresh(&mut self) {
        let n = self.rows.len();
        let res = par::map_range(n, |o| {
            let mut near = (usize::MAX, f64::INFINITY);
            let mut second = (usize::MAX, f64::INFINITY);
            for (slot, &m) in self.medoids.iter().enumerate() {
                let d = self.d(o, m);
                if d < near.1 {
                    second = near;
                    near = (slot, d);
                } else if d < second.1 {
                    second = (slot, d);
                }
            }
            (near, second)
        });
        self.near = res.iter().map(|x| x.0).collect();
        self.second = res.iter().map(|x| x.1).collect();
    }

    /// Cost increase per medoid slot if that medoid were removed.
    fn removal_loss(&self) -> Vec<f64> {
        let mut loss = vec![0.0; self.medoids.len()];
        for (near, second) in self.near.iter().zip(&self.second) {
            loss[near.0] += second.1 - near.1;
        }
        loss
    }

    /// Eager SWAP: scan every non-medoid candidate, apply its best swap at
    /// once when it lowers the cost. Returns the number of passes run.
    fn swap(&mut self, max_passes: usize) -> usize {
        let n = self.rows.len();
        let k = self.medoids.len();
        // one medoid: BUILD already picked the cost minimiser
        if k == n || k == 1 {
            return 0;
        }
        self.refresh();
        let mut removal = self.removal_loss();
        let mut passes = 0;
        while passes < max_passes {
            passes += 1;
            let mut swapped = false;
            for j in 0..n {
                if self.medoids.contains(&j) {
                    continue;
                }
                // removal loss per medoid slot, adjusted for j joining
                let mut loss = removal.clone();
                let mut shared = 0.0;
                for o in 0..n {
                    let djo = self.d(j, o);
                    let (ni, nd) = self.near[o];
                    let sd = self.second[o].1;
                    if djo < nd {
                        shared += djo - nd;
                        loss[ni] += nd - sd;
                    } else if djo < sd {
                        loss[ni] += djo - sd;
                    }
                }
                let slot = argmin(&loss);
                let delta = loss[slot] + shared;
                if delta < -1e-12 {
                    self.medoids[slot] = j;
                    self.refresh();
                    removal = self.removal_loss();
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        passes
    }
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Keep each cluster's medoid and its `per_cluster - 1` nearest members.
pub fn kmedoids_reduce(d: &Dataset, p: &KMedoidsParams) -> Result<ReducedDataset> {
    kmedoids_reduce_with(d, p, None).map(|(r, _)| r)
}

/// [`kmedoids_reduce`] that also returns the clustering, optionally in a
/// caller-supplied feature space.
pub fn kmedoids_reduce_with(
    d: &Dataset,
    p: &KMedoidsParams,
    space: Option<&FeatureSpace>,
) -> Result<(ReducedDataset, KMedoids)> {
    let points = filter_null(d);
    if points.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, found: 0 });
    }
    p.validate(points.len())?;
    let own;
    let space = match space {
        Some(s) => s,
        None => {
            own = FeatureSpace::of(&points)?;
            &own
        }
    };
    let f = space.embed_all(&points)?;
    let km = kmedoids(&f, p)?;

    let mut members: Vec<Vec<(f64, usize)>> = vec![Vec::new(); km.medoids.len()];
    for (i, &c) in km.labels.iter().enumerate() {
        let m = km.medoids[c as usize];
        let key = if i == m { -1.0 } else { dist2(f.row(i), f.row(m)) };
        members[c as usize].push((key, i));
    }
    let mut keep = Vec::new();
    for mut list in members {
        list.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        keep.extend(list.iter().take(p.per_cluster).map(|x| x.1));
    }
    keep.sort_unstable();
    let reps = points.subset(&keep);
    let provenance = ReductionProvenance {
        params: MethodParams::KMedoids(KMedoidsProvenance {
            n_clusters: p.n_clusters,
            per_cluster: p.per_cluster,
            max_swap_iters: p.max_swap_iters,
            sample_size: p.sample_size,
            sampled: km.sampled,
            seed: p.seed,
            swap_passes: km.swap_passes,
            cost: km.cost,
        }),
        source_count: d.len(),
        nonnull_count: points.len(),
        partition_count: 1,
    };
    Ok((ReducedDataset::new(reps, provenance)?, km))
}
