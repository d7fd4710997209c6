//! Exact k-nearest-neighbour lists in the normalised feature space.
//!
//! Two searches produce the same [`NeighborList`]: a quadratic scan that
//! serves as the reference, and a k-d tree used by the pipeline. Both order
//! neighbours by `(distance, id)` so ties resolve identically.

mod kdtree;

use alloc::vec::Vec;

pub use kdtree::KdTree;

use crate::data::{filter_null, Dataset, FeatureSpace, Features};
use crate::error::{Error, Result};
use crate::math::{dist2, sqrt};
use crate::par;

/// Per-point neighbour lists of uniform width `min(k, n - 1)`, self excluded.
///
/// Points are addressed by position (ascending id); [`NeighborList::id`] maps a
/// position back to the grid id.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    k: usize,
    width: usize,
    ids: Vec<u64>,
    nbr: Vec<u32>,
    dist: Vec<f64>,
}

impl NeighborList {
    /// Reference search: full scan per point.
    pub fn brute(features: &Features, ids: Vec<u64>, k: usize) -> Result<Self> {
        let (n, width) = check(features, &ids, k)?;
        let rows = par::map_range(n, |i| {
            let q = features.row(i);
            let mut all: Vec<(f64, u32)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (dist2(q, features.row(j)), j as u32))
                .collect();
            let cmp = |a: &(f64, u32), b: &(f64, u32)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if width < all.len() {
                all.select_nth_unstable_by(width, cmp);
                all.truncate(width);
            }
            all.sort_unstable_by(cmp);
            all
        });
        Ok(Self::assemble(k, width, ids, rows))
    }

    /// Indexed search through a [`KdTree`]; output equals [`NeighborList::brute`].
    pub fn indexed(features: &Features, ids: Vec<u64>, k: usize) -> Result<Self> {
        let (n, width) = check(features, &ids, k)?;
        let tree = KdTree::build(features);
        let rows = par::map_range(n, |i| tree.knn(features.row(i), width, Some(i as u32)));
        Ok(Self::assemble(k, width, ids, rows))
    }

    /// Lists supplied directly as `(neighbour position, distance)` pairs.
    /// Every list must have the same length, at most `k`, without the point itself.
    pub fn from_lists(k: usize, ids: Vec<u64>, lists: Vec<Vec<(u32, f64)>>) -> Result<Self> {
        let n = ids.len();
        if lists.len() != n {
            return Err(Error::InvalidData("one neighbour list per point is required".into()));
        }
        let width = lists.first().map_or(0, Vec::len);
        for (p, list) in lists.iter().enumerate() {
            if list.len() != width || width > k {
                return Err(Error::InvalidData("neighbour lists must share one width <= k".into()));
            }
            if list.iter().any(|&(q, _)| q as usize == p || q as usize >= n) {
                return Err(Error::InvalidData("neighbour list refers to itself or out of range".into()));
            }
        }
        let (nbr, dist) = lists.into_iter().flatten().unzip();
        Ok(NeighborList { k, width, ids, nbr, dist })
    }

    fn assemble(k: usize, width: usize, ids: Vec<u64>, rows: Vec<Vec<(f64, u32)>>) -> Self {
        let mut nbr = Vec::with_capacity(rows.len() * width);
        let mut dist = Vec::with_capacity(rows.len() * width);
        for row in rows {
            debug_assert_eq!(row.len(), width);
            for (d2, j) in row {
                nbr.push(j);
                dist.push(sqrt(d2));
            }
        }
        NeighborList { k, width, ids, nbr, dist }
    }

    /// Requested neighbourhood size.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Actual list length, `min(k, n - 1)`.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, pos: usize) -> u64 {
        self.ids[pos]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    /// Neighbour positions of `pos`, nearest first.
    pub fn neighbors(&self, pos: usize) -> &[u32] {
        &self.nbr[pos * self.width..(pos + 1) * self.width]
    }

    pub fn distances(&self, pos: usize) -> &[f64] {
        &self.dist[pos * self.width..(pos + 1) * self.width]
    }

    /// `(neighbour id, distance)` pairs of `pos`, nearest first.
    pub fn list(&self, pos: usize) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.neighbors(pos)
            .iter()
            .zip(self.distances(pos))
            .map(move |(&j, &d)| (self.ids[j as usize], d))
    }
}

fn check(features: &Features, ids: &[u64], k: usize) -> Result<(usize, usize)> {
    let n = features.len();
    assert_eq!(n, ids.len(), "one id per feature row");
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: n });
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidData("too many points for neighbour search".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok((n, k.min(n - 1)))
}

fn prepare(d: &Dataset) -> Result<(Features, Vec<u64>)> {
    let f = filter_null(d);
    if f.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: f.len() });
    }
    let features = FeatureSpace::of(&f)?.embed_all(&f)?;
    Ok((features, f.ids().to_vec()))
}

/// Exact kNN over the non-null points by full scan.
pub fn knn_brute(d: &Dataset, k: usize) -> Result<NeighborList> {
    let (f, ids) = prepare(d)?;
    NeighborList::brute(&f, ids, k)
}

/// Exact kNN over the non-null points through a k-d tree.
pub fn knn_indexed(d: &Dataset, k: usize) -> Result<NeighborList> {
    let (f, ids) = prepare(d)?;
    NeighborList::indexed(&f, ids, k)
}
