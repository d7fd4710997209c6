//! Random datasets and straightforward reference implementations.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snnreduce::core::{Dataset, GridSpec, NeighborList, Role, DEFAULT_NULL_SENTINEL};

/// Grid dataset with roughly `max_n` cells, a few null cells and, when
/// `coarse` is set, attribute values drawn from a handful of levels so that
/// distance ties are common.
pub fn random_dataset(seed: u64, max_n: usize, attrs: usize, coarse: bool) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = rng.random_range(1..=16u32);
    let ny = rng.random_range(1..=16u32);
    let nz_max = (max_n as u32 / (nx * ny)).clamp(1, 12);
    let nz = rng.random_range(1..=nz_max);
    let names: Vec<String> = (0..attrs).map(|a| format!("a{a}")).collect();
    let spec = GridSpec::new([nx, ny, nz], names).unwrap();
    let cells = spec.cell_count() as usize;
    let null_rate = if rng.random_bool(0.5) { 0.0 } else { 0.1 };
    let mut values = Vec::with_capacity(cells * attrs);
    for _ in 0..cells {
        let null = rng.random_bool(null_rate);
        for _ in 0..attrs {
            let v = if null {
                DEFAULT_NULL_SENTINEL
            } else if coarse {
                f64::from(rng.random_range(0..4u32)) * 0.25
            } else {
                rng.random::<f64>() * 3.0 - 1.0
            };
            values.push(v);
        }
    }
    Dataset::grid(spec, values).unwrap()
}

/// Normalised coordinates of every non-null point, in id order.
pub fn reference_features(d: &Dataset) -> (Vec<u64>, Vec<Vec<f64>>) {
    let live: Vec<usize> = (0..d.len()).filter(|&p| !d.is_null(p)).collect();
    (live.iter().map(|&p| d.id(p)).collect(), embed_like(d, d))
}

/// Non-null points of `target` normalised with the grid and attribute
/// ranges of `source`.
pub fn embed_like(source: &Dataset, target: &Dataset) -> Vec<Vec<f64>> {
    let dims = source.spec().dims;
    let a = source.n_attrs();
    let mut lo = vec![f64::INFINITY; a];
    let mut hi = vec![f64::NEG_INFINITY; a];
    for p in (0..source.len()).filter(|&p| !source.is_null(p)) {
        for (t, &v) in source.attrs(p).iter().enumerate() {
            lo[t] = lo[t].min(v);
            hi[t] = hi[t].max(v);
        }
    }
    (0..target.len())
        .filter(|&p| !target.is_null(p))
        .map(|p| {
            let idx = target.idx(p);
            let mut row: Vec<f64> = (0..3)
                .map(|ax| if dims[ax] > 1 { f64::from(idx[ax]) / f64::from(dims[ax] - 1) } else { 0.0 })
                .collect();
            for (t, &v) in target.attrs(p).iter().enumerate() {
                let ext = hi[t] - lo[t];
                row.push(if ext > 0.0 { (v - lo[t]) / ext } else { 0.0 });
            }
            row
        })
        .collect()
}

/// `(max, mean)` over source points of the distance to the nearest
/// representative, by full scan.
pub fn reference_coverage(source: &Dataset, reps: &Dataset) -> (f64, f64) {
    let src = embed_like(source, source);
    let rep = embed_like(source, reps);
    let dist: Vec<f64> = src
        .iter()
        .map(|s| rep.iter().map(|r| sq_dist(s, r)).fold(f64::INFINITY, f64::min).sqrt())
        .collect();
    let max = dist.iter().copied().fold(0.0, f64::max);
    let mut sum = 0.0;
    for x in &dist {
        sum += x;
    }
    (max, sum / dist.len() as f64)
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s
}

/// Full sort of all other points by `(distance, position)`.
pub fn reference_knn(rows: &[Vec<f64>], k: usize) -> Vec<Vec<(usize, f64)>> {
    let n = rows.len();
    let w = k.min(n - 1);
    (0..n)
        .map(|i| {
            let mut all: Vec<(f64, usize)> =
                (0..n).filter(|&j| j != i).map(|j| (sq_dist(&rows[i], &rows[j]), j)).collect();
            all.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
            all.truncate(w);
            all.into_iter().map(|(d2, j)| (j, d2.sqrt())).collect()
        })
        .collect()
}

/// Dense similarity matrix: shared-list size for mutual pairs, else 0.
pub fn reference_sims(nl: &NeighborList, mutual: bool) -> Vec<Vec<u32>> {
    let n = nl.len();
    let sets: Vec<BTreeSet<u32>> = (0..n).map(|p| nl.neighbors(p).iter().copied().collect()).collect();
    let mut s = vec![vec![0u32; n]; n];
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            let linked = if mutual {
                sets[p].contains(&(q as u32)) && sets[q].contains(&(p as u32))
            } else {
                true
            };
            if linked {
                s[p][q] = sets[p].intersection(&sets[q]).count() as u32;
            }
        }
    }
    s
}

pub struct ReferenceClustering {
    pub labels: Vec<Option<u32>>,
    pub roles: Vec<Role>,
    pub density: Vec<u32>,
}

/// Breadth-first DBSCAN over a dense similarity matrix.
pub fn reference_dbscan(sims: &[Vec<u32>], eps: u32, min_pts: u32) -> ReferenceClustering {
    let n = sims.len();
    let density: Vec<u32> = (0..n)
        .map(|p| (0..n).filter(|&q| q != p && sims[p][q] > 0 && sims[p][q] >= eps).count() as u32)
        .collect();
    let core: Vec<bool> = density.iter().map(|&d| d >= min_pts).collect();

    // components over cores, discovered in position order
    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0;
    for start in 0..n {
        if !core[start] || comp[start] != usize::MAX {
            continue;
        }
        comp[start] = n_comp;
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for q in 0..n {
                if core[q] && comp[q] == usize::MAX && sims[p][q] >= eps && sims[p][q] > 0 {
                    comp[q] = n_comp;
                    queue.push_back(q);
                }
            }
        }
        n_comp += 1;
    }

    let mut provisional: Vec<Option<usize>> = (0..n).map(|p| core[p].then_some(comp[p])).collect();
    let mut roles: Vec<Role> = (0..n).map(|p| if core[p] { Role::Core } else { Role::Noise }).collect();
    for p in (0..n).filter(|&p| !core[p]) {
        let mut best: Option<(u32, usize)> = None;
        for q in (0..n).filter(|&q| core[q] && sims[p][q] > 0 && sims[p][q] >= eps) {
            let cand = (sims[p][q], comp[q]);
            best = match best {
                Some(b) if b.0 > cand.0 || (b.0 == cand.0 && b.1 <= cand.1) => Some(b),
                _ => Some(cand),
            };
        }
        if let Some((_, c)) = best {
            provisional[p] = Some(c);
            roles[p] = Role::Border;
        }
    }

    // final ids by smallest member position
    let mut order = vec![None; n_comp];
    let mut next = 0;
    let labels = provisional
        .iter()
        .map(|c| {
            c.map(|c| {
                *order[c].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            })
        })
        .collect();
    ReferenceClustering { labels, roles, density }
}

/// Greedy cover: cores by density descending, then position.
pub fn reference_specific(sims: &[Vec<u32>], density: &[u32], roles: &[Role], eps: u32) -> Vec<usize> {
    let mut cores: Vec<usize> = (0..roles.len()).filter(|&p| roles[p] == Role::Core).collect();
    cores.sort_by(|&a, &b| density[b].cmp(&density[a]).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::new();
    for c in cores {
        if !chosen.iter().any(|&s| sims[s][c] > 0 && sims[s][c] >= eps) {
            chosen.push(c);
        }
    }
    chosen.sort_unstable();
    chosen
}
