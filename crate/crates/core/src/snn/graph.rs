use alloc::vec::Vec;

use crate::neighbors::NeighborList;
use crate::par;

/// Which point pairs receive a similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnnMode {
    /// Only pairs that appear in each other's neighbour lists (Jarvis-Patrick).
    #[default]
    Mutual,
    /// Every pair whose neighbour lists overlap.
    Shared,
}

/// Sparse symmetric shared-nearest-neighbour similarity graph in CSR form.
///
/// `sim(p, q)` is the number of neighbours the lists of `p` and `q` have in
/// common; pairs with similarity 0 have no edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SnnGraph {
    k: usize,
    mode: SnnMode,
    ids: Vec<u64>,
    offsets: Vec<usize>,
    adj: Vec<u32>,
    sims: Vec<u32>,
}

impl SnnGraph {
    pub fn build(nl: &NeighborList, mode: SnnMode) -> Self {
        let n = nl.len();
        let sorted: Vec<Vec<u32>> = (0..n)
            .map(|p| {
                let mut v = nl.neighbors(p).to_vec();
                v.sort_unstable();
                v
            })
            .collect();

        // Upper-triangle edges per point: (q, sim) with q > p.
        let upper: Vec<Vec<(u32, u32)>> = match mode {
            SnnMode::Mutual => par::map_range(n, |p| {
                sorted[p]
                    .iter()
                    .filter(|&&q| q as usize > p)
                    .filter(|&&q| sorted[q as usize].binary_search(&(p as u32)).is_ok())
                    .filter_map(|&q| {
                        let s = intersection_len(&sorted[p], &sorted[q as usize]);
                        (s > 0).then_some((q, s))
                    })
                    .collect()
            }),
            SnnMode::Shared => {
                let mut inverse: Vec<Vec<u32>> = alloc::vec![Vec::new(); n];
                for (p, list) in sorted.iter().enumerate() {
                    for &r in list {
                        inverse[r as usize].push(p as u32);
                    }
                }
                par::map_range(n, |p| {
                    let mut hits: Vec<u32> = sorted[p]
                        .iter()
                        .flat_map(|&r| inverse[r as usize].iter().copied())
                        .filter(|&q| q as usize > p)
                        .collect();
                    hits.sort_unstable();
                    let mut out = Vec::new();
                    for run in hits.chunk_by(|a, b| a == b) {
                        out.push((run[0], run.len() as u32));
                    }
                    out
                })
            }
        };

        let mut degree = alloc::vec![0usize; n];
        for (p, row) in upper.iter().enumerate() {
            degree[p] += row.len();
            for &(q, _) in row {
                degree[q as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = offsets[n];
        let mut adj = alloc::vec![0u32; total];
        let mut sims = alloc::vec![0u32; total];
        let mut fill = offsets[..n].to_vec();
        // Rows come out sorted: lower neighbours are written while visiting
        // them (ascending p), then each point's own upper row (ascending q).
        for (p, row) in upper.iter().enumerate() {
            for &(q, s) in row {
                let slot = fill[p];
                adj[slot] = q;
                sims[slot] = s;
                fill[p] += 1;
                let slot = fill[q as usize];
                adj[slot] = p as u32;
                sims[slot] = s;
                fill[q as usize] += 1;
            }
        }
        let graph = SnnGraph {
            k: nl.k(),
            mode,
            ids: nl.ids().to_vec(),
            offsets,
            adj,
            sims,
        };
        debug_assert!((0..n).all(|p| graph.row(p).0.windows(2).all(|w| w[0] < w[1])));
        graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> SnnMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    /// Neighbour positions (ascending) and their similarities.
    pub fn row(&self, p: usize) -> (&[u32], &[u32]) {
        let r = self.offsets[p]..self.offsets[p + 1];
        (&self.adj[r.clone()], &self.sims[r])
    }

    pub fn sim(&self, p: usize, q: usize) -> u32 {
        let (adj, sims) = self.row(p);
        adj.binary_search(&(q as u32)).map_or(0, |i| sims[i])
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    /// Each undirected edge once, as `(p, q, sim)` with `p < q`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.len()).flat_map(move |p| {
            let (adj, sims) = self.row(p);
            adj.iter()
                .zip(sims)
                .filter(move |(&q, _)| q as usize > p)
                .map(move |(&q, &s)| (p, q as usize, s))
        })
    }

    /// Number of neighbours with similarity at least `eps`.
    pub fn density(&self, p: usize, eps: u32) -> u32 {
        self.row(p).1.iter().filter(|&&s| s >= eps).count() as u32
    }
}

/// Build the mutual-neighbour SNN graph.
pub fn build_snn_graph(nl: &NeighborList) -> SnnGraph {
    SnnGraph::build(nl, SnnMode::Mutual)
}

fn intersection_len(a: &[u32], b: &[u32]) -> u32 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
