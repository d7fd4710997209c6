use alloc::vec;
use alloc::vec::Vec;

use super::graph::SnnGraph;
use super::params::SnnParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Core,
    /// A core chosen as a cluster representative.
    SpecificCore,
    Border,
    Noise,
}

impl Role {
    pub fn is_core(&self) -> bool {
        matches!(self, Role::Core | Role::SpecificCore)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Core => "core",
            Role::SpecificCore => "specific_core",
            Role::Border => "border",
            Role::Noise => "noise",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "core" => Some(Role::Core),
            "specific_core" => Some(Role::SpecificCore),
            "border" => Some(Role::Border),
            "noise" => Some(Role::Noise),
            _ => None,
        }
    }
}

/// Cluster label, role and SNN density of every graph vertex (by position).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    labels: Vec<Option<u32>>,
    roles: Vec<Role>,
    density: Vec<u32>,
    n_clusters: usize,
}

impl ClusterAssignment {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Cluster of `p`, `None` for noise.
    pub fn label(&self, p: usize) -> Option<u32> {
        self.labels[p]
    }

    pub fn labels(&self) -> &[Option<u32>] {
        &self.labels
    }

    pub fn role(&self, p: usize) -> Role {
        self.roles[p]
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn density(&self, p: usize) -> u32 {
        self.density[p]
    }

    pub fn densities(&self) -> &[u32] {
        &self.density
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn core_count(&self) -> usize {
        self.roles.iter().filter(|r| r.is_core()).count()
    }

    pub fn noise_count(&self) -> usize {
        self.roles.iter().filter(|&&r| r == Role::Noise).count()
    }

    /// Promote the given core positions to [`Role::SpecificCore`].
    pub fn mark_specific(&mut self, specific: &[usize]) {
        for &p in specific {
            debug_assert!(self.roles[p].is_core());
            self.roles[p] = Role::SpecificCore;
        }
    }

    pub(crate) fn from_parts(
        labels: Vec<Option<u32>>,
        roles: Vec<Role>,
        density: Vec<u32>,
        n_clusters: usize,
    ) -> Self {
        ClusterAssignment { labels, roles, density, n_clusters }
    }

    /// Renumber clusters by ascending smallest member position.
    pub(crate) fn canonicalize(&mut self) {
        let mut relabel = vec![u32::MAX; self.n_clusters];
        let mut next = 0u32;
        for l in self.labels.iter_mut().flatten() {
            let slot = &mut relabel[*l as usize];
            if *slot == u32::MAX {
                *slot = next;
                next += 1;
            }
            *l = *slot;
        }
    }

}

/// DBSCAN over SNN similarity.
///
/// Cores are points with density `>= min_pts`. Clusters are the connected
/// components of cores joined by edges of similarity `>= eps`. A non-core
/// point with such an edge to a core becomes a border of the cluster of its
/// most similar core; among equally similar cores the cluster whose smallest
/// core id is lowest wins. Everything else is noise. Cluster ids are finally
/// numbered by each cluster's smallest member id.
pub fn snn_dbscan(g: &SnnGraph, params: &SnnParams) -> ClusterAssignment {
    let n = g.len();
    let eps = params.eps;
    let density: Vec<u32> = (0..n).map(|p| g.density(p, eps)).collect();
    let core: Vec<bool> = density.iter().map(|&d| d >= params.min_pts).collect();

    let mut uf = UnionFind::new(n);
    for (p, q, s) in g.edges() {
        if s >= eps && core[p] && core[q] {
            uf.union(p, q);
        }
    }
    // Provisional ids in order of each component's smallest core position.
    let mut root_label = vec![u32::MAX; n];
    let mut provisional = vec![None; n];
    let mut next = 0u32;
    for p in (0..n).filter(|&p| core[p]) {
        let r = uf.find(p);
        if root_label[r] == u32::MAX {
            root_label[r] = next;
            next += 1;
        }
        provisional[p] = Some(root_label[r]);
    }

    let mut roles = vec![Role::Noise; n];
    for p in 0..n {
        if core[p] {
            roles[p] = Role::Core;
            continue;
        }
        let (adj, sims) = g.row(p);
        let best = adj
            .iter()
            .zip(sims)
            .filter(|&(&q, &s)| s >= eps && core[q as usize])
            .map(|(&q, &s)| (s, provisional[q as usize].expect("core has a label")))
            .min_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        if let Some((_, c)) = best {
            provisional[p] = Some(c);
            roles[p] = Role::Border;
        }
    }

    let mut relabel = vec![u32::MAX; next as usize];
    let mut final_next = 0u32;
    let labels = provisional
        .into_iter()
        .map(|l| {
            l.map(|c| {
                let slot = &mut relabel[c as usize];
                if *slot == u32::MAX {
                    *slot = final_next;
                    final_next += 1;
                }
                *slot
            })
        })
        .collect();

    ClusterAssignment { labels, roles, density, n_clusters: next as usize }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // smaller root wins; keeps find() results independent of edge order
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}
