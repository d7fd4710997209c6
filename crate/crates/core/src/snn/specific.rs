use alloc::vec;
use alloc::vec::Vec;

use super::dbscan::ClusterAssignment;
use super::graph::SnnGraph;
use super::params::SnnParams;

/// Greedy cover of the core points.
///
/// Cores are visited by descending density (ascending position on ties); a
/// core is kept unless an already-kept core has similarity `>= eps` with it.
/// Every core therefore is kept or sits one eps-edge from a kept core, and
/// each cluster keeps at least one. Returns ascending positions.
pub fn select_specific_cores(a: &ClusterAssignment, g: &SnnGraph, params: &SnnParams) -> Vec<usize> {
    let mut cores: Vec<usize> = (0..a.len()).filter(|&p| a.role(p).is_core()).collect();
    cores.sort_by(|&p, &q| a.density(q).cmp(&a.density(p)).then(p.cmp(&q)));
    let mut covered = vec![false; a.len()];
    let mut selected = Vec::new();
    for c in cores {
        if covered[c] {
            continue;
        }
        selected.push(c);
        let (adj, sims) = g.row(c);
        for (&q, &s) in adj.iter().zip(sims) {
            if s >= params.eps {
                covered[q as usize] = true;
            }
        }
    }
    selected.sort_unstable();
    selected
}
