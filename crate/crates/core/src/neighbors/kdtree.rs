use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::data::Features;
use crate::math::dist2;

const LEAF_SIZE: usize = 16;

/// Candidate ordered by `(squared distance, row)`, the tie rule used by every
/// neighbour query in the crate.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub d2: f64,
    pub row: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2.total_cmp(&other.d2).then(self.row.cmp(&other.row))
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Leaf { start: u32, end: u32 },
    Split { left: u32, right: u32 },
}

/// Exact k-d tree over a feature matrix.
///
/// Nodes keep their bounding boxes. A subtree is skipped only when its box is
/// strictly farther than the current k-th candidate, so equal-distance points
/// with smaller row numbers are never lost and results match a linear scan
/// exactly, ties included.
#[derive(Debug)]
pub struct KdTree<'a> {
    points: &'a Features,
    order: Vec<u32>,
    nodes: Vec<Node>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl<'a> KdTree<'a> {
    pub fn build(points: &'a Features) -> Self {
        assert!(points.len() <= u32::MAX as usize, "too many points for a k-d tree");
        let mut tree = KdTree {
            points,
            order: (0..points.len() as u32).collect(),
            nodes: Vec::new(),
            lo: Vec::new(),
            hi: Vec::new(),
        };
        if !points.is_empty() {
            tree.build_node(0, points.len());
        }
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> u32 {
        let dim = self.points.dim();
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start: start as u32, end: end as u32 });
        let mut lo = alloc::vec![f64::INFINITY; dim];
        let mut hi = alloc::vec![f64::NEG_INFINITY; dim];
        for &r in &self.order[start..end] {
            for (d, &x) in self.points.row(r as usize).iter().enumerate() {
                lo[d] = lo[d].min(x);
                hi[d] = hi[d].max(x);
            }
        }
        let axis = (0..dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])).then(b.cmp(&a)))
            .unwrap_or(0);
        let spread = hi[axis] - lo[axis];
        self.lo.extend_from_slice(&lo);
        self.hi.extend_from_slice(&hi);
        if end - start <= LEAF_SIZE || spread == 0.0 {
            return id as u32;
        }
        let mid = start + (end - start) / 2;
        let points = self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points.row(a as usize)[axis]
                .total_cmp(&points.row(b as usize)[axis])
                .then(a.cmp(&b))
        });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split { left, right };
        id as u32
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Lower bound on the squared distance from `q` to any point in the node,
    /// accumulated in dimension order like [`dist2`] so it never exceeds it.
    fn box_dist2(&self, node: usize, q: &[f64]) -> f64 {
        let dim = q.len();
        let lo = &self.lo[node * dim..(node + 1) * dim];
        let hi = &self.hi[node * dim..(node + 1) * dim];
        let mut acc = 0.0;
        for d in 0..dim {
            let gap = if q[d] < lo[d] {
                lo[d] - q[d]
            } else if q[d] > hi[d] {
                q[d] - hi[d]
            } else {
                0.0
            };
            acc += gap * gap;
        }
        acc
    }

    /// The `k` nearest rows to `q` as `(squared distance, row)`, ascending by
    /// distance then row. `exclude` removes one row (the query itself).
    pub fn knn(&self, q: &[f64], k: usize, exclude: Option<u32>) -> Vec<(f64, u32)> {
        if k == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.search(0, q, k, exclude, &mut heap);
        heap.into_sorted_vec().into_iter().map(|c| (c.d2, c.row)).collect()
    }

    /// Nearest row to `q` (lowest row on ties).
    pub fn nearest(&self, q: &[f64]) -> Option<(f64, u32)> {
        self.knn(q, 1, None).into_iter().next()
    }

    fn search(
        &self,
        node: usize,
        q: &[f64],
        k: usize,
        exclude: Option<u32>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &row in &self.order[start as usize..end as usize] {
                    if Some(row) == exclude {
                        continue;
                    }
                    let c = Candidate { d2: dist2(q, self.points.row(row as usize)), row };
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split { left, right } => {
                let (l, r) = (left as usize, right as usize);
                let bl = self.box_dist2(l, q);
                let br = self.box_dist2(r, q);
                let order = if br < bl { [(r, br), (l, bl)] } else { [(l, bl), (r, br)] };
                for (child, bound) in order {
                    if heap.len() == k && bound > heap.peek().expect("heap is full").d2 {
                        continue;
                    }
                    self.search(child, q, k, exclude, heap);
                }
            }
        }
    }
}
