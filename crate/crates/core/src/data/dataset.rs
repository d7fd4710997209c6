use alloc::format;
use alloc::vec::Vec;

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Closed value range of one attribute over the non-null points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttrRange {
    pub min: f64,
    pub max: f64,
}

impl AttrRange {
    pub fn extent(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, v: f64) -> bool {
        self.min <= v && v <= self.max
    }
}

/// One grid sample, owned.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub id: u64,
    pub idx: [u32; 3],
    pub attrs: Vec<f64>,
    pub is_null: bool,
}

/// One grid sample, borrowed from a [`Dataset`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointView<'a> {
    pub id: u64,
    pub idx: [u32; 3],
    pub attrs: &'a [f64],
    pub is_null: bool,
}

impl PointView<'_> {
    pub fn to_record(&self) -> PointRecord {
        PointRecord {
            id: self.id,
            idx: self.idx,
            attrs: self.attrs.to_vec(),
            is_null: self.is_null,
        }
    }
}

/// A set of grid samples stored column-wise, sorted by ascending id.
///
/// Sorting on construction makes every downstream result independent of the
/// order in which points were supplied. Datasets are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    spec: GridSpec,
    ids: Vec<u64>,
    values: Vec<f64>,
    null: Vec<bool>,
    ranges: Vec<Option<AttrRange>>,
}

impl Dataset {
    pub fn empty(spec: GridSpec) -> Result<Self> {
        Self::from_columns(spec, Vec::new(), Vec::new())
    }

    /// A grid-complete dataset; `values` holds `n_attrs` values per cell in id order.
    pub fn grid(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        let cells = spec.cell_count();
        let ids: Vec<u64> = (0..cells).collect();
        Self::from_columns(spec, ids, values)
    }

    /// Build from parallel columns. `values` holds `n_attrs` values per id.
    /// Ids may come in any order but must be unique and inside the grid.
    pub fn from_columns(spec: GridSpec, ids: Vec<u64>, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        let a = spec.n_attrs();
        if values.len() != ids.len() * a {
            return Err(Error::InvalidData(format!(
                "expected {} attribute values for {} points, got {}",
                ids.len() * a,
                ids.len(),
                values.len()
            )));
        }
        let cells = spec.cell_count();
        if let Some(&bad) = ids.iter().find(|&&id| id >= cells) {
            return Err(Error::InvalidData(format!(
                "point id {bad} outside grid of {cells} cells"
            )));
        }
        let (ids, values) = if ids.windows(2).all(|w| w[0] < w[1]) {
            (ids, values)
        } else {
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.sort_unstable_by_key(|&p| ids[p]);
            if let Some(w) = order.windows(2).find(|w| ids[w[0]] == ids[w[1]]) {
                let idx = spec.index_of(ids[w[0]]);
                return Err(Error::InvalidData(format!(
                    "duplicate point at ({},{},{})",
                    idx[0], idx[1], idx[2]
                )));
            }
            let sorted_ids = order.iter().map(|&p| ids[p]).collect();
            let mut sorted_values = Vec::with_capacity(values.len());
            for &p in &order {
                sorted_values.extend_from_slice(&values[p * a..(p + 1) * a]);
            }
            (sorted_ids, sorted_values)
        };

        let sentinel = spec.null_sentinel;
        if let Some(pos) = values.iter().position(|v| !v.is_finite() && *v != sentinel) {
            return Err(Error::InvalidData(format!(
                "point id {} has non-finite attribute value {}",
                ids[pos / a],
                values[pos]
            )));
        }
        let null: Vec<bool> = if a == 0 {
            Vec::new()
        } else {
            values
                .chunks_exact(a)
                .map(|row| row.contains(&sentinel))
                .collect()
        };
        let ranges = compute_ranges(&values, &null, a);
        Ok(Dataset {
            spec,
            ids,
            values,
            null,
            ranges,
        })
    }

    pub fn from_records(spec: GridSpec, records: impl IntoIterator<Item = PointRecord>) -> Result<Self> {
        spec.validate()?;
        let a = spec.n_attrs();
        let mut ids = Vec::new();
        let mut values = Vec::new();
        for r in records {
            if r.attrs.len() != a {
                return Err(Error::InvalidData(format!(
                    "point id {} has {} attributes, grid declares {a}",
                    r.id,
                    r.attrs.len()
                )));
            }
            if !spec.contains(r.idx) || spec.id_of(r.idx) != r.id {
                return Err(Error::InvalidData(format!(
                    "point id {} does not match grid index ({},{},{})",
                    r.id, r.idx[0], r.idx[1], r.idx[2]
                )));
            }
            ids.push(r.id);
            values.extend_from_slice(&r.attrs);
        }
        Self::from_columns(spec, ids, values)
    }

    /// The points at the given positions (ascending) as a new dataset.
    pub fn subset(&self, positions: &[usize]) -> Dataset {
        let a = self.n_attrs();
        let ids: Vec<u64> = positions.iter().map(|&p| self.ids[p]).collect();
        let mut values = Vec::with_capacity(positions.len() * a);
        let mut null = Vec::with_capacity(positions.len());
        for &p in positions {
            values.extend_from_slice(self.attrs(p));
            null.push(self.null[p]);
        }
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        let ranges = compute_ranges(&values, &null, a);
        Dataset {
            spec: self.spec.clone(),
            ids,
            values,
            null,
            ranges,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn n_attrs(&self) -> usize {
        self.spec.n_attrs()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn id(&self, pos: usize) -> u64 {
        self.ids[pos]
    }

    pub fn idx(&self, pos: usize) -> [u32; 3] {
        self.spec.index_of(self.ids[pos])
    }

    pub fn attrs(&self, pos: usize) -> &[f64] {
        let a = self.n_attrs();
        &self.values[pos * a..(pos + 1) * a]
    }

    /// All attribute values, `n_attrs` per point in position order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_null(&self, pos: usize) -> bool {
        self.null[pos]
    }

    pub fn point(&self, pos: usize) -> PointView<'_> {
        PointView {
            id: self.ids[pos],
            idx: self.idx(pos),
            attrs: self.attrs(pos),
            is_null: self.null[pos],
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = PointView<'_>> + '_ {
        (0..self.len()).map(move |p| self.point(p))
    }

    /// Position of the point with this id, if present.
    pub fn position_of(&self, id: u64) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Per-attribute range over non-null points; `None` when no point is non-null.
    pub fn attr_ranges(&self) -> &[Option<AttrRange>] {
        &self.ranges
    }

    pub fn nonnull_count(&self) -> usize {
        self.null.iter().filter(|&&n| !n).count()
    }

    pub fn nonnull_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| !self.null[p]).collect()
    }

    pub fn is_grid_complete(&self) -> bool {
        self.len() as u64 == self.spec.cell_count()
    }
}

fn compute_ranges(values: &[f64], null: &[bool], a: usize) -> Vec<Option<AttrRange>> {
    let mut ranges: Vec<Option<AttrRange>> = alloc::vec![None; a];
    for (row, _) in values.chunks_exact(a.max(1)).zip(null).filter(|(_, &n)| !n) {
        for (r, &v) in ranges.iter_mut().zip(row) {
            *r = Some(match *r {
                None => AttrRange { min: v, max: v },
                Some(AttrRange { min, max }) => AttrRange {
                    min: min.min(v),
                    max: max.max(v),
                },
            });
        }
    }
    ranges
}

/// Keep only the non-null points. Ids are preserved and ranges recomputed.
pub fn filter_null(d: &Dataset) -> Dataset {
    if d.null.iter().all(|&n| !n) {
        return d.clone();
    }
    d.subset(&d.nonnull_positions())
}
