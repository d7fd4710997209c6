use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::dataset::{AttrRange, Dataset, PointView};
use crate::error::{Error, Result};

/// Min-max normalisation of `(i, j, k, attrs...)` onto `[0, 1]` per dimension,
/// followed by an optional per-dimension weight.
///
/// A degenerate dimension (a grid axis of extent 1, or an attribute whose
/// min equals its max) maps to `0.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    dims: [u32; 3],
    ranges: Vec<AttrRange>,
    weights: Vec<f64>,
}

impl FeatureSpace {
    /// Normalisation taken from the dataset's grid and non-null attribute ranges.
    pub fn of(d: &Dataset) -> Result<Self> {
        let ranges = d
            .attr_ranges()
            .iter()
            .map(|r| r.ok_or(Error::TooFewPoints { needed: 1, found: 0 }))
            .collect::<Result<Vec<_>>>()?;
        let dim = 3 + ranges.len();
        Ok(FeatureSpace {
            dims: d.spec().dims,
            ranges,
            weights: vec![1.0; dim],
        })
    }

    /// Scale each normalised coordinate by a weight (default `1.0`).
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} feature weights, got {}",
                self.dim(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "feature weights must be finite and non-negative".into(),
            ));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        3 + self.ranges.len()
    }

    pub fn ranges(&self) -> &[AttrRange] {
        &self.ranges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Unweighted normalised coordinates.
    pub fn normalize_into(&self, idx: [u32; 3], attrs: &[f64], out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim());
        for axis in 0..3 {
            let n = self.dims[axis];
            out[axis] = if n > 1 {
                f64::from(idx[axis]) / f64::from(n - 1)
            } else {
                0.0
            };
        }
        for (a, (r, &v)) in self.ranges.iter().zip(attrs).enumerate() {
            let ext = r.extent();
            out[3 + a] = if ext > 0.0 { (v - r.min) / ext } else { 0.0 };
        }
    }

    /// Weighted coordinates used for every distance computation.
    pub fn embed_into(&self, idx: [u32; 3], attrs: &[f64], out: &mut [f64]) {
        self.normalize_into(idx, attrs, out);
        for (x, w) in out.iter_mut().zip(&self.weights) {
            *x *= w;
        }
    }

    /// Embed the points at `positions`; all of them must be non-null.
    pub fn embed(&self, d: &Dataset, positions: &[usize]) -> Result<Features> {
        let dim = self.dim();
        let mut data = vec![0.0; positions.len() * dim];
        for (row, &p) in data.chunks_exact_mut(dim).zip(positions) {
            if d.is_null(p) {
                return Err(Error::NullPoint { id: d.id(p) });
            }
            self.embed_into(d.idx(p), d.attrs(p), row);
        }
        Ok(Features { dim, data })
    }

    /// Embed every point of a dataset that has no null points.
    pub fn embed_all(&self, d: &Dataset) -> Result<Features> {
        let positions: Vec<usize> = (0..d.len()).collect();
        self.embed(d, &positions)
    }
}

/// Row-major feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    dim: usize,
    data: Vec<f64>,
}

impl Features {
    pub fn from_rows(dim: usize, data: Vec<f64>) -> Self {
        assert!(dim > 0 && data.len() % dim == 0, "ragged feature matrix");
        Features { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> core::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }
}

/// Normalised `(i, j, k, attrs...)` vector of a non-null point, using the
/// dataset's grid and attribute ranges.
pub fn normalize_point(d: &Dataset, p: PointView<'_>) -> Result<Vec<f64>> {
    if p.is_null {
        return Err(Error::NullPoint { id: p.id });
    }
    let fs = FeatureSpace::of(d)?;
    let mut out = vec![0.0; fs.dim()];
    fs.normalize_into(p.idx, p.attrs, &mut out);
    Ok(out)
}
