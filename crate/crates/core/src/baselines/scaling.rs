use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::data::{Dataset, MethodParams, ReducedDataset, ReductionProvenance, ScalingProvenance};
use crate::error::{Error, Result};

/// Number of boxes per axis after reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalingParams {
    pub divisions: [u32; 3],
}

impl ScalingParams {
    pub fn new(divisions: [u32; 3]) -> Self {
        ScalingParams { divisions }
    }

    /// Divisions for cubes of `edge` cells per side (the last box on an axis
    /// may be shorter).
    pub fn from_edge(dims: [u32; 3], edge: u32) -> Result<Self> {
        if edge == 0 {
            return Err(Error::InvalidParameter("cube edge must be positive".into()));
        }
        Ok(ScalingParams { divisions: dims.map(|n| n.div_ceil(edge)) })
    }

    pub fn validate(&self, dims: [u32; 3]) -> Result<()> {
        for (axis, (&m, &n)) in self.divisions.iter().zip(&dims).enumerate() {
            if m == 0 || m > n {
                return Err(Error::InvalidParameter(format!(
                    "divisions along axis {axis} must lie in [1, {n}], got {m}"
                )));
            }
        }
        Ok(())
    }

    pub fn box_count(&self) -> u64 {
        self.divisions.iter().map(|&d| u64::from(d)).product()
    }
}

/// Split `n` cells into `m` runs whose lengths differ by at most one, longer
/// runs first. Returns the box of every cell and the centre cell of every box.
fn split_axis(n: u32, m: u32) -> (Vec<u32>, Vec<u32>) {
    let (base, rem) = (n / m, n % m);
    let mut box_of = Vec::with_capacity(n as usize);
    let mut centre = Vec::with_capacity(m as usize);
    let mut start = 0;
    for b in 0..m {
        let len = base + u32::from(b < rem);
        centre.push(start + (len - 1) / 2);
        box_of.extend(core::iter::repeat_n(b, len as usize));
        start += len;
    }
    (box_of, centre)
}

/// Replace each box of the grid by one point at its centre cell carrying the
/// mean of the box's non-null attribute values. All-null boxes are dropped.
pub fn scale_reduce(d: &Dataset, s: &ScalingParams) -> Result<ReducedDataset> {
    let spec = d.spec();
    s.validate(spec.dims)?;
    let nonnull = d.nonnull_count();
    if nonnull == 0 {
        return Err(Error::TooFewPoints { needed: 1, found: 0 });
    }
    let axes: Vec<(Vec<u32>, Vec<u32>)> =
        (0..3).map(|a| split_axis(spec.dims[a], s.divisions[a])).collect();
    let [mx, my, _] = s.divisions.map(|m| m as usize);
    let boxes = s.box_count() as usize;
    let a = d.n_attrs();

    let mut count = vec![0u64; boxes];
    let mut sum = vec![0.0f64; boxes * a];
    let mut lo = vec![f64::INFINITY; boxes * a];
    let mut hi = vec![f64::NEG_INFINITY; boxes * a];
    for p in (0..d.len()).filter(|&p| !d.is_null(p)) {
        let idx = d.idx(p);
        let b = axes[0].0[idx[0] as usize] as usize
            + mx * (axes[1].0[idx[1] as usize] as usize + my * axes[2].0[idx[2] as usize] as usize);
        count[b] += 1;
        for (t, &v) in d.attrs(p).iter().enumerate() {
            sum[b * a + t] += v;
            lo[b * a + t] = lo[b * a + t].min(v);
            hi[b * a + t] = hi[b * a + t].max(v);
        }
    }

    let mut ids = Vec::new();
    let mut values = Vec::new();
    for b in (0..boxes).filter(|&b| count[b] > 0) {
        let (bx, by, bz) = (b % mx, (b / mx) % my, b / (mx * my));
        let centre = [axes[0].1[bx], axes[1].1[by], axes[2].1[bz]];
        ids.push(spec.id_of(centre));
        for t in 0..a {
            // clamp: a rounded mean may step an ulp outside the box's values
            let mean = sum[b * a + t] / count[b] as f64;
            values.push(mean.clamp(lo[b * a + t], hi[b * a + t]));
        }
    }
    let reps = Dataset::from_columns(spec.clone(), ids, values)?;
    let provenance = ReductionProvenance {
        params: MethodParams::Scaling(ScalingProvenance { divisions: s.divisions }),
        source_count: d.len(),
        nonnull_count: nonnull,
        partition_count: 1,
    };
    ReducedDataset::new(reps, provenance)
}
