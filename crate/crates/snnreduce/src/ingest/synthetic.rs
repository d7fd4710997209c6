use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snnreduce_core::{Dataset, Error, GridSpec, Result, DEFAULT_NULL_SENTINEL};

/// Peak of the standard blobs, the top of the cloud-water range of the
/// hurricane data.
pub const STANDARD_PEAK: f64 = 0.00332;
pub const STANDARD_RADIUS: f64 = 0.1;

/// Gaussian bump centred in normalised grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blob {
    pub center: [f64; 3],
    pub radius: f64,
    pub peak: f64,
}

impl Blob {
    fn value_at(&self, pos: [f64; 3]) -> f64 {
        let r2: f64 = (0..3).map(|a| (pos[a] - self.center[a]).powi(2)).sum();
        self.peak * (-r2 / (2.0 * self.radius * self.radius)).exp()
    }
}

const CENTRES: [[f64; 3]; 6] = [
    [0.25, 0.25, 0.5],
    [0.75, 0.30, 0.5],
    [0.50, 0.75, 0.5],
    [0.20, 0.75, 0.3],
    [0.80, 0.80, 0.7],
    [0.50, 0.45, 0.2],
];

/// Fixed layout of up to six blobs with the standard radius and peak.
pub fn standard_blobs(n: usize) -> Result<Vec<Blob>> {
    if n > CENTRES.len() {
        return Err(Error::InvalidParameter(format!("at most {} standard blobs", CENTRES.len())));
    }
    Ok(CENTRES[..n]
        .iter()
        .map(|&center| Blob { center, radius: STANDARD_RADIUS, peak: STANDARD_PEAK })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub dims: [u32; 3],
    pub blobs: Vec<Blob>,
    /// Share of cells that receive additive uniform noise.
    pub noise_fraction: f64,
    /// Noise is drawn from `[0, noise_amplitude)`.
    pub noise_amplitude: f64,
    /// Share of cells set to the sentinel.
    pub null_fraction: f64,
    pub null_sentinel: f64,
    pub attr_name: String,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Standard blob layout with a light noise floor and no null cells.
    pub fn standard(dims: [u32; 3], blobs: usize, seed: u64) -> Result<Self> {
        Ok(SyntheticSpec {
            dims,
            blobs: standard_blobs(blobs)?,
            noise_fraction: 0.05,
            noise_amplitude: 0.05 * STANDARD_PEAK,
            null_fraction: 0.0,
            null_sentinel: DEFAULT_NULL_SENTINEL,
            attr_name: "QCLOUD".into(),
            seed,
        })
    }

    pub fn validate(&self) -> Result<()> {
        GridSpec::new(self.dims, [self.attr_name.as_str()])?.with_sentinel(self.null_sentinel)?;
        for b in &self.blobs {
            if !(b.radius > 0.0 && b.radius.is_finite()) || !b.peak.is_finite() || b.center.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter("blob radius must be positive and all blob values finite".into()));
            }
        }
        for (name, f) in [("noise", self.noise_fraction), ("null", self.null_fraction)] {
            if !(0.0..1.0).contains(&f) {
                return Err(Error::InvalidParameter(format!("{name} fraction must lie in [0, 1), got {f}")));
            }
        }
        if !(self.noise_amplitude >= 0.0 && self.noise_amplitude.is_finite()) {
            return Err(Error::InvalidParameter("noise amplitude must be finite and non-negative".into()));
        }
        Ok(())
    }
}

fn position(dims: [u32; 3], idx: [u32; 3]) -> [f64; 3] {
    let mut pos = [0.0; 3];
    for a in 0..3 {
        if dims[a] > 1 {
            pos[a] = f64::from(idx[a]) / f64::from(dims[a] - 1);
        }
    }
    pos
}

/// Grid-complete volume: the maximum of the blob profiles at each cell, plus
/// noise on exactly `round(noise_fraction * cells)` cells, with exactly
/// `round(null_fraction * cells)` cells set to the sentinel.
pub fn generate_synthetic(s: &SyntheticSpec) -> Result<Dataset> {
    s.validate()?;
    let spec = GridSpec::new(s.dims, [s.attr_name.as_str()])?.with_sentinel(s.null_sentinel)?;
    let cells = spec.cell_count() as usize;
    let mut values: Vec<f64> = (0..cells as u64)
        .map(|id| {
            let pos = position(s.dims, spec.index_of(id));
            s.blobs.iter().map(|b| b.value_at(pos)).fold(0.0, f64::max)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let noisy = (s.noise_fraction * cells as f64).round() as usize;
    let mut picked = index::sample(&mut rng, cells, noisy).into_vec();
    picked.sort_unstable();
    for c in picked {
        values[c] += rng.random::<f64>() * s.noise_amplitude;
    }
    let nulls = (s.null_fraction * cells as f64).round() as usize;
    for c in index::sample(&mut rng, cells, nulls) {
        values[c] = s.null_sentinel;
    }
    Dataset::grid(spec, values)
}

/// Partial dataset made of separate balls of cells, one per blob.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobCloud {
    pub dataset: Dataset,
    /// Blob index of every point, by position.
    pub truth: Vec<usize>,
}

/// Draw `per_blob` distinct cells inside each blob's radius (fewer if the
/// ball holds fewer cells), weighted by the blob profile so cells thin out
/// away from the centre. Every cell carries the blob's peak value.
pub fn sample_blob_cloud(dims: [u32; 3], blobs: &[Blob], per_blob: usize, seed: u64) -> Result<BlobCloud> {
    let spec = GridSpec::new(dims, ["QCLOUD"])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owner: Vec<(u64, usize, f64)> = Vec::new();
    for (b, blob) in blobs.iter().enumerate() {
        let inside: Vec<(u64, f64)> = (0..spec.cell_count())
            .filter_map(|id| {
                let pos = position(dims, spec.index_of(id));
                let r2: f64 = (0..3).map(|a| (pos[a] - blob.center[a]).powi(2)).sum();
                (r2 <= blob.radius * blob.radius).then(|| (id, blob.value_at(pos)))
            })
            .collect();
        let take = per_blob.min(inside.len());
        let picked = index::sample_weighted(&mut rng, inside.len(), |i| inside[i].1, take)
            .map_err(|e| Error::InvalidParameter(format!("blob {b}: {e}")))?;
        for i in picked {
            owner.push((inside[i].0, b, blob.peak));
        }
    }
    owner.sort_unstable_by_key(|o| o.0);
    if owner.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidParameter("blobs overlap".into()));
    }
    let dataset = Dataset::from_columns(
        spec,
        owner.iter().map(|o| o.0).collect(),
        owner.iter().map(|o| o.2).collect(),
    )?;
    Ok(BlobCloud { dataset, truth: owner.iter().map(|o| o.1).collect() })
}
