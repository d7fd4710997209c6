use std::fs;
use std::path::Path;

use snnreduce_core::{Dataset, GridSpec};

use crate::error::{Error, Result};

fn read_values(path: &Path, cells: u64) -> Result<Vec<f32>> {
    let expected = cells * 4;
    let actual = fs::metadata(path).map_err(|e| Error::io(path, e))?.len();
    if actual != expected {
        return Err(Error::SizeMismatch { path: path.to_path_buf(), expected, actual });
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() as u64 != expected {
        return Err(Error::SizeMismatch { path: path.to_path_buf(), expected, actual: bytes.len() as u64 });
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|b| f32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .collect())
}

/// Load a single-attribute brick: big-endian `f32` per cell, x fastest.
///
/// A cell equal to the sentinel narrowed to `f32` is null and holds the
/// sentinel itself.
pub fn load_brick(path: impl AsRef<Path>, spec: &GridSpec) -> Result<Dataset> {
    load_bricks(&[path], spec)
}

/// Load one brick per attribute of `spec`, in attribute order.
pub fn load_bricks<P: AsRef<Path>>(paths: &[P], spec: &GridSpec) -> Result<Dataset> {
    spec.validate()?;
    if paths.len() != spec.n_attrs() {
        return Err(snnreduce_core::Error::InvalidParameter(format!(
            "{} brick files given for {} attributes",
            paths.len(),
            spec.n_attrs()
        ))
        .into());
    }
    let cells = spec.cell_count();
    let marker = spec.null_sentinel as f32;
    let columns = paths
        .iter()
        .map(|p| read_values(p.as_ref(), cells))
        .collect::<Result<Vec<_>>>()?;
    let a = columns.len();
    let mut values = vec![0.0; cells as usize * a];
    for (t, col) in columns.iter().enumerate() {
        for (c, &v) in col.iter().enumerate() {
            values[c * a + t] = if v.to_bits() == marker.to_bits() { spec.null_sentinel } else { f64::from(v) };
        }
    }
    Ok(Dataset::grid(spec.clone(), values)?)
}

/// Write attribute `attr` of a grid-complete dataset as a brick.
///
/// Values are narrowed to `f32`; null cells hold the sentinel.
pub fn export_brick(d: &Dataset, attr: usize, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if !d.is_grid_complete() {
        return Err(snnreduce_core::Error::InvalidData("brick export needs a grid-complete dataset".into()).into());
    }
    if attr >= d.n_attrs() {
        return Err(snnreduce_core::Error::InvalidParameter(format!("no attribute {attr}")).into());
    }
    let sentinel = d.spec().null_sentinel as f32;
    let mut bytes = Vec::with_capacity(d.len() * 4);
    for p in 0..d.len() {
        let v = if d.is_null(p) { sentinel } else { d.attrs(p)[attr] as f32 };
        bytes.extend_from_slice(&v.to_be_bytes());
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
