use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Missing-value marker used by the hurricane brick files.
pub const DEFAULT_NULL_SENTINEL: f64 = 1.0e35;

/// Shape and attribute layout of a gridded volume.
///
/// Cell ids are row-major with `i` varying fastest, then `j`, then `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dims: [u32; 3],
    pub attr_names: Vec<String>,
    pub null_sentinel: f64,
    pub timestep: u32,
}

impl GridSpec {
    pub fn new<S: Into<String>>(
        dims: [u32; 3],
        attr_names: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let spec = GridSpec {
            dims,
            attr_names: attr_names.into_iter().map(Into::into).collect(),
            null_sentinel: DEFAULT_NULL_SENTINEL,
            timestep: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_sentinel(mut self, sentinel: f64) -> Result<Self> {
        self.null_sentinel = sentinel;
        self.validate()?;
        Ok(self)
    }

    pub fn with_timestep(mut self, timestep: u32) -> Self {
        self.timestep = timestep;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.contains(&0) {
            return Err(Error::InvalidGrid(format!(
                "dimensions must be positive, got {}x{}x{}",
                self.dims[0], self.dims[1], self.dims[2]
            )));
        }
        if self.attr_names.is_empty() {
            return Err(Error::InvalidGrid("at least one attribute is required".into()));
        }
        let mut seen = BTreeSet::new();
        for name in &self.attr_names {
            if name.is_empty() {
                return Err(Error::InvalidGrid("attribute names must be non-empty".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidGrid(format!("duplicate attribute name `{name}`")));
            }
        }
        if self.null_sentinel.is_nan() {
            return Err(Error::InvalidGrid("null sentinel must not be NaN".into()));
        }
        Ok(())
    }

    pub fn n_attrs(&self) -> usize {
        self.attr_names.len()
    }

    pub fn cell_count(&self) -> u64 {
        self.dims.iter().map(|&d| u64::from(d)).product()
    }

    /// Grid coordinates of a cell id.
    pub fn index_of(&self, id: u64) -> [u32; 3] {
        let nx = u64::from(self.dims[0]);
        let ny = u64::from(self.dims[1]);
        [(id % nx) as u32, ((id / nx) % ny) as u32, (id / (nx * ny)) as u32]
    }

    /// Cell id of grid coordinates. Coordinates must be inside the grid.
    pub fn id_of(&self, idx: [u32; 3]) -> u64 {
        debug_assert!(self.contains(idx));
        let nx = u64::from(self.dims[0]);
        let ny = u64::from(self.dims[1]);
        u64::from(idx[0]) + nx * (u64::from(idx[1]) + ny * u64::from(idx[2]))
    }

    pub fn contains(&self, idx: [u32; 3]) -> bool {
        idx.iter().zip(&self.dims).all(|(&c, &d)| c < d)
    }
}
