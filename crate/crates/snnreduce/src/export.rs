//! Point-cloud files for external viewers.
//!
//! Grid indices are written as integers; attribute values with nine
//! significant digits.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use snnreduce_core::{Dataset, Role};

use crate::error::{Error, Result};
use crate::ingest::write_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Ply,
    Vtk,
}

impl ExportFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Ply => "ply",
            ExportFormat::Vtk => "vtk",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "ply" => Ok(ExportFormat::Ply),
            "vtk" => Ok(ExportFormat::Vtk),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

fn cluster_column(d: &Dataset, notes: Option<&[(Option<u32>, Role)]>) -> Vec<i64> {
    match notes {
        Some(n) => n.iter().map(|(c, _)| c.map_or(-1, i64::from)).collect(),
        None => vec![-1; d.len()],
    }
}

/// ASCII PLY: one vertex per point with its attributes and cluster id
/// (`-1` when unclustered).
pub fn write_ply<W: Write>(d: &Dataset, notes: Option<&[(Option<u32>, Role)]>, mut w: W) -> io::Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", d.len())?;
    for axis in ["x", "y", "z"] {
        writeln!(w, "property int {axis}")?;
    }
    for name in &d.spec().attr_names {
        writeln!(w, "property double {name}")?;
    }
    writeln!(w, "property int cluster")?;
    writeln!(w, "end_header")?;
    let clusters = cluster_column(d, notes);
    for p in 0..d.len() {
        let [i, j, k] = d.idx(p);
        write!(w, "{i} {j} {k}")?;
        for v in d.attrs(p) {
            write!(w, " {v:.8e}")?;
        }
        writeln!(w, " {}", clusters[p])?;
    }
    w.flush()
}

/// Legacy ASCII VTK polydata with one vertex cell per point and the
/// attributes and cluster ids as point scalars.
pub fn write_vtk<W: Write>(d: &Dataset, notes: Option<&[(Option<u32>, Role)]>, mut w: W) -> io::Result<()> {
    let n = d.len();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "snnreduce point set")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET POLYDATA")?;
    writeln!(w, "POINTS {n} int")?;
    for p in 0..n {
        let [i, j, k] = d.idx(p);
        writeln!(w, "{i} {j} {k}")?;
    }
    writeln!(w, "VERTICES {n} {}", 2 * n)?;
    for p in 0..n {
        writeln!(w, "1 {p}")?;
    }
    writeln!(w, "POINT_DATA {n}")?;
    for (t, name) in d.spec().attr_names.iter().enumerate() {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for p in 0..n {
            writeln!(w, "{:.8e}", d.attrs(p)[t])?;
        }
    }
    writeln!(w, "SCALARS cluster int 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for c in cluster_column(d, notes) {
        writeln!(w, "{c}")?;
    }
    w.flush()
}

pub fn export(d: &Dataset, notes: Option<&[(Option<u32>, Role)]>, format: ExportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let w = BufWriter::new(file);
    match format {
        ExportFormat::Csv => write_csv(d, notes, w),
        ExportFormat::Ply => write_ply(d, notes, w),
        ExportFormat::Vtk => write_vtk(d, notes, w),
    }
    .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use snnreduce_core::GridSpec;

    fn sample() -> Dataset {
        let s = GridSpec::new([4, 2, 1], ["QCLOUD"]).unwrap();
        Dataset::grid(s, vec![0.0, 0.00166, 0.00332, 1.0 / 3.0, 1e-9, 2.0, 3.0, 4.0]).unwrap()
    }

    #[test]
    fn ply_header_and_rows() {
        let d = sample();
        let notes: Vec<_> = (0..8).map(|p| (if p < 4 { Some(0) } else { None }, Role::Core)).collect();
        let mut out = Vec::new();
        write_ply(&d, Some(&notes), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[2], "element vertex 8");
        assert_eq!(lines[6], "property double QCLOUD");
        let body = &lines[lines.iter().position(|l| *l == "end_header").unwrap() + 1..];
        assert_eq!(body.len(), 8);
        assert_eq!(body[3], "3 0 0 3.33333333e-1 0");
        assert_eq!(body[5], "1 1 0 2.00000000e0 -1");
    }

    #[test]
    fn vtk_values_keep_nine_digits() {
        let d = sample();
        let mut out = Vec::new();
        write_vtk(&d, None, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("POINTS 8 int\n"));
        assert!(text.contains("VERTICES 8 16\n"));
        let start = text.find("SCALARS QCLOUD double 1\nLOOKUP_TABLE default\n").unwrap();
        let values: Vec<f64> = text[start..].lines().skip(2).take(8).map(|l| l.parse().unwrap()).collect();
        for (v, w) in values.iter().zip(d.values()) {
            assert!((v - w).abs() <= 5e-9 * w.abs());
        }
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("obj".parse::<ExportFormat>(), Err(Error::UnsupportedFormat(_))));
        assert_eq!("vtk".parse::<ExportFormat>().unwrap(), ExportFormat::Vtk);
    }
}
