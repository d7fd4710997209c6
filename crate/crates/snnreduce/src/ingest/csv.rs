use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use snnreduce_core::{Dataset, GridSpec, Role, DEFAULT_NULL_SENTINEL};

use crate::error::{Error, Result};

/// Cluster label and role per point, aligned with the dataset's positions.
pub type Annotations = Vec<(Option<u32>, Role)>;

/// Read a point list with header `i,j,k,<attr>...`.
///
/// The grid extent is taken as one past the largest index on each axis.
/// Trailing `cluster,role` columns, as written for SNN representatives, are
/// accepted and ignored.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    load_csv_with_sentinel(path, DEFAULT_NULL_SENTINEL)
}

pub fn load_csv_with_sentinel(path: impl AsRef<Path>, sentinel: f64) -> Result<Dataset> {
    load_annotated_csv(path, sentinel).map(|(d, _)| d)
}

/// As [`load_csv`], also returning the `cluster,role` columns when present.
pub fn load_annotated_csv(path: impl AsRef<Path>, sentinel: f64) -> Result<(Dataset, Option<Annotations>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(BufReader::new(file), path, sentinel)
}

struct Row {
    line: usize,
    idx: [u32; 3],
    attrs_at: usize,
    note: Option<(Option<u32>, Role)>,
}

/// Parse CSV from any reader; `source` only labels error messages.
pub fn read_csv<R: BufRead>(reader: R, source: &Path, sentinel: f64) -> Result<(Dataset, Option<Annotations>)> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l.map_err(|e| Error::io(source, e))?,
        None => return Err(Error::parse(source, 1, "missing header")),
    };
    let cols: Vec<&str> = header.trim_end_matches('\r').split(',').map(str::trim).collect();
    if cols.len() < 4 || cols[..3] != ["i", "j", "k"] {
        return Err(Error::parse(source, 1, "header must start with i,j,k and name at least one attribute"));
    }
    let annotated = cols.len() >= 6 && cols[cols.len() - 2..] == ["cluster", "role"];
    let names: Vec<String> = cols[3..cols.len() - if annotated { 2 } else { 0 }]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let a = names.len();
    if a == 0 {
        return Err(Error::parse(source, 1, "no attribute columns"));
    }

    let mut rows = Vec::new();
    let mut values = Vec::new();
    let mut max = [0u32; 3];
    for (n, line) in lines {
        let line_no = n + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::parse(
                source,
                line_no,
                format!("expected {} fields, found {}", cols.len(), fields.len()),
            ));
        }
        let mut idx = [0u32; 3];
        for ax in 0..3 {
            idx[ax] = fields[ax].trim().parse().map_err(|_| {
                Error::parse(source, line_no, format!("bad {} index `{}`", cols[ax], fields[ax]))
            })?;
            max[ax] = max[ax].max(idx[ax]);
        }
        let attrs_at = values.len();
        for (t, f) in fields[3..3 + a].iter().enumerate() {
            let v: f64 = f.trim().parse().map_err(|_| {
                Error::parse(source, line_no, format!("bad value `{f}` for {}", names[t]))
            })?;
            values.push(v);
        }
        let note = if annotated {
            let c = fields[3 + a].trim();
            let cluster = match c {
                "-1" | "" => None,
                _ => Some(c.parse().map_err(|_| {
                    Error::parse(source, line_no, format!("bad cluster `{c}`"))
                })?),
            };
            let r = fields[4 + a].trim();
            let role = Role::parse(r).ok_or_else(|| Error::parse(source, line_no, format!("bad role `{r}`")))?;
            Some((cluster, role))
        } else {
            None
        };
        rows.push(Row { line: line_no, idx, attrs_at, note });
    }

    let dims = if rows.is_empty() { [1, 1, 1] } else { max.map(|m| m + 1) };
    let spec = GridSpec::new(dims, names)?.with_sentinel(sentinel)?;
    rows.sort_by_key(|r| spec.id_of(r.idx));
    if let Some(w) = rows.windows(2).find(|w| w[0].idx == w[1].idx) {
        let [i, j, k] = w[1].idx;
        let line = w[0].line.max(w[1].line);
        return Err(Error::parse(source, line, format!("duplicate cell ({i},{j},{k})")));
    }
    let ids = rows.iter().map(|r| spec.id_of(r.idx)).collect();
    let sorted = rows.iter().flat_map(|r| values[r.attrs_at..r.attrs_at + a].iter().copied()).collect();
    let notes = annotated.then(|| rows.iter().map(|r| r.note.expect("annotated row")).collect());
    let d = Dataset::from_columns(spec, ids, sorted)?;
    Ok((d, notes))
}

/// Write `d` as CSV. Values use the shortest form that parses back to the
/// same `f64`.
pub fn write_csv<W: Write>(d: &Dataset, notes: Option<&[(Option<u32>, Role)]>, mut w: W) -> io::Result<()> {
    write!(w, "i,j,k")?;
    for name in &d.spec().attr_names {
        write!(w, ",{name}")?;
    }
    if notes.is_some() {
        write!(w, ",cluster,role")?;
    }
    writeln!(w)?;
    for p in 0..d.len() {
        let [i, j, k] = d.idx(p);
        write!(w, "{i},{j},{k}")?;
        for v in d.attrs(p) {
            write!(w, ",{v:?}")?;
        }
        if let Some(notes) = notes {
            let (c, role) = notes[p];
            match c {
                Some(c) => write!(w, ",{c},{}", role.as_str())?,
                None => write!(w, ",-1,{}", role.as_str())?,
            }
        }
        writeln!(w)?;
    }
    w.flush()
}

pub fn save_csv(d: &Dataset, notes: Option<&[(Option<u32>, Role)]>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(d, notes, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}
