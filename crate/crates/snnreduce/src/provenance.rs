//! `key=value` sidecar recording how a representative file was produced.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use snnreduce_core::{MethodParams, Reduction};

use crate::error::{Error, Result};

/// `<out>.prov` next to an output file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".prov");
    PathBuf::from(s)
}

/// Sidecar text. `extra` entries follow the method parameters; `runtime_ms`,
/// when given, is always the last line.
pub fn provenance_text(run: &Reduction, extra: &[(&str, String)], runtime_ms: Option<u64>) -> String {
    let prov = run.reduced.provenance();
    let mut out = String::new();
    let mut put = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k}={v}");
    };
    put("method", &prov.method());
    put("source_count", &prov.source_count);
    put("nonnull_count", &prov.nonnull_count);
    put("partition_count", &prov.partition_count);
    put("representatives", &run.reduced.len());
    put("cluster_count", &run.cluster_count);
    put("core_fraction", &format!("{:?}", run.core_fraction));
    put("noise_fraction", &format!("{:?}", run.noise_fraction));
    match &prov.params {
        MethodParams::Snn(s) => {
            put("k", &s.k);
            put("mode", &if s.mutual { "mutual" } else { "shared" });
            put("eps_percentile", &format!("{:?}", s.eps_percentile));
            put("core_fraction_target", &format!("{:?}", s.core_fraction));
            put("estimated", &s.estimated);
            put("split_axis", &s.split_axis.map_or("none".to_string(), |c| c.to_string()));
            for (i, slab) in s.slabs.iter().enumerate() {
                put(&format!("slab.{i}.points"), &slab.points);
                put(&format!("slab.{i}.eps"), &slab.eps);
                put(&format!("slab.{i}.min_pts"), &slab.min_pts);
                put(&format!("slab.{i}.clusters"), &slab.clusters);
                put(&format!("slab.{i}.representatives"), &slab.representatives);
            }
        }
        MethodParams::Scaling(s) => {
            let [x, y, z] = s.divisions;
            put("divisions", &format!("{x},{y},{z}"));
        }
        MethodParams::KMedoids(k) => {
            put("n_clusters", &k.n_clusters);
            put("per_cluster", &k.per_cluster);
            put("max_swap_iters", &k.max_swap_iters);
            put("sample_size", &k.sample_size.map_or("none".to_string(), |s| s.to_string()));
            put("sampled", &k.sampled);
            put("seed", &k.seed);
            put("swap_passes", &k.swap_passes);
            put("cost", &format!("{:?}", k.cost));
        }
    }
    for (k, v) in extra {
        put(k, v);
    }
    if let Some(ms) = runtime_ms {
        put("runtime_ms", &ms);
    }
    out
}

/// Parsed sidecar entries in file order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Sidecar {
    entries: Vec<(String, String)>,
}

impl Sidecar {
    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(source, n + 1, "expected key=value"))?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Sidecar { entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}
