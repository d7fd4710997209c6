//! The `snnreduce` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
//! Failures print a single `error: <kind>: <message>` line on stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use snnreduce_core::{
    coverage_of, filter_null, Dataset, GridSpec, KMedoidsParams, MethodConfig, PartitionSettings,
    ScalingParams, SnnConfig, SnnMode, SplitAxis, DEFAULT_NULL_SENTINEL,
};

use crate::error::Error;
use crate::export::{export, ExportFormat};
use crate::ingest::{generate_synthetic, load_annotated_csv, load_bricks, save_csv, SyntheticSpec};
use crate::provenance::{provenance_text, sidecar_path, Sidecar};
use crate::report::{run_timed, write_eval_report, EvalRecord, EvalRow};

#[derive(Debug, Parser)]
#[command(name = "snnreduce", version, about = "Reduce gridded volumes to cluster representatives")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic blob volume as CSV.
    Gen(GenArgs),
    /// Reduce a dataset to representatives.
    Reduce(ReduceArgs),
    /// Score reduced files against their source dataset.
    Eval(EvalArgs),
    /// Convert a point file for external viewers.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Grid extent as NXxNYxNZ.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<[u32; 3]>,
    /// Number of standard blobs in a generated volume.
    #[arg(long, default_value_t = 3)]
    pub blobs: usize,
    #[arg(long, default_value_t = 0.05)]
    pub noise_fraction: f64,
    /// Upper bound of the additive noise (default: 5% of the blob peak).
    #[arg(long)]
    pub noise_amplitude: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub null_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Brick file, one per attribute (requires --dims).
    #[arg(long, conflicts_with = "input_csv")]
    pub input_brick: Vec<PathBuf>,
    /// Attribute names for the brick files.
    #[arg(long)]
    pub attr_name: Vec<String>,
    /// CSV point list with header i,j,k,<attr>.
    #[arg(long)]
    pub input_csv: Option<PathBuf>,
    /// Missing-value marker.
    #[arg(long, allow_negative_numbers = true)]
    pub sentinel: Option<f64>,
    #[command(flatten)]
    pub synth: SynthArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Snn,
    Scaling,
    Kmedoids,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
    Z,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Ply,
    Vtk,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Snn)]
    pub method: MethodArg,

    /// Neighbourhood size for SNN.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<u32>,
    #[arg(long)]
    pub min_pts: Option<u32>,
    #[arg(long)]
    pub eps_percentile: Option<f64>,
    #[arg(long)]
    pub core_fraction: Option<f64>,
    /// Similarity for any pair with shared neighbours, not only mutual ones.
    #[arg(long)]
    pub shared: bool,

    /// Boxes per axis for scaling, as DX,DY,DZ.
    #[arg(long, value_parser = parse_divisions)]
    pub divisions: Option<[u32; 3]>,

    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long)]
    pub per_cluster: Option<usize>,
    /// Run PAM on a seeded sample when there are more points than this.
    #[arg(long)]
    pub sample_size: Option<usize>,
    #[arg(long)]
    pub max_swap_iters: Option<usize>,

    /// Split the dataset into this many slabs.
    #[arg(long)]
    pub parts: Option<usize>,
    #[arg(long, value_enum, default_value_t = AxisArg::Auto)]
    pub axis: AxisArg,
    /// Working-memory budget in bytes; picks the slab count when --parts
    /// is absent and processes slabs one at a time.
    #[arg(long)]
    pub memory_cap: Option<u64>,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Reduced CSV files.
    #[arg(required = true)]
    pub reduced: Vec<PathBuf>,
    /// Report path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// CSV point file, optionally with cluster,role columns.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub format: FormatArg,
    #[arg(long, allow_negative_numbers = true)]
    pub sentinel: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_dims(s: &str) -> Result<[u32; 3], String> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 3 {
        return Err(format!("expected NXxNYxNZ, got `{s}`"));
    }
    let mut out = [0u32; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("bad extent `{p}`"))?;
    }
    Ok(out)
}

fn parse_divisions(s: &str) -> Result<[u32; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected DX,DY,DZ, got `{s}`"));
    }
    let mut out = [0u32; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("bad division `{p}`"))?;
    }
    Ok(out)
}

/// Why a command failed, and the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Data(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    /// Single-line `error: <kind>: <message>`.
    pub fn line(&self) -> String {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Data(m) => ("data", m),
            Failure::Internal(m) => ("internal", m),
        };
        format!("error: {kind}: {}", msg.replace(['\n', '\r'], " "))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Core(c) => core_failure(c, e.to_string()),
            Error::UnsupportedFormat(_) => Failure::Usage(e.to_string()),
            Error::Io { .. } | Error::SizeMismatch { .. } | Error::Parse { .. } => Failure::Data(e.to_string()),
        }
    }
}

impl From<snnreduce_core::Error> for Failure {
    fn from(e: snnreduce_core::Error) -> Self {
        let msg = e.to_string();
        core_failure(&e, msg)
    }
}

fn core_failure(e: &snnreduce_core::Error, msg: String) -> Failure {
    use snnreduce_core::Error as C;
    match e {
        C::InvalidGrid(_) | C::InvalidParameter(_) => Failure::Usage(msg),
        C::Slab { source, .. } => match core_failure(source, msg.clone()) {
            Failure::Usage(_) => Failure::Usage(msg),
            other => other,
        },
        _ => Failure::Data(msg),
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Error::io(path, e).into()
}

/// Parse `args` (program name first) and run. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", usage(first.trim_start_matches("error: ")).line());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(f.exit_code())
        }
    }
}

pub fn run(cli: Cli) -> CmdResult {
    let threads = cli.threads;
    let command = cli.command;
    let go = move || match command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Export(a) => cmd_export(&a),
    };
    match threads {
        None => go(),
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Internal(e.to_string()))?
            .install(go),
    }
}

fn synthetic_spec(a: &SynthArgs, sentinel: f64) -> CmdResult<SyntheticSpec> {
    let dims = a.dims.ok_or_else(|| usage("--dims is required"))?;
    let mut s = SyntheticSpec::standard(dims, a.blobs, a.seed)?;
    s.noise_fraction = a.noise_fraction;
    if let Some(amp) = a.noise_amplitude {
        s.noise_amplitude = amp;
    }
    s.null_fraction = a.null_fraction;
    s.null_sentinel = sentinel;
    s.validate()?;
    Ok(s)
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let s = synthetic_spec(&a.synth, DEFAULT_NULL_SENTINEL)?;
    let d = generate_synthetic(&s)?;
    save_csv(&d, None, &a.out)?;
    println!("points={} nonnull={} null={}", d.len(), d.nonnull_count(), d.len() - d.nonnull_count());
    Ok(())
}

/// Load the dataset named by the input flags, generating one when no file is given.
fn load_input(a: &InputArgs) -> CmdResult<(Dataset, String)> {
    let sentinel = a.sentinel.unwrap_or(DEFAULT_NULL_SENTINEL);
    if !a.input_brick.is_empty() {
        let dims = a.synth.dims.ok_or_else(|| usage("--input-brick requires --dims"))?;
        let names: Vec<String> = if a.attr_name.is_empty() {
            if a.input_brick.len() == 1 {
                vec!["value".to_string()]
            } else {
                (0..a.input_brick.len()).map(|i| format!("attr{i}")).collect()
            }
        } else {
            a.attr_name.clone()
        };
        let spec = GridSpec::new(dims, names)?.with_sentinel(sentinel)?;
        let d = load_bricks(&a.input_brick, &spec)?;
        let label = a.input_brick.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(";");
        return Ok((d, label));
    }
    if let Some(p) = &a.input_csv {
        let (d, _) = load_annotated_csv(p, sentinel)?;
        return Ok((d, p.display().to_string()));
    }
    let s = synthetic_spec(&a.synth, sentinel)?;
    let label = format!("synthetic:{}x{}x{}:blobs={}:seed={}", s.dims[0], s.dims[1], s.dims[2], a.synth.blobs, s.seed);
    Ok((generate_synthetic(&s)?, label))
}

/// Rough working-set bytes per point for SNN: features, neighbour lists,
/// graph rows and per-point bookkeeping.
fn snn_bytes_per_point(k: usize, attrs: usize) -> u64 {
    ((3 + attrs) * 8 + k * 12 + k * 8 + 64) as u64
}

fn method_config(a: &ReduceArgs, d: &Dataset) -> CmdResult<MethodConfig> {
    let snn_only = a.k.is_some()
        || a.eps.is_some()
        || a.min_pts.is_some()
        || a.eps_percentile.is_some()
        || a.core_fraction.is_some()
        || a.shared
        || a.parts.is_some()
        || a.memory_cap.is_some();
    let km_only = a.clusters.is_some() || a.per_cluster.is_some() || a.sample_size.is_some() || a.max_swap_iters.is_some();
    match a.method {
        MethodArg::Snn => {
            if a.divisions.is_some() || km_only {
                return Err(usage("scaling and kmedoids flags do not apply to --method snn"));
            }
            let mut cfg = SnnConfig::default();
            if let Some(k) = a.k {
                cfg.k = k;
            }
            cfg.mode = if a.shared { SnnMode::Shared } else { SnnMode::Mutual };
            if let Some(p) = a.eps_percentile {
                cfg.eps_percentile = p;
            }
            if let Some(c) = a.core_fraction {
                cfg.core_fraction = c;
            }
            cfg.eps = a.eps;
            cfg.min_pts = a.min_pts;
            cfg.validate()?;
            let axis = match a.axis {
                AxisArg::X => SplitAxis::X,
                AxisArg::Y => SplitAxis::Y,
                AxisArg::Z => SplitAxis::Z,
                AxisArg::Auto => SplitAxis::Auto,
            };
            let n_parts = match (a.parts, a.memory_cap) {
                (Some(p), _) => Some(p),
                (None, Some(cap)) => {
                    if cap == 0 {
                        return Err(usage("--memory-cap must be positive"));
                    }
                    let need = d.nonnull_count() as u64 * snn_bytes_per_point(cfg.k, d.n_attrs());
                    let parts = need.div_ceil(cap).max(1) as usize;
                    Some(parts.min(d.nonnull_count().max(1)))
                }
                (None, None) => None,
            };
            let partition = n_parts.map(|n_parts| PartitionSettings {
                n_parts,
                axis,
                concurrent: a.memory_cap.is_none(),
            });
            Ok(MethodConfig::Snn { config: cfg, partition })
        }
        MethodArg::Scaling => {
            if snn_only || km_only {
                return Err(usage("only --divisions applies to --method scaling"));
            }
            let div = a.divisions.ok_or_else(|| usage("--method scaling requires --divisions"))?;
            Ok(MethodConfig::Scaling(ScalingParams::new(div)))
        }
        MethodArg::Kmedoids => {
            if snn_only || a.divisions.is_some() {
                return Err(usage("snn and scaling flags do not apply to --method kmedoids"));
            }
            let (Some(c), Some(per)) = (a.clusters, a.per_cluster) else {
                return Err(usage("--method kmedoids requires --clusters and --per-cluster"));
            };
            let mut p = KMedoidsParams::new(c, per).with_seed(a.input.synth.seed);
            if let Some(s) = a.sample_size {
                p.sample_size = Some(s);
            }
            if let Some(m) = a.max_swap_iters {
                p.max_swap_iters = m;
            }
            Ok(MethodConfig::KMedoids(p))
        }
    }
}

fn cmd_reduce(a: &ReduceArgs) -> CmdResult {
    let (d, label) = load_input(&a.input)?;
    let config = method_config(a, &d)?;
    let (run, ms) = run_timed(&d, &config)?;
    save_csv(run.reduced.representatives(), run.annotations.as_deref(), &a.out)?;
    let extra = [("input", label), ("seed", a.input.synth.seed.to_string())];
    let text = provenance_text(&run, &extra, Some(ms));
    let side = sidecar_path(&a.out);
    std::fs::write(&side, text).map_err(|e| io_failure(&side, e))?;
    let n = run.reduced.provenance().nonnull_count;
    println!(
        "representatives={} nonnull={} ratio={:?}",
        run.reduced.len(),
        n,
        run.reduced.len() as f64 / n as f64
    );
    Ok(())
}

fn eval_one(d: &Dataset, nonnull: usize, path: &Path, sentinel: f64) -> Result<EvalRecord, String> {
    let (reps, _) = load_annotated_csv(path, sentinel).map_err(|e| e.to_string())?;
    let side_path = sidecar_path(path);
    let side = if side_path.exists() {
        Some(Sidecar::read(&side_path).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let reps = filter_null(&reps);
    let cov = coverage_of(d, &reps).map_err(|e| format!("{}: {e}", path.display()))?;
    let get = |k: &str| side.as_ref().and_then(|s| s.get(k));
    let num = |k: &str| -> Result<f64, String> {
        get(k).map_or(Ok(0.0), |v| v.parse().map_err(|_| format!("{}: bad {k} `{v}`", side_path.display())))
    };
    Ok(EvalRecord {
        method: get("method").unwrap_or("unknown").to_string(),
        reduction_ratio: reps.len() as f64 / nonnull as f64,
        coverage_radius: cov.radius,
        mean_nn_error: cov.mean,
        cluster_count: num("cluster_count")? as usize,
        core_fraction: num("core_fraction")?,
        noise_fraction: num("noise_fraction")?,
        runtime_ms: num("runtime_ms")? as u64,
    })
}

fn cmd_eval(a: &EvalArgs) -> CmdResult {
    let (d, _) = load_input(&a.input)?;
    let nonnull = d.nonnull_count();
    if nonnull == 0 {
        return Err(Failure::Data("source dataset has no non-null points".into()));
    }
    let sentinel = a.input.sentinel.unwrap_or(DEFAULT_NULL_SENTINEL);
    let rows: Vec<EvalRow> = a
        .reduced
        .iter()
        .map(|p| EvalRow { input: p.display().to_string(), outcome: eval_one(&d, nonnull, p, sentinel) })
        .collect();
    match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| io_failure(path, e))?;
            write_eval_report(&rows, BufWriter::new(f)).map_err(|e| io_failure(path, e))?;
        }
        None => {
            write_eval_report(&rows, io::stdout().lock()).map_err(|e| io_failure(Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

fn cmd_export(a: &ExportArgs) -> CmdResult {
    let sentinel = a.sentinel.unwrap_or(DEFAULT_NULL_SENTINEL);
    let (d, notes) = load_annotated_csv(&a.input, sentinel)?;
    let format = match a.format {
        FormatArg::Csv => ExportFormat::Csv,
        FormatArg::Ply => ExportFormat::Ply,
        FormatArg::Vtk => ExportFormat::Vtk,
    };
    export(&d, notes.as_deref(), format, &a.out)?;
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "points={} format={format}", d.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_divisions_parse() {
        assert_eq!(parse_dims("48x48x12"), Ok([48, 48, 12]));
        assert_eq!(parse_dims("0x4x4"), Ok([0, 4, 4]));
        assert!(parse_dims("4x4").is_err());
        assert_eq!(parse_divisions("50,50,50"), Ok([50, 50, 50]));
        assert!(parse_divisions("5,a,5").is_err());
    }

    #[test]
    fn failures_map_to_exit_codes() {
        let grid: Failure = snnreduce_core::Error::InvalidGrid("x".into()).into();
        assert_eq!(grid.exit_code(), 1);
        let empty: Failure = snnreduce_core::Error::EmptyGraph.into();
        assert_eq!(empty.exit_code(), 2);
        let slab: Failure = snnreduce_core::Error::Slab { slab: 1, source: Box::new(snnreduce_core::Error::EmptyGraph) }.into();
        assert_eq!(slab.exit_code(), 2);
        let io: Failure = Error::io("f", io::Error::other("gone")).into();
        assert_eq!(io.exit_code(), 2);
        assert_eq!(Failure::Internal("a\nb".into()).line(), "error: internal: a b");
    }

    #[test]
    fn memory_cap_picks_parts() {
        let cli = Cli::try_parse_from([
            "snnreduce", "reduce", "--dims", "20x20x5", "--memory-cap", "100000", "--out", "x.csv",
        ])
        .unwrap();
        let Command::Reduce(a) = cli.command else { panic!() };
        let s = synthetic_spec(&a.input.synth, DEFAULT_NULL_SENTINEL).unwrap();
        let d = generate_synthetic(&s).unwrap();
        let MethodConfig::Snn { partition: Some(p), .. } = method_config(&a, &d).unwrap() else { panic!() };
        // 2000 points * (4*8 + 20*20 + 64) bytes = 992000
        assert_eq!(p.n_parts, 10);
        assert!(!p.concurrent);
    }

    #[test]
    fn method_flags_must_match() {
        let parse = |extra: &[&str]| {
            let mut args = vec!["snnreduce", "reduce", "--dims", "4x4x2", "--out", "x.csv"];
            args.extend_from_slice(extra);
            let Command::Reduce(a) = Cli::try_parse_from(args).unwrap().command else { panic!() };
            let d = generate_synthetic(&synthetic_spec(&a.input.synth, DEFAULT_NULL_SENTINEL).unwrap()).unwrap();
            method_config(&a, &d)
        };
        assert!(matches!(parse(&["--method", "scaling"]), Err(Failure::Usage(_))));
        assert!(matches!(parse(&["--method", "scaling", "--divisions", "2,2,1", "--k", "5"]), Err(Failure::Usage(_))));
        assert!(matches!(parse(&["--method", "kmedoids", "--clusters", "3"]), Err(Failure::Usage(_))));
        assert!(matches!(parse(&["--divisions", "2,2,2"]), Err(Failure::Usage(_))));
        assert!(parse(&["--method", "kmedoids", "--clusters", "3", "--per-cluster", "2"]).is_ok());
    }
}
