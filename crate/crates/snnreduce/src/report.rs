//! Method comparison and report tables.

use std::io::{self, Write};
use std::time::Instant;

use snnreduce_core::{filter_null, reduce, Dataset, Error, MethodConfig, Reduction, ReductionReport, Result};

/// Run a reduction and return it with its wall-clock time in milliseconds.
pub fn run_timed(d: &Dataset, config: &MethodConfig) -> Result<(Reduction, u64)> {
    let start = Instant::now();
    let run = reduce(d, config)?;
    Ok((run, start.elapsed().as_millis() as u64))
}

/// Reduce the non-null points of `d` once per config and score each result.
/// A failing config yields an error row; the others still run.
pub fn compare_methods(d: &Dataset, configs: &[MethodConfig]) -> Result<Vec<Result<ReductionReport>>> {
    if configs.is_empty() {
        return Err(Error::InvalidParameter("no methods to compare".into()));
    }
    let points = filter_null(d);
    Ok(configs
        .iter()
        .map(|c| {
            let (run, ms) = run_timed(&points, c)?;
            ReductionReport::measure(&points, &run, ms)
        })
        .collect())
}

pub fn write_report<W: Write>(reports: &[ReductionReport], mut w: W) -> io::Result<()> {
    writeln!(w, "{}", ReductionReport::HEADER)?;
    for r in reports {
        writeln!(w, "{}", r.csv_row())?;
    }
    w.flush()
}

/// One row of an evaluation table: a report, or the reason there is none.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub input: String,
    pub outcome: std::result::Result<EvalRecord, String>,
}

/// Report fields for a reduced file. `method` is the sidecar's method
/// name, or `unknown` without a sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub method: String,
    pub reduction_ratio: f64,
    pub coverage_radius: f64,
    pub mean_nn_error: f64,
    pub cluster_count: usize,
    pub core_fraction: f64,
    pub noise_fraction: f64,
    pub runtime_ms: u64,
}

pub const EVAL_EXTRA_COLUMNS: &str = "input,error";

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\"").replace('\n', " "))
    } else {
        s.to_string()
    }
}

/// Report header plus `input,error`; error rows leave the metric columns empty.
pub fn write_eval_report<W: Write>(rows: &[EvalRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{},{EVAL_EXTRA_COLUMNS}", ReductionReport::HEADER)?;
    for row in rows {
        match &row.outcome {
            Ok(r) => writeln!(
                w,
                "{},{:?},{:?},{:?},{},{:?},{:?},{},{},",
                quote(&r.method),
                r.reduction_ratio,
                r.coverage_radius,
                r.mean_nn_error,
                r.cluster_count,
                r.core_fraction,
                r.noise_fraction,
                r.runtime_ms,
                quote(&row.input)
            )?,
            Err(e) => writeln!(w, ",,,,,,,,{},{}", quote(&row.input), quote(e))?,
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use snnreduce_core::{GridSpec, KMedoidsParams, Method, ScalingParams};

    fn data() -> Dataset {
        let s = GridSpec::new([6, 5, 2], ["q"]).unwrap();
        Dataset::grid(s, (0..60).map(|i| f64::from((i * 7) % 9)).collect()).unwrap()
    }

    #[test]
    fn rows_follow_config_order_and_errors_stay_local() {
        let configs = vec![
            MethodConfig::Scaling(ScalingParams::new([3, 1, 1])),
            MethodConfig::KMedoids(KMedoidsParams::new(100, 1)),
            MethodConfig::KMedoids(KMedoidsParams::new(4, 2)),
        ];
        let rows = compare_methods(&data(), &configs).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].as_ref().unwrap().method, Method::Scaling);
        assert_eq!(rows[0].as_ref().unwrap().reduction_ratio, 3.0 / 60.0);
        assert!(rows[1].is_err());
        let km = rows[2].as_ref().unwrap();
        assert_eq!(km.cluster_count, 4);
        assert!(km.mean_nn_error <= km.coverage_radius);
    }

    #[test]
    fn empty_config_list_is_an_error() {
        assert!(compare_methods(&data(), &[]).is_err());
    }

    #[test]
    fn eval_table_shape() {
        let rows = vec![
            EvalRow {
                input: "a.csv".into(),
                outcome: Ok(EvalRecord {
                    method: "snn".into(),
                    reduction_ratio: 0.5,
                    coverage_radius: 0.25,
                    mean_nn_error: 0.125,
                    cluster_count: 2,
                    core_fraction: 0.75,
                    noise_fraction: 0.0,
                    runtime_ms: 3,
                }),
            },
            EvalRow { input: "missing.csv".into(), outcome: Err("missing.csv: not found, sorry".into()) },
        ];
        let mut out = Vec::new();
        write_eval_report(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("{},input,error", ReductionReport::HEADER));
        assert_eq!(lines[1], "snn,0.5,0.25,0.125,2,0.75,0.0,3,a.csv,");
        assert_eq!(lines[2], ",,,,,,,,missing.csv,\"missing.csv: not found, sorry\"");
    }
}
