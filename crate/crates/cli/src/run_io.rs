//! Writing run outputs: the feasible front, the iteration log, and the run
//! summary. Floats are serialized with Rust's shortest round-trip formatting
//! so re-ingestion reproduces identical values.

use std::path::Path;
use std::time::Duration;

use dmsfir::solver::RunResult;
use serde_json::json;

use crate::CmdError;

/// Serializes a float so it parses back bit-identically ('.' decimal point).
pub fn fmt_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

/// The feasible front as CSV: coordinates, objectives, violation, step size,
/// sorted by the first objective.
pub fn front_csv(result: &RunResult, n: usize, m: usize) -> String {
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.extend((1..=m).map(|i| format!("f{i}")));
    header.push("h".into());
    header.push("alpha".into());

    let mut rows: Vec<&dmsfir::archive::ArchiveEntry> = result.feasible_front();
    rows.sort_by(|a, b| {
        a.eval
            .f
            .partial_cmp(&b.eval.f)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.id.cmp(&b.id))
    });

    let mut out = header.join(",");
    out.push('\n');
    for entry in rows {
        let fields: Vec<String> = entry
            .x
            .iter()
            .chain(&entry.eval.f)
            .chain(std::iter::once(&entry.eval.h))
            .chain(std::iter::once(&entry.alpha))
            .map(|&v| fmt_f64(v))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub struct RunMeta<'a> {
    pub problem_id: &'a str,
    pub solver: &'a str,
    pub budget: u64,
    pub seed: u64,
    pub directions: &'a str,
    pub wall_time: Duration,
}

pub fn run_summary_json(result: &RunResult, meta: &RunMeta) -> String {
    let value = json!({
        "problem": meta.problem_id,
        "solver": meta.solver,
        "evals": result.evals,
        "h_evals": result.h_evals,
        "nan_rejections": result.nan_rejections,
        "stop_reason": result.stop.to_string(),
        "wall_time_s": meta.wall_time.as_secs_f64(),
        "h_max": fmt_f64(result.h_max),
        "feas_tol": result.feas_tol,
        "archive_size": result.archive.len(),
        "feasible_points": result.feasible_front().len(),
        "iterations": result.log.len(),
        "budget": meta.budget,
        "seed": meta.seed,
        "directions": meta.directions,
    });
    serde_json::to_string_pretty(&value).expect("summary serializes")
}

/// Writes front.csv, log.csv and run.json into `dir`.
pub fn write_run_outputs(
    dir: &Path,
    result: &RunResult,
    n: usize,
    m: usize,
    meta: &RunMeta,
) -> Result<(), CmdError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("front.csv"), front_csv(result, n, m))?;
    std::fs::write(dir.join("log.csv"), result.log_csv())?;
    std::fs::write(dir.join("run.json"), run_summary_json(result, meta))?;
    Ok(())
}
