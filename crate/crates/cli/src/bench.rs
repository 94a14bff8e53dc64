//! The `benchmark` subcommand: the full suite x solver grid, one run per
//! worker thread, with a manifest of what happened.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde_json::json;

use crate::problem_ref::resolve_problem;
use crate::run_io::{write_run_outputs, RunMeta};
use crate::solve::{bench_run_dir, build_run_config, run_solver};
use crate::{output_root, BenchmarkArgs, CmdError, SolverChoice};

#[derive(Debug, Clone)]
struct SuiteRow {
    problem: String,
    family: u8,
}

fn parse_suite(path: &Path) -> Result<(Vec<SuiteRow>, Vec<String>), CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::config(format!("cannot read suite '{}': {e}", path.display())))?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if i == 0 && line.to_ascii_lowercase().replace(' ', "") == "problem,family" {
            continue;
        }
        let mut parts = line.split(',');
        let problem = parts.next().unwrap_or_default().trim().to_string();
        let family = parts
            .next()
            .map(|s| s.trim().parse::<u8>())
            .transpose()
            .ok()
            .flatten()
            .unwrap_or(0);
        if problem.is_empty() || family > 6 {
            warnings.push(format!("suite line {}: skipped '{line}'", i + 1));
            continue;
        }
        rows.push(SuiteRow { problem, family });
    }
    if rows.is_empty() {
        return Err(CmdError::config("suite file has no usable rows"));
    }
    Ok((rows, warnings))
}

fn parse_solvers(list: &str) -> Result<Vec<SolverChoice>, CmdError> {
    list.split(',')
        .map(|s| match s.trim() {
            "filter-ir" => Ok(SolverChoice::FilterIr),
            "eb" => Ok(SolverChoice::Eb),
            other => Err(CmdError::config(format!(
                "unknown solver '{other}' (expected filter-ir or eb)"
            ))),
        })
        .collect()
}

struct TaskResult {
    problem_id: String,
    family: u8,
    solver: &'static str,
    status: Result<PathBuf, String>,
}

pub fn cmd_benchmark(args: &BenchmarkArgs) -> Result<(), CmdError> {
    let (rows, mut warnings) = parse_suite(&args.suite)?;
    let solvers = parse_solvers(&args.solvers)?;
    let out_root = args.out.clone().unwrap_or_else(output_root);
    std::fs::create_dir_all(&out_root)?;

    // resolve problems up front so broken rows are skipped with a warning
    // rather than failing workers mid-flight
    let mut tasks = Vec::new();
    for row in &rows {
        match resolve_problem(&row.problem, None, row.family, "auto") {
            Ok((problem, id)) => {
                for &solver in &solvers {
                    tasks.push((problem.clone(), id.clone(), row.family, solver));
                }
            }
            Err(e) => warnings.push(format!(
                "suite row ({}, {}): skipped: {}",
                row.problem, row.family, e.message
            )),
        }
    }

    let cursor = AtomicUsize::new(0);
    let results: Mutex<Vec<TaskResult>> = Mutex::new(Vec::new());
    let jobs = args.jobs.max(1);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::SeqCst);
                let Some((problem, id, family, solver)) = tasks.get(i) else {
                    break;
                };
                let status = run_one(args, &out_root, problem, id, *solver);
                results.lock().unwrap().push(TaskResult {
                    problem_id: id.clone(),
                    family: *family,
                    solver: solver.name(),
                    status,
                });
            });
        }
    });

    let mut results = results.into_inner().unwrap();
    results.sort_by(|a, b| (&a.problem_id, a.solver).cmp(&(&b.problem_id, b.solver)));
    let ok_count = results.iter().filter(|r| r.status.is_ok()).count();

    let manifest = json!({
        "suite": args.suite.display().to_string(),
        "budget": args.budget,
        "runs": results.iter().map(|r| json!({
            "problem": r.problem_id,
            "family": r.family,
            "solver": r.solver,
            "status": match &r.status { Ok(_) => "ok", Err(_) => "failed" },
            "path": r.status.as_ref().ok().map(|p| p.display().to_string()),
            "error": r.status.as_ref().err().cloned(),
        })).collect::<Vec<_>>(),
        "warnings": warnings,
    });
    std::fs::write(
        out_root.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )?;

    for w in &warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "benchmark: {ok_count}/{} runs completed -> {}",
        results.len(),
        out_root.display()
    );
    if ok_count == 0 {
        return Err(CmdError::io("all benchmark runs failed"));
    }
    Ok(())
}

fn run_one(
    args: &BenchmarkArgs,
    out_root: &Path,
    problem: &dmsfir::problem::Problem,
    problem_id: &str,
    solver: SolverChoice,
) -> Result<PathBuf, String> {
    let cfg = build_run_config(
        args.directions,
        None,
        args.budget,
        1e-3,
        args.feas_tol,
        args.seed,
    )
    .map_err(|e| e.message)?;
    let started = Instant::now();
    let result = run_solver(solver, problem, &cfg).map_err(|e| e.message)?;
    let dir = bench_run_dir(out_root, solver.name(), problem_id);
    let meta = RunMeta {
        problem_id,
        solver: solver.name(),
        budget: args.budget,
        seed: args.seed,
        directions: match args.directions {
            crate::DirectionsChoice::Coordinate => "coordinate",
            crate::DirectionsChoice::Halton => "halton",
        },
        wall_time: started.elapsed(),
    };
    write_run_outputs(&dir, &result, problem.n(), problem.m(), &meta).map_err(|e| e.message)?;
    Ok(dir)
}
