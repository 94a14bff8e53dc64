//! The `metrics` and `profile` subcommands: per-problem reference fronts,
//! metric tables (lower is better, purity and hypervolume inverted), and
//! Dolan-More performance profiles.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use dmsfir::metrics::{
    delta_metric, gamma_metric, hypervolume2, performance_profiles, purity, reference_front,
    Extremes, Front, MetricCell, MetricKind, MetricTable,
};

use crate::run_io::fmt_f64;
use crate::{output_root, CmdError, MetricsArgs, ProfileArgs};

fn parse_metric_list(list: &str) -> Result<Vec<MetricKind>, CmdError> {
    let kinds: Result<Vec<MetricKind>, CmdError> = list
        .split(',')
        .map(|name| {
            MetricKind::parse(name)
                .ok_or_else(|| CmdError::config(format!("unknown metric '{name}'")))
        })
        .collect();
    let kinds = kinds?;
    if kinds.is_empty() {
        return Err(CmdError::config("empty metric list"));
    }
    Ok(kinds)
}

/// Fronts discovered in a benchmark directory, `problem -> solver -> front`.
type FrontMap = BTreeMap<String, BTreeMap<String, Front>>;

fn scan_benchmark_dir(root: &Path, feas_tol: f64) -> Result<FrontMap, CmdError> {
    let mut fronts: FrontMap = BTreeMap::new();
    let mut solver_dirs: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|e| CmdError::config(format!("cannot read '{}': {e}", root.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    solver_dirs.sort();
    for solver_dir in solver_dirs {
        let solver = solver_dir
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .to_string();
        let mut problem_dirs: Vec<PathBuf> = std::fs::read_dir(&solver_dir)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.join("front.csv").is_file())
            .collect();
        problem_dirs.sort();
        for problem_dir in problem_dirs {
            let problem = problem_dir
                .file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .to_string();
            let text = std::fs::read_to_string(problem_dir.join("front.csv"))?;
            let points = dmsfir::metrics::parse_front_csv(&text, feas_tol).map_err(|e| {
                CmdError::config(format!("{}: {e}", problem_dir.join("front.csv").display()))
            })?;
            fronts
                .entry(problem.clone())
                .or_default()
                .insert(solver.clone(), Front::new(points, solver.clone(), problem));
        }
    }
    if fronts.is_empty() {
        return Err(CmdError::config(format!(
            "no fronts found under '{}' (expected <solver>/<problem>/front.csv)",
            root.display()
        )));
    }
    Ok(fronts)
}

struct ProblemContext {
    reference: Front,
    extremes: Extremes,
    hv_ref_point: Vec<f64>,
}

/// Reference front with its extremes (the Gamma/Delta anchors), and a
/// hypervolume reference point dominated by every point of every front: the
/// componentwise worst over the union of the fronts (dominated points
/// included) plus a one-percent span margin.
fn problem_context(fronts: &BTreeMap<String, Front>) -> Result<ProblemContext, String> {
    let nonempty: Vec<&Front> = fronts.values().filter(|f| !f.is_empty()).collect();
    if nonempty.is_empty() {
        return Err("no solver produced a feasible point".into());
    }
    let (reference, extremes) = reference_front(&nonempty).map_err(|e| e.to_string())?;
    let m = reference.m().expect("reference front is nonempty");
    let mut union_best = vec![f64::INFINITY; m];
    let mut union_worst = vec![f64::NEG_INFINITY; m];
    for front in &nonempty {
        for point in &front.points {
            for j in 0..m {
                union_best[j] = union_best[j].min(point[j]);
                union_worst[j] = union_worst[j].max(point[j]);
            }
        }
    }
    let hv_ref_point = union_best
        .iter()
        .zip(&union_worst)
        .map(|(&b, &w)| {
            let span = w - b;
            let margin = if span > 0.0 {
                0.01 * span
            } else {
                0.01 * w.abs().max(1.0)
            };
            w + margin
        })
        .collect();
    Ok(ProblemContext {
        reference,
        extremes,
        hv_ref_point,
    })
}

fn metric_value(kind: MetricKind, front: &Front, ctx: &ProblemContext) -> Result<f64, CmdError> {
    let invert = |v: f64| if v > 0.0 { 1.0 / v } else { f64::INFINITY };
    let t = match kind {
        MetricKind::Purity => match purity(front, &ctx.reference, 0.0) {
            Some(p) => invert(p),
            None => f64::INFINITY,
        },
        MetricKind::Hypervolume => {
            if front.is_empty() {
                f64::INFINITY
            } else {
                let hv = hypervolume2(&front.points, &ctx.hv_ref_point)
                    .map_err(|e| CmdError::config(e.to_string()))?;
                invert(hv)
            }
        }
        MetricKind::Gamma => {
            if front.is_empty() {
                f64::INFINITY
            } else {
                gamma_metric(front, &ctx.extremes)
            }
        }
        MetricKind::Delta => {
            if front.is_empty() {
                f64::INFINITY
            } else {
                delta_metric(front, &ctx.extremes)
            }
        }
    };
    Ok(t)
}

struct Computed {
    tables: Vec<MetricTable>,
    hv_reference: Vec<(String, Vec<f64>)>,
    warnings: Vec<String>,
}

fn compute_tables(
    bench_dir: &Path,
    kinds: &[MetricKind],
    feas_tol: f64,
) -> Result<Computed, CmdError> {
    let fronts = scan_benchmark_dir(bench_dir, feas_tol)?;
    let mut warnings = Vec::new();
    let mut contexts: BTreeMap<String, ProblemContext> = BTreeMap::new();
    for (problem, solvers) in &fronts {
        match problem_context(solvers) {
            Ok(ctx) => {
                contexts.insert(problem.clone(), ctx);
            }
            Err(why) => warnings.push(format!("problem '{problem}' dropped: {why}")),
        }
    }
    if contexts.is_empty() {
        return Err(CmdError::config(
            "every problem was dropped; nothing to score",
        ));
    }

    let mut tables = Vec::new();
    for &kind in kinds {
        let mut cells = Vec::new();
        for (problem, ctx) in &contexts {
            for (solver, front) in &fronts[problem] {
                cells.push(MetricCell {
                    problem: problem.clone(),
                    solver: solver.clone(),
                    value: metric_value(kind, front, ctx)?,
                });
            }
        }
        tables.push(MetricTable {
            metric: kind,
            cells,
        });
    }
    let hv_reference = contexts
        .into_iter()
        .map(|(problem, ctx)| (problem, ctx.hv_ref_point))
        .collect();
    Ok(Computed {
        tables,
        hv_reference,
        warnings,
    })
}

fn tables_csv(tables: &[MetricTable]) -> String {
    let mut out = String::from("problem,solver,metric,value\n");
    for table in tables {
        for cell in &table.cells {
            out.push_str(&format!(
                "{},{},{},{}\n",
                cell.problem,
                cell.solver,
                table.metric.name(),
                fmt_f64(cell.value)
            ));
        }
    }
    out
}

fn parse_tables_csv(text: &str) -> Result<Vec<MetricTable>, CmdError> {
    let mut by_kind: BTreeMap<&'static str, Vec<MetricCell>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CmdError::config(format!(
                "metrics csv line {}: expected 4 fields",
                i + 1
            )));
        }
        let kind = MetricKind::parse(fields[2])
            .ok_or_else(|| CmdError::config(format!("metrics csv line {}: bad metric", i + 1)))?;
        let value: f64 = fields[3]
            .trim()
            .parse()
            .map_err(|_| CmdError::config(format!("metrics csv line {}: bad value", i + 1)))?;
        by_kind.entry(kind.name()).or_default().push(MetricCell {
            problem: fields[0].trim().to_string(),
            solver: fields[1].trim().to_string(),
            value,
        });
    }
    Ok(by_kind
        .into_iter()
        .map(|(name, cells)| MetricTable {
            metric: MetricKind::parse(name).expect("round-trips"),
            cells,
        })
        .collect())
}

pub fn cmd_metrics(args: &MetricsArgs) -> Result<(), CmdError> {
    let kinds = parse_metric_list(&args.metrics)?;
    let computed = compute_tables(&args.input, &kinds, args.feas_tol)?;
    for w in &computed.warnings {
        eprintln!("warning: {w}");
    }
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| output_root().join("metrics"));
    std::fs::create_dir_all(&out_dir)?;
    std::fs::write(out_dir.join("metrics.csv"), tables_csv(&computed.tables))?;
    if kinds.contains(&MetricKind::Hypervolume) {
        let mut text = String::from("problem,u1,u2\n");
        for (problem, point) in &computed.hv_reference {
            let coords: Vec<String> = point.iter().map(|&v| fmt_f64(v)).collect();
            text.push_str(&format!("{},{}\n", problem, coords.join(",")));
        }
        std::fs::write(out_dir.join("hv_reference.csv"), text)?;
    }
    println!(
        "metrics: {} table rows -> {}",
        computed.tables.iter().map(|t| t.cells.len()).sum::<usize>(),
        out_dir.display()
    );
    Ok(())
}

pub fn cmd_profile(args: &ProfileArgs) -> Result<(), CmdError> {
    let kinds = parse_metric_list(&args.metrics)?;
    let metrics_csv = args.input.join("metrics.csv");
    let tables = if metrics_csv.is_file() {
        let text = std::fs::read_to_string(&metrics_csv)?;
        parse_tables_csv(&text)?
            .into_iter()
            .filter(|t| kinds.contains(&t.metric))
            .collect()
    } else {
        let computed = compute_tables(&args.input, &kinds, args.feas_tol)?;
        for w in &computed.warnings {
            eprintln!("warning: {w}");
        }
        computed.tables
    };
    if tables.is_empty() {
        return Err(CmdError::config(
            "no metric tables available for the requested metrics",
        ));
    }

    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| output_root().join("profiles"));
    std::fs::create_dir_all(&out_dir)?;
    for table in &tables {
        let (profiles, dropped) = performance_profiles(table);
        for problem in &dropped {
            eprintln!(
                "warning: {} profile drops problem '{problem}' (no finite entry)",
                table.metric.name()
            );
        }
        let mut text = String::from("solver,tau,rho\n");
        for profile in &profiles {
            for &(tau, rho) in &profile.points {
                text.push_str(&format!(
                    "{},{},{}\n",
                    profile.solver,
                    fmt_f64(tau),
                    fmt_f64(rho)
                ));
            }
        }
        std::fs::write(
            out_dir.join(format!("profile_{}.csv", table.metric.name())),
            text,
        )?;
    }
    println!(
        "profiles: {} metrics -> {}",
        tables.len(),
        out_dir.display()
    );
    Ok(())
}
