//! The `solve` subcommand: one solver, one problem, outputs on disk.

use std::path::PathBuf;
use std::time::Instant;

use dmsfir::archive::Forcing;
use dmsfir::directions::DirectionKind;
use dmsfir::problem::Problem;
use dmsfir::solver::{run_dms_filter_ir, run_extreme_barrier, RunConfig, RunError, RunResult};

use crate::problem_ref::resolve_problem;
use crate::run_io::{write_run_outputs, RunMeta};
use crate::{output_root, CmdError, DirectionsChoice, ForcingChoice, SolveArgs, SolverChoice};

pub fn build_run_config(
    directions: DirectionsChoice,
    forcing: Option<ForcingChoice>,
    budget: u64,
    min_step: f64,
    feas_tol: f64,
    seed: u64,
) -> Result<RunConfig, CmdError> {
    let kind = match directions {
        DirectionsChoice::Coordinate => DirectionKind::Coordinate,
        DirectionsChoice::Halton => DirectionKind::HaltonDense,
    };
    let mut cfg = RunConfig::new(kind);
    if let Some(choice) = forcing {
        cfg.forcing = match choice {
            ForcingChoice::Zero => Forcing::Zero,
            ForcingChoice::Power => Forcing::power_default(),
        };
        cfg.step_rule.lattice = cfg.forcing == Forcing::Zero;
        cfg.restoration.round_to_mesh = cfg.forcing == Forcing::Zero;
    }
    cfg.max_evals = budget;
    cfg.min_alpha = min_step;
    cfg.feas_tol = feas_tol;
    cfg.seed = seed;
    cfg.validate()
        .map_err(|e| CmdError::config(e.to_string()))?;
    Ok(cfg)
}

/// Maps solver-level errors to exit codes: invalid configuration is 2,
/// initialization failures are 3.
pub fn run_solver(
    solver: SolverChoice,
    problem: &Problem,
    cfg: &RunConfig,
) -> Result<RunResult, CmdError> {
    let run = match solver {
        SolverChoice::FilterIr => run_dms_filter_ir(problem, cfg),
        SolverChoice::Eb => run_extreme_barrier(problem, cfg),
    };
    run.map_err(|e| match e {
        RunError::StepRule(_)
        | RunError::DenseNeedsForcing
        | RunError::EtaBallTooSmall { .. }
        | RunError::NotPositive { .. } => CmdError::config(e.to_string()),
        RunError::NonFiniteBounds
        | RunError::NoInitialInBounds
        | RunError::NoInitialBelowHmax { .. }
        | RunError::NoFeasibleStart { .. }
        | RunError::InitialPointDimension { .. } => CmdError::init(e.to_string()),
    })
}

fn parse_start(text: &str, n: usize) -> Result<Vec<Vec<f64>>, CmdError> {
    let coords: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let coords = coords.map_err(|_| CmdError::config(format!("invalid --start '{text}'")))?;
    if coords.len() != n {
        return Err(CmdError::config(format!(
            "--start has {} coordinates, problem dimension is {n}",
            coords.len()
        )));
    }
    Ok(vec![coords])
}

pub fn cmd_solve(args: &SolveArgs) -> Result<(), CmdError> {
    let (problem, problem_id) = resolve_problem(&args.problem, args.dim, args.family, &args.h_max)?;
    let mut cfg = build_run_config(
        args.directions,
        args.forcing,
        args.budget,
        args.min_step,
        args.feas_tol,
        args.seed,
    )?;
    if let Some(start) = &args.start {
        cfg.initial_points = Some(parse_start(start, problem.n())?);
    }

    let started = Instant::now();
    let result = run_solver(args.solver, &problem, &cfg)?;
    let wall_time = started.elapsed();

    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| output_root().join(format!("{problem_id}_{}", args.solver.name())));
    let meta = RunMeta {
        problem_id: &problem_id,
        solver: args.solver.name(),
        budget: args.budget,
        seed: args.seed,
        directions: match args.directions {
            DirectionsChoice::Coordinate => "coordinate",
            DirectionsChoice::Halton => "halton",
        },
        wall_time,
    };
    write_run_outputs(&out_dir, &result, problem.n(), problem.m(), &meta)?;
    println!(
        "{problem_id} [{}]: {} evals, stop {}, archive {} ({} feasible) -> {}",
        args.solver.name(),
        result.evals,
        result.stop,
        result.archive.len(),
        result.feasible_front().len(),
        out_dir.display()
    );
    Ok(())
}

/// Default output directory of a benchmark run.
pub fn bench_run_dir(root: &std::path::Path, solver: &str, problem_id: &str) -> PathBuf {
    root.join(solver).join(problem_id)
}
