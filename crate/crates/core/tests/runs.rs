//! Library-level run tests: the public API driven the way a downstream
//! user would, plus randomized whole-run invariant checks.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dmsfir::directions::DirectionKind;
use dmsfir::problem::{
    apply_constraint_family, builtin_problem_with_dim, parse_problem_config, Problem, ScalarFn,
};
use dmsfir::solver::{run_dms_filter_ir, run_extreme_barrier, RunConfig, StopReason};

#[test]
fn config_parsed_problem_solves_end_to_end() {
    let problem = parse_problem_config(
        "name = ridge\n\
         n = 3\n\
         lower = -2\n\
         upper = 2\n\
         objective.1 = (x[1] - 1)^2 + sum(i, 2, n, x[i]^2)\n\
         objective.2 = (x[1] + 1)^2 + sum(i, 2, n, x[i]^2)\n\
         constraint.1 = abs(x[2]) - 1.5\n\
         h_max = auto\n",
    )
    .unwrap();
    let mut cfg = RunConfig::new(DirectionKind::Coordinate);
    cfg.max_evals = 1500;
    let result = run_dms_filter_ir(&problem, &cfg).unwrap();
    assert!(result.archive.is_mutually_nondominated());
    let front = result.feasible_front();
    assert!(front.len() > 5, "got {} feasible points", front.len());
    // the efficient set is the segment x1 in [-1, 1], x2 = x3 = 0
    for entry in &front {
        assert!(entry.eval.h < 1e-5);
        assert!(problem.in_bounds(&entry.x));
    }
    let best_f1 = front
        .iter()
        .map(|e| e.eval.f[0])
        .fold(f64::INFINITY, f64::min);
    assert!(best_f1 < 0.05, "front should approach f1 = 0, got {best_f1}");
}

fn random_problem(rng: &mut ChaCha8Rng) -> Problem {
    let n = rng.random_range(2..=4);
    let base = builtin_problem_with_dim("MOP2", Some(n)).unwrap();
    let family = rng.random_range(0..=6);
    if family == 0 || n < 3 {
        base
    } else {
        apply_constraint_family(&base, family).unwrap()
    }
}

#[test]
fn randomized_runs_keep_whole_run_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    for case in 0..25 {
        let problem = random_problem(&mut rng);
        let halton = rng.random_bool(0.4);
        let mut cfg = RunConfig::new(if halton {
            DirectionKind::HaltonDense
        } else {
            DirectionKind::Coordinate
        });
        cfg.max_evals = rng.random_range(20..400);
        cfg.seed = rng.random_range(0..50);
        let result = run_dms_filter_ir(&problem, &cfg)
            .unwrap_or_else(|e| panic!("case {case} failed: {e}"));
        assert!(result.evals <= cfg.max_evals, "case {case} overspent");
        assert!(
            result.archive.is_mutually_nondominated(),
            "case {case} violated nondominance"
        );
        assert!(!result.archive.is_empty());
        assert!(matches!(result.stop, StopReason::Budget | StopReason::MinAlpha));
        // feasible front is a subset of the archive with h under tolerance
        for entry in result.feasible_front() {
            assert!(entry.eval.h < cfg.feas_tol);
            assert!(result.archive.entries().iter().any(|e| e.id == entry.id));
        }
        // stored entries always respect the threshold and the bounds
        for entry in result.archive.entries() {
            assert!(entry.eval.h <= result.h_max);
            assert!(problem.in_bounds(&entry.x));
            assert!(entry.alpha > 0.0);
        }
        // the trace is consistent: evals nondecreasing, sizes positive
        for pair in result.log.windows(2) {
            assert!(pair[0].evals <= pair[1].evals);
            assert!(pair[1].archive_size >= 1);
        }
    }
}

#[test]
fn extreme_barrier_runs_match_their_own_reruns() {
    let base = builtin_problem_with_dim("MOP2", Some(3)).unwrap();
    let problem = apply_constraint_family(&base, 4).unwrap();
    let mut cfg = RunConfig::new(DirectionKind::Coordinate);
    cfg.max_evals = 350;
    let a = run_extreme_barrier(&problem, &cfg).unwrap();
    let b = run_extreme_barrier(&problem, &cfg).unwrap();
    assert_eq!(a.log_csv(), b.log_csv());
    assert!(a.archive.entries().iter().all(|e| e.eval.h <= cfg.feas_tol));
}

#[test]
fn problems_are_shareable_across_threads() {
    // evaluation is pure and the problem immutable: concurrent runs on one
    // shared instance must agree with a serial run
    let base = builtin_problem_with_dim("Kursawe", Some(3)).unwrap();
    let problem = Arc::new(apply_constraint_family(&base, 6).unwrap());
    let mut cfg = RunConfig::new(DirectionKind::Coordinate);
    cfg.max_evals = 200;
    let serial = run_dms_filter_ir(&problem, &cfg).unwrap();
    let mut handles = Vec::new();
    for _ in 0..4 {
        let problem = Arc::clone(&problem);
        let cfg = cfg.clone();
        handles.push(std::thread::spawn(move || {
            run_dms_filter_ir(&problem, &cfg).unwrap().log_csv()
        }));
    }
    for handle in handles {
        assert_eq!(handle.join().unwrap(), serial.log_csv());
    }
}

#[test]
fn instrumented_objectives_never_fire_outside_the_budget() {
    use std::sync::atomic::{AtomicU64, Ordering};
    let calls = Arc::new(AtomicU64::new(0));
    let (c1, c2) = (calls.clone(), calls.clone());
    let problem = Problem::new(
        "counted",
        vec![0.0; 3],
        vec![1.0; 3],
        vec![
            Arc::new(move |x: &[f64]| {
                c1.fetch_add(1, Ordering::Relaxed);
                x[0]
            }) as ScalarFn,
            Arc::new(move |x: &[f64]| {
                c2.fetch_add(1, Ordering::Relaxed);
                1.0 - x[0] + x[1] + x[2]
            }) as ScalarFn,
        ],
        vec![Arc::new(|x: &[f64]| 0.5 - x[0] - x[1]) as ScalarFn],
    )
    .unwrap();
    let mut cfg = RunConfig::new(DirectionKind::Coordinate);
    cfg.max_evals = 123;
    let result = run_dms_filter_ir(&problem, &cfg).unwrap();
    // one unit of budget per point at which the objectives were computed
    assert!(result.evals <= 123);
    assert_eq!(calls.load(Ordering::Relaxed), 2 * result.evals);
}
