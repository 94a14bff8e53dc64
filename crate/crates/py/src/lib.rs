//! Python bindings: problems (catalog, config text, constraint families),
//! both solver runs, and the front metrics.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use dmsfir::archive::{filter_front, Forcing};
use dmsfir::directions::DirectionKind;
use dmsfir::metrics::{
    delta_metric, gamma_metric, hypervolume2, performance_profiles, purity, reference_front,
    Extremes, Front, MetricCell, MetricKind, MetricTable,
};
use dmsfir::problem::{
    apply_constraint_family, builtin_names, builtin_problem_with_dim, parse_problem_config,
    suggested_start, HMax, Problem as CoreProblem, ViolationConfig, ViolationNorm,
};
use dmsfir::restoration::{restore, RestorationConfig};
use dmsfir::solver::{run_dms_filter_ir, run_extreme_barrier, RunConfig, RunResult};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An immutable optimization problem.
#[pyclass(name = "Problem", frozen)]
struct PyProblem {
    inner: CoreProblem,
}

#[pymethods]
impl PyProblem {
    /// Build a catalog problem, optionally overriding the dimension.
    #[staticmethod]
    #[pyo3(signature = (name, dim=None))]
    fn builtin(name: &str, dim: Option<usize>) -> PyResult<Self> {
        builtin_problem_with_dim(name, dim)
            .map(|inner| PyProblem { inner })
            .map_err(|e| PyKeyError::new_err(e.to_string()))
    }

    /// Parse a problem from config-file text.
    #[staticmethod]
    fn from_config(text: &str) -> PyResult<Self> {
        parse_problem_config(text)
            .map(|inner| PyProblem { inner })
            .map_err(value_err)
    }

    /// Names available to `builtin`.
    #[staticmethod]
    fn catalog() -> Vec<&'static str> {
        builtin_names()
    }

    /// A copy with constraint family 1..6 appended.
    fn apply_family(&self, family: u8) -> PyResult<Self> {
        apply_constraint_family(&self.inner, family)
            .map(|inner| PyProblem { inner })
            .map_err(value_err)
    }

    /// A copy with an explicit violation threshold.
    fn with_h_max(&self, h_max: f64) -> PyResult<Self> {
        if h_max <= 0.0 || h_max.is_nan() {
            return Err(value_err("h_max must be positive"));
        }
        Ok(PyProblem {
            inner: self.inner.clone().with_h_max(HMax::Value(h_max)),
        })
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn lower(&self) -> Vec<f64> {
        self.inner.lower().to_vec()
    }

    #[getter]
    fn upper(&self) -> Vec<f64> {
        self.inner.upper().to_vec()
    }

    #[getter]
    fn default_start(&self) -> Option<Vec<f64>> {
        self.inner.default_start().map(|s| s.to_vec())
    }

    fn objectives(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        if x.len() != self.inner.n() {
            return Err(value_err("wrong point dimension"));
        }
        Ok(self.inner.objective_values(&x))
    }

    fn violation(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.n() {
            return Err(value_err("wrong point dimension"));
        }
        Ok(self.inner.violation_at(&x))
    }

    /// Extended evaluation under the barrier and a violation threshold:
    /// returns `(f, h, status)` with status in
    /// {"ok", "barrier", "above_hmax", "nan"}.
    #[pyo3(signature = (x, h_max=f64::INFINITY))]
    fn evaluate(&self, x: Vec<f64>, h_max: f64) -> PyResult<(Vec<f64>, f64, &'static str)> {
        if x.len() != self.inner.n() {
            return Err(value_err("wrong point dimension"));
        }
        let eval = self.inner.evaluate(&x, h_max);
        let status = match eval.status {
            dmsfir::problem::EvalStatus::Ok => "ok",
            dmsfir::problem::EvalStatus::BarrierX => "barrier",
            dmsfir::problem::EvalStatus::AboveHmax => "above_hmax",
            dmsfir::problem::EvalStatus::NanObjective => "nan",
        };
        Ok((eval.f, eval.h, status))
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(name='{}', n={}, m={}, p={})",
            self.inner.name(),
            self.inner.n(),
            self.inner.m(),
            self.inner.p()
        )
    }
}

/// Result of one solver run.
#[pyclass(name = "RunResult", frozen)]
struct PyRunResult {
    inner: RunResult,
}

#[pymethods]
impl PyRunResult {
    #[getter]
    fn evals(&self) -> u64 {
        self.inner.evals
    }

    #[getter]
    fn h_evals(&self) -> u64 {
        self.inner.h_evals
    }

    #[getter]
    fn stop_reason(&self) -> String {
        self.inner.stop.to_string()
    }

    #[getter]
    fn h_max(&self) -> f64 {
        self.inner.h_max
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.log.len()
    }

    /// All stored entries as `(x, f, h, alpha)` tuples.
    fn archive(&self) -> Vec<(Vec<f64>, Vec<f64>, f64, f64)> {
        self.inner
            .archive
            .entries()
            .iter()
            .map(|e| (e.x.clone(), e.eval.f.clone(), e.eval.h, e.alpha))
            .collect()
    }

    /// Entries with `h` below the feasibility tolerance, the Pareto-front
    /// approximation.
    fn feasible_front(&self) -> Vec<(Vec<f64>, Vec<f64>, f64, f64)> {
        self.inner
            .feasible_front()
            .into_iter()
            .map(|e| (e.x.clone(), e.eval.f.clone(), e.eval.h, e.alpha))
            .collect()
    }

    /// The iteration trace in CSV form.
    fn log_csv(&self) -> String {
        self.inner.log_csv()
    }

    fn __repr__(&self) -> String {
        format!(
            "RunResult(evals={}, stop='{}', archive={}, feasible={})",
            self.inner.evals,
            self.inner.stop,
            self.inner.archive.len(),
            self.inner.feasible_front().len()
        )
    }
}

fn build_config(
    budget: u64,
    min_step: f64,
    directions: &str,
    forcing: Option<&str>,
    seed: u64,
    feas_tol: f64,
    start: Option<Vec<Vec<f64>>>,
) -> PyResult<RunConfig> {
    let kind = match directions {
        "coordinate" => DirectionKind::Coordinate,
        "halton" => DirectionKind::HaltonDense,
        other => return Err(value_err(format!("unknown directions '{other}'"))),
    };
    let mut cfg = RunConfig::new(kind);
    if let Some(name) = forcing {
        cfg.forcing = match name {
            "zero" => Forcing::Zero,
            "power" => Forcing::power_default(),
            other => return Err(value_err(format!("unknown forcing '{other}'"))),
        };
        cfg.step_rule.lattice = cfg.forcing == Forcing::Zero;
        cfg.restoration.round_to_mesh = cfg.forcing == Forcing::Zero;
    }
    cfg.max_evals = budget;
    cfg.min_alpha = min_step;
    cfg.seed = seed;
    cfg.feas_tol = feas_tol;
    cfg.initial_points = start;
    cfg.validate().map_err(value_err)?;
    Ok(cfg)
}

/// Run a solver on a problem. `solver` is "filter-ir" or "eb"; `start` is an
/// optional list of initial points.
#[pyfunction]
#[pyo3(signature = (problem, solver="filter-ir", budget=5000, min_step=1e-3,
                    directions="coordinate", forcing=None, seed=0,
                    feas_tol=1e-5, start=None))]
#[allow(clippy::too_many_arguments)]
fn solve(
    problem: &PyProblem,
    solver: &str,
    budget: u64,
    min_step: f64,
    directions: &str,
    forcing: Option<&str>,
    seed: u64,
    feas_tol: f64,
    start: Option<Vec<Vec<f64>>>,
) -> PyResult<PyRunResult> {
    let cfg = build_config(budget, min_step, directions, forcing, seed, feas_tol, start)?;
    let result = match solver {
        "filter-ir" => run_dms_filter_ir(&problem.inner, &cfg),
        "eb" => run_extreme_barrier(&problem.inner, &cfg),
        other => return Err(value_err(format!("unknown solver '{other}'"))),
    };
    result.map(|inner| PyRunResult { inner }).map_err(value_err)
}

/// Inexact restoration around an infeasible point: returns
/// `(y_star, achieved_h, satisfied, inner_evals)`.
#[pyfunction]
#[pyo3(name = "restore", signature = (problem, x, alpha, inner_budget_per_dim=200))]
fn py_restore(
    problem: &PyProblem,
    x: Vec<f64>,
    alpha: f64,
    inner_budget_per_dim: usize,
) -> PyResult<(Vec<f64>, f64, bool, usize)> {
    let cfg = RestorationConfig {
        inner_budget_per_dim,
        ..RestorationConfig::default()
    };
    restore(&problem.inner, &x, alpha, &cfg)
        .map(|o| (o.y_star, o.achieved_h, o.satisfied, o.inner_evals))
        .map_err(value_err)
}

/// Aggregated constraint violation `||max(values, 0)||^r`.
#[pyfunction]
#[pyo3(name = "violation", signature = (values, norm="l2", exponent=2.0))]
fn py_violation(values: Vec<f64>, norm: &str, exponent: f64) -> PyResult<f64> {
    let norm = match norm.to_ascii_lowercase().as_str() {
        "l1" => ViolationNorm::L1,
        "l2" => ViolationNorm::L2,
        "linf" => ViolationNorm::Linf,
        other => return Err(value_err(format!("unknown norm '{other}'"))),
    };
    if exponent <= 0.0 || exponent.is_nan() {
        return Err(value_err("exponent must be positive"));
    }
    Ok(dmsfir::problem::violation(
        &values,
        &ViolationConfig { norm, exponent },
    ))
}

/// Conventional starting point of a constraint family.
#[pyfunction]
#[pyo3(name = "suggested_start")]
fn py_suggested_start(family: u8, n: usize) -> PyResult<Vec<f64>> {
    suggested_start(family, n).map_err(value_err)
}

/// The mutually nondominated subset of a point list, input order preserved.
#[pyfunction]
#[pyo3(name = "filter_front")]
fn py_filter_front(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    filter_front(&points)
}

/// Exact biobjective hypervolume bounded by `ref_point`.
#[pyfunction]
#[pyo3(name = "hypervolume2")]
fn py_hypervolume2(points: Vec<Vec<f64>>, ref_point: Vec<f64>) -> PyResult<f64> {
    hypervolume2(&points, &ref_point).map_err(value_err)
}

fn front_of(points: Vec<Vec<f64>>) -> Front {
    Front::new(points, "py", "py")
}

/// Fraction of `front` surviving in `reference` (componentwise match within
/// `tol`); None for an empty front.
#[pyfunction]
#[pyo3(name = "purity", signature = (front, reference, tol=0.0))]
fn py_purity(front: Vec<Vec<f64>>, reference: Vec<Vec<f64>>, tol: f64) -> Option<f64> {
    purity(&front_of(front), &front_of(reference), tol)
}

/// Largest front gap per component against `(best, worst)` extremes.
#[pyfunction]
#[pyo3(name = "gamma_metric")]
fn py_gamma(front: Vec<Vec<f64>>, best: Vec<f64>, worst: Vec<f64>) -> PyResult<f64> {
    let front = front_of(front);
    if front.is_empty() {
        return Err(value_err("gamma of an empty front is undefined"));
    }
    Ok(gamma_metric(&front, &Extremes { best, worst }))
}

/// Gap-evenness metric against `(best, worst)` extremes.
#[pyfunction]
#[pyo3(name = "delta_metric")]
fn py_delta(front: Vec<Vec<f64>>, best: Vec<f64>, worst: Vec<f64>) -> PyResult<f64> {
    let front = front_of(front);
    if front.is_empty() {
        return Err(value_err("delta of an empty front is undefined"));
    }
    Ok(delta_metric(&front, &Extremes { best, worst }))
}

/// Points plus their componentwise extremes.
type FrontSummary = (Vec<Vec<f64>>, Vec<f64>, Vec<f64>);

/// Nondominated union of several fronts: returns `(points, best, worst)`.
#[pyfunction]
#[pyo3(name = "reference_front")]
fn py_reference_front(fronts: Vec<Vec<Vec<f64>>>) -> PyResult<FrontSummary> {
    let fronts: Vec<Front> = fronts.into_iter().map(front_of).collect();
    let refs: Vec<&Front> = fronts.iter().collect();
    reference_front(&refs)
        .map(|(front, extremes)| (front.points, extremes.best, extremes.worst))
        .map_err(value_err)
}

/// Per-solver profile curves keyed by solver name.
type ProfileMap = std::collections::BTreeMap<String, Vec<(f64, f64)>>;

/// Dolan-More profiles of `(problem, solver, value)` cells with lower
/// values better and `inf` marking failures. Returns
/// `{solver: [(tau, rho), ...]}` plus the list of dropped problems.
#[pyfunction]
#[pyo3(name = "performance_profiles")]
fn py_profiles(cells: Vec<(String, String, f64)>) -> (ProfileMap, Vec<String>) {
    let table = MetricTable {
        metric: MetricKind::Gamma,
        cells: cells
            .into_iter()
            .map(|(problem, solver, value)| MetricCell {
                problem,
                solver,
                value,
            })
            .collect(),
    };
    let (profiles, dropped) = performance_profiles(&table);
    (
        profiles.into_iter().map(|p| (p.solver, p.points)).collect(),
        dropped,
    )
}

#[pymodule]
fn dmsfir_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(py_restore, m)?)?;
    m.add_function(wrap_pyfunction!(py_violation, m)?)?;
    m.add_function(wrap_pyfunction!(py_suggested_start, m)?)?;
    m.add_function(wrap_pyfunction!(py_filter_front, m)?)?;
    m.add_function(wrap_pyfunction!(py_hypervolume2, m)?)?;
    m.add_function(wrap_pyfunction!(py_purity, m)?)?;
    m.add_function(wrap_pyfunction!(py_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(py_delta, m)?)?;
    m.add_function(wrap_pyfunction!(py_reference_front, m)?)?;
    m.add_function(wrap_pyfunction!(py_profiles, m)?)?;
    Ok(())
}
