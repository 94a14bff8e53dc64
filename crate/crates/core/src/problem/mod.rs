//! Problem definitions: objectives, relaxable constraints, bounds, the
//! aggregated violation function, the six constraint families, and the
//! built-in biobjective catalog.

mod catalog;
mod config;
mod expr;
mod families;

pub use catalog::{builtin_names, builtin_problem, builtin_problem_with_dim};
pub use config::{parse_problem_config, ConfigError};
pub use expr::{Expr, ExprError};
pub use families::{apply_constraint_family, suggested_start};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Scalar black-box function of a point.
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("problem needs at least one objective component")]
    NoObjectives,
    #[error("bound mismatch: lower[{0}] = {1} > upper[{0}] = {2}")]
    BoundOrder(usize, f64, f64),
    #[error("bound vectors must have length {expected}, got {got}")]
    BoundLength { expected: usize, got: usize },
    #[error("constraint family {family} needs n >= 3, got n = {n}")]
    FamilyDimension { family: u8, n: usize },
    #[error("constraint family must be in 1..=6, got {0}")]
    UnknownFamily(u8),
    #[error(
        "family constraints require a bound-constrained base problem (p = 0), base has p = {0}"
    )]
    BaseNotBoundConstrained(usize),
    #[error("unknown problem '{name}'; available: {available}")]
    UnknownName { name: String, available: String },
    #[error("dimension n = {n} is not supported for problem '{name}'")]
    BadDimension { name: String, n: usize },
    #[error("violation exponent must be positive, got {0}")]
    BadExponent(f64),
}

/// Norm used when aggregating positive constraint parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationNorm {
    L1,
    L2,
    Linf,
}

/// How relaxable-constraint values are aggregated into the scalar violation
/// `h(x) = ||max(C(x), 0)||^r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationConfig {
    pub norm: ViolationNorm,
    pub exponent: f64,
}

impl Default for ViolationConfig {
    fn default() -> Self {
        // Squared Euclidean hinge: h = sum(max(0, c_i)^2).
        ViolationConfig {
            norm: ViolationNorm::L2,
            exponent: 2.0,
        }
    }
}

/// Maximum violation admitted into the nondominated list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HMax {
    /// Resolved at run initialization: the largest initial `h` when any
    /// initial point is infeasible, otherwise `max(10, p/2)`.
    Auto,
    Value(f64),
}

impl HMax {
    /// Resolves the threshold given the `h` values of the initial list.
    pub fn resolve(&self, p: usize, initial_h: &[f64]) -> f64 {
        match *self {
            HMax::Value(v) => v,
            HMax::Auto => {
                let worst = initial_h.iter().cloned().fold(0.0_f64, f64::max);
                if worst > 0.0 {
                    worst
                } else {
                    10.0_f64.max(p as f64 / 2.0)
                }
            }
        }
    }
}

/// Aggregated violation of the given constraint values.
///
/// Returns 0 when every entry is nonpositive (and when `values` is empty);
/// non-finite entries propagate to `+inf` so the point is rejected upstream.
pub fn violation(values: &[f64], cfg: &ViolationConfig) -> f64 {
    debug_assert!(cfg.exponent > 0.0);
    if values.iter().any(|v| v.is_nan()) {
        return f64::INFINITY;
    }
    let positive = values.iter().map(|&v| v.max(0.0));
    let norm = match cfg.norm {
        ViolationNorm::L1 => positive.sum::<f64>(),
        ViolationNorm::L2 => positive.map(|v| v * v).sum::<f64>().sqrt(),
        ViolationNorm::Linf => positive.fold(0.0_f64, f64::max),
    };
    if norm == 0.0 {
        0.0
    } else {
        norm.powf(cfg.exponent)
    }
}

/// Outcome class of evaluating a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalStatus {
    /// Inside the bounds with `h <= h_max`; objectives were computed.
    Ok,
    /// Violates a bound of `X`; nothing was computed.
    BarrierX,
    /// `h > h_max`; objectives were skipped.
    AboveHmax,
    /// An objective returned a non-finite value; the point is rejected like a
    /// barrier point, but the objective call still counts toward the budget.
    NanObjective,
}

/// Extended objective data for one evaluated point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub f: Vec<f64>,
    pub h: f64,
    pub status: EvalStatus,
}

impl Evaluation {
    pub fn is_ok(&self) -> bool {
        self.status == EvalStatus::Ok
    }

    /// True when the objective components were actually computed, which is
    /// the unit of the evaluation budget.
    pub fn charged(&self) -> bool {
        matches!(self.status, EvalStatus::Ok | EvalStatus::NanObjective)
    }
}

/// An optimization problem: `min F(x) = (f_1(x), ..., f_m(x))` subject to
/// relaxable constraints `C(x) <= 0` and bounds defining the unrelaxable set
/// `X`. Immutable after construction; evaluation is pure and reentrant.
#[derive(Clone)]
pub struct Problem {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objectives: Vec<ScalarFn>,
    constraints: Vec<ScalarFn>,
    violation_cfg: ViolationConfig,
    h_max: HMax,
    /// Conventional starting point, when the problem carries one (constraint
    /// families define it; catalog problems do not).
    default_start: Option<Vec<f64>>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("m", &self.m())
            .field("p", &self.p())
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("h_max", &self.h_max)
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        objectives: Vec<ScalarFn>,
        constraints: Vec<ScalarFn>,
    ) -> Result<Self, ProblemError> {
        if lower.is_empty() {
            return Err(ProblemError::EmptyDimension);
        }
        if upper.len() != lower.len() {
            return Err(ProblemError::BoundLength {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if objectives.is_empty() {
            return Err(ProblemError::NoObjectives);
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if l > u {
                return Err(ProblemError::BoundOrder(i, l, u));
            }
        }
        Ok(Problem {
            name: name.into(),
            lower,
            upper,
            objectives,
            constraints,
            violation_cfg: ViolationConfig::default(),
            h_max: HMax::Auto,
            default_start: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.lower.len()
    }

    /// Number of objective components.
    pub fn m(&self) -> usize {
        self.objectives.len()
    }

    /// Number of relaxable constraints.
    pub fn p(&self) -> usize {
        self.constraints.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn violation_cfg(&self) -> &ViolationConfig {
        &self.violation_cfg
    }

    pub fn h_max(&self) -> HMax {
        self.h_max
    }

    pub fn default_start(&self) -> Option<&[f64]> {
        self.default_start.as_deref()
    }

    pub fn with_violation_cfg(mut self, cfg: ViolationConfig) -> Self {
        self.violation_cfg = cfg;
        self
    }

    pub fn with_h_max(mut self, h_max: HMax) -> Self {
        self.h_max = h_max;
        self
    }

    pub fn with_default_start(mut self, start: Vec<f64>) -> Self {
        assert_eq!(start.len(), self.n());
        self.default_start = Some(start);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn in_bounds(&self, x: &[f64]) -> bool {
        x.len() == self.n()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&xi, (&l, &u))| xi >= l && xi <= u)
    }

    /// Clamps a point to the bound box, componentwise.
    pub fn project(&self, x: &mut [f64]) {
        for ((xi, &l), &u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *xi = xi.clamp(l, u);
        }
    }

    pub fn constraint_values(&self, x: &[f64]) -> Vec<f64> {
        self.constraints.iter().map(|c| c(x)).collect()
    }

    /// Aggregated violation at `x` (does not check bounds).
    pub fn violation_at(&self, x: &[f64]) -> f64 {
        violation(&self.constraint_values(x), &self.violation_cfg)
    }

    pub fn objective_values(&self, x: &[f64]) -> Vec<f64> {
        self.objectives.iter().map(|f| f(x)).collect()
    }

    /// Evaluates the extended objective at `x` under the barrier and the
    /// violation threshold.
    ///
    /// Bounds are checked first; outside `X` nothing is computed. Otherwise
    /// `h` is computed, and only when `h <= h_max` are the objective
    /// components evaluated.
    pub fn evaluate(&self, x: &[f64], h_max: f64) -> Evaluation {
        if !self.in_bounds(x) {
            return Evaluation {
                f: Vec::new(),
                h: f64::INFINITY,
                status: EvalStatus::BarrierX,
            };
        }
        let h = self.violation_at(x);
        if h > h_max || h.is_nan() {
            return Evaluation {
                f: Vec::new(),
                h,
                status: EvalStatus::AboveHmax,
            };
        }
        let f = self.objective_values(x);
        if f.iter().any(|v| !v.is_finite()) {
            return Evaluation {
                f,
                h,
                status: EvalStatus::NanObjective,
            };
        }
        Evaluation {
            f,
            h,
            status: EvalStatus::Ok,
        }
    }
}
