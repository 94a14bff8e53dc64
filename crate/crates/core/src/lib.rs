//! Direct multisearch for constrained multiobjective derivative-free
//! optimization.
//!
//! The solver maintains a list of mutually nondominated points over an
//! extended objective vector `(f_1, ..., f_m, h)`, where `h` aggregates the
//! violation of the relaxable constraints. Infeasible iterates trigger an
//! inexact feasibility-restoration step before polling; bound constraints are
//! handled with an extreme barrier. A classic extreme-barrier variant (only
//! feasible points are ever compared) is included as a baseline, together
//! with a biobjective test-problem catalog, six nonlinear constraint
//! families, and the purity / hypervolume / spread metrics plus performance
//! profiles used to compare solver fronts.
//!
//! Entry points:
//! - [`solver::run_dms_filter_ir`] and [`solver::run_extreme_barrier`]
//! - [`problem::builtin_problem`] and [`problem::parse_problem_config`]
//! - [`metrics`] for front assessment and performance profiles

pub mod archive;
pub mod directions;
pub mod metrics;
pub mod problem;
pub mod restoration;
pub mod solver;

pub use archive::{Archive, ArchiveEntry, Forcing};
pub use directions::{DirectionKind, PositiveSpanningSet, StepOutcome, StepRule};
pub use problem::{EvalStatus, Evaluation, Problem, ViolationConfig, ViolationNorm};
pub use restoration::{RestorationConfig, RestorationOutcome};
pub use solver::{RunConfig, RunResult, StopReason};
