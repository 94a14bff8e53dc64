//! The main optimization loop: iterate selection with feasible/infeasible
//! mode switching, an optional restoration step from infeasible centers,
//! complete polling over a positive spanning set, success classification and
//! step-size updates. The extreme-barrier baseline shares the loop with
//! restoration disabled and violating points barred.

use std::fmt;

use thiserror::Error;

use crate::archive::{Archive, ArchiveEntry, Forcing, MergeOutcome};
use crate::directions::{
    coordinate_set, halton_set, step_update, DirectionError, DirectionKind, PositiveSpanningSet,
    StepOutcome, StepRule,
};
use crate::problem::{EvalStatus, Evaluation, Problem};
use crate::restoration::{restore, RestorationConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    StepRule(#[from] DirectionError),
    #[error("dense directions require sufficient-decrease acceptance; use power forcing with halton directions")]
    DenseNeedsForcing,
    #[error("eta_ball must be at least 1/beta2 = {min}, got {got}")]
    EtaBallTooSmall { min: f64, got: f64 },
    #[error("{what} must be positive")]
    NotPositive { what: &'static str },
    #[error("default initialization needs finite bounds; supply initial points explicitly")]
    NonFiniteBounds,
    #[error("no initial point lies inside the bounds")]
    NoInitialInBounds,
    #[error("no initial point satisfies h <= h_max = {h_max} (best h = {best_h}); consider overriding h_max")]
    NoInitialBelowHmax { h_max: f64, best_h: f64 },
    #[error("the extreme-barrier solver needs a feasible initial point (h <= {feas_tol}); best initial h = {best_h}")]
    NoFeasibleStart { feas_tol: f64, best_h: f64 },
    #[error("initial point {index} has {got} coordinates, problem dimension is {expected}")]
    InitialPointDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
}

/// Which constraint-handling scheme the loop runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Violation as an extra objective component plus restoration.
    FilterIr,
    /// Classic extreme barrier: points violating relaxable constraints are
    /// never evaluated nor compared.
    ExtremeBarrier,
}

/// Runtime configuration. `new(kind)` picks the matching forcing function:
/// plain lattice acceptance for coordinate directions, power forcing for the
/// dense Halton sets.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha0: f64,
    pub step_rule: StepRule,
    pub directions: DirectionKind,
    pub forcing: Forcing,
    pub max_evals: u64,
    /// Stop once every listed step size is below this.
    pub min_alpha: f64,
    /// Reporting-level feasibility tolerance on h.
    pub feas_tol: f64,
    /// Ball-radius factor for picking an infeasible iterate near the last
    /// feasible center; must be at least 1/beta2.
    pub eta_ball: f64,
    /// Shifts the phase of the Halton direction stream; no other effect.
    pub seed: u64,
    /// Explicit initial points; defaults to the bound-segment points for the
    /// filter solver and the problem's default start for the barrier solver.
    pub initial_points: Option<Vec<Vec<f64>>>,
    pub restoration: RestorationConfig,
}

impl RunConfig {
    pub fn new(directions: DirectionKind) -> Self {
        let forcing = match directions {
            DirectionKind::Coordinate => Forcing::Zero,
            DirectionKind::HaltonDense => Forcing::power_default(),
        };
        let step_rule = StepRule {
            lattice: forcing == Forcing::Zero,
            ..StepRule::default()
        };
        RunConfig {
            alpha0: 1.0,
            step_rule,
            directions,
            forcing,
            max_evals: 5000,
            min_alpha: 1e-3,
            feas_tol: 1e-5,
            eta_ball: 2.0,
            seed: 0,
            initial_points: None,
            restoration: RestorationConfig {
                round_to_mesh: forcing == Forcing::Zero,
                ..RestorationConfig::default()
            },
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        self.step_rule.validate()?;
        if self.directions == DirectionKind::HaltonDense && self.forcing == Forcing::Zero {
            return Err(RunError::DenseNeedsForcing);
        }
        let min_eta = 1.0 / self.step_rule.beta2;
        if self.eta_ball < min_eta {
            return Err(RunError::EtaBallTooSmall {
                min: min_eta,
                got: self.eta_ball,
            });
        }
        for (value, what) in [
            (self.alpha0, "alpha0"),
            (self.min_alpha, "min_alpha"),
            (self.feas_tol, "feas_tol"),
        ] {
            if value <= 0.0 || value.is_nan() {
                return Err(RunError::NotPositive { what });
            }
        }
        Ok(())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::new(DirectionKind::Coordinate)
    }
}

/// Which kind of center the next iteration should explore.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterMode {
    Feasible,
    Infeasible,
}

impl fmt::Display for CenterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CenterMode::Feasible => write!(f, "feasible"),
            CenterMode::Infeasible => write!(f, "infeasible"),
        }
    }
}

/// Selection state carried between iterations.
#[derive(Debug, Clone)]
pub struct ModeState {
    pub mode: CenterMode,
    pub last_feasible_center: Option<Vec<f64>>,
    pub last_poll_max_norm: f64,
    pub last_center_alpha: f64,
}

impl Default for ModeState {
    fn default() -> Self {
        ModeState {
            mode: CenterMode::Feasible,
            last_feasible_center: None,
            last_poll_max_norm: 1.0,
            last_center_alpha: 1.0,
        }
    }
}

/// Step that settled an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Restoration,
    Poll,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Restoration => write!(f, "restoration"),
            StepKind::Poll => write!(f, "poll"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Budget,
    MinAlpha,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::Budget => write!(f, "Budget"),
            StopReason::MinAlpha => write!(f, "MinAlpha"),
        }
    }
}

/// One line of the iteration trace.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: u64,
    pub mode: CenterMode,
    pub step: StepKind,
    pub success: bool,
    pub alpha: f64,
    /// Cumulative objective evaluations at iteration end.
    pub evals: u64,
    pub archive_size: usize,
    /// Entries with h below the feasibility tolerance at iteration end.
    pub n_feasible: usize,
}

impl IterationRecord {
    pub const CSV_HEADER: &'static str =
        "iter,mode,step,success,alpha,evals,archive_size,n_feasible";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.iter,
            self.mode,
            self.step,
            self.success,
            self.alpha,
            self.evals,
            self.archive_size,
            self.n_feasible
        )
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub archive: Archive,
    /// Objective evaluations (the budgeted count).
    pub evals: u64,
    /// Violation-only evaluations spent inside restoration.
    pub h_evals: u64,
    /// Points rejected because an objective returned a non-finite value.
    pub nan_rejections: u64,
    pub log: Vec<IterationRecord>,
    pub stop: StopReason,
    /// The resolved violation threshold used by the run.
    pub h_max: f64,
    pub feas_tol: f64,
}

impl RunResult {
    /// Entries approximating the Pareto front of the original problem.
    pub fn feasible_front(&self) -> Vec<&ArchiveEntry> {
        self.archive
            .entries()
            .iter()
            .filter(|e| e.eval.h < self.feas_tol)
            .collect()
    }

    pub fn log_csv(&self) -> String {
        let mut out = String::from(IterationRecord::CSV_HEADER);
        out.push('\n');
        for rec in &self.log {
            out.push_str(&rec.csv_line());
            out.push('\n');
        }
        out
    }
}

/// Index of the most isolated entry: per objective component the entries are
/// ranked by value and scored with the gap to their neighbors (endpoints use
/// their single gap, interior points the average of the flanking gaps); the
/// winner maximizes the mean score over components, ties resolved toward the
/// lowest insertion id.
pub fn most_isolated(feasible: &[&ArchiveEntry]) -> usize {
    assert!(!feasible.is_empty());
    if feasible.len() == 1 {
        return 0;
    }
    let count = feasible.len();
    let m = feasible[0].eval.f.len();
    let mut gamma = vec![0.0_f64; count];
    for i in 0..m {
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| {
            feasible[a].eval.f[i]
                .partial_cmp(&feasible[b].eval.f[i])
                .unwrap()
                .then(feasible[a].id.cmp(&feasible[b].id))
        });
        let value = |rank: usize| feasible[order[rank]].eval.f[i];
        for (rank, &slot) in order.iter().enumerate() {
            let delta = if rank == 0 {
                value(1) - value(0)
            } else if rank == count - 1 {
                value(count - 1) - value(count - 2)
            } else {
                (value(rank + 1) - value(rank - 1)) / 2.0
            };
            gamma[slot] += delta;
        }
    }
    let mut best = 0;
    for candidate in 1..count {
        let better = gamma[candidate] > gamma[best]
            || (gamma[candidate] == gamma[best] && feasible[candidate].id < feasible[best].id);
        if better {
            best = candidate;
        }
    }
    best
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn argmin_h(indices: &[usize], archive: &Archive) -> usize {
    *indices
        .iter()
        .min_by(|&&a, &&b| {
            let ea = &archive.entries()[a];
            let eb = &archive.entries()[b];
            ea.eval
                .h
                .partial_cmp(&eb.eval.h)
                .unwrap()
                .then(ea.id.cmp(&eb.id))
        })
        .expect("nonempty index list")
}

/// Picks the iterate for this iteration; returns an index into the archive.
///
/// Feasible mode selects the most isolated feasible entry. Infeasible mode
/// prefers the smallest-h entry inside the ball around the last feasible
/// center (radius `eta_ball * alpha * max_dir_norm` from the previous poll),
/// falling back to the globally smallest h. Either mode degrades gracefully
/// when its preferred class is empty.
///
/// Entries whose step size has already fallen below `min_alpha` are
/// converged and no longer explored; without this the step-size stop
/// (every listed alpha below the tolerance) could never trigger, since
/// selection would keep shrinking one entry while the rest stand still.
pub fn select_iterate(archive: &Archive, state: &ModeState, cfg: &RunConfig) -> usize {
    assert!(!archive.is_empty());
    let mut pool: Vec<usize> = (0..archive.len())
        .filter(|&i| archive.entries()[i].alpha >= cfg.min_alpha)
        .collect();
    if pool.is_empty() {
        pool = (0..archive.len()).collect();
    }
    let feasible: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|&i| archive.entries()[i].eval.h < cfg.feas_tol)
        .collect();
    let infeasible: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|i| !feasible.contains(i))
        .collect();

    let pick_feasible = || {
        let refs: Vec<&ArchiveEntry> = feasible.iter().map(|&i| &archive.entries()[i]).collect();
        feasible[most_isolated(&refs)]
    };
    let pick_infeasible = || {
        if feasible.is_empty() {
            return argmin_h(&infeasible, archive);
        }
        if let Some(center) = &state.last_feasible_center {
            let radius = cfg.eta_ball * state.last_center_alpha * state.last_poll_max_norm;
            let in_ball: Vec<usize> = infeasible
                .iter()
                .copied()
                .filter(|&i| euclidean(&archive.entries()[i].x, center) <= radius)
                .collect();
            if !in_ball.is_empty() {
                return argmin_h(&in_ball, archive);
            }
        }
        argmin_h(&infeasible, archive)
    };

    match state.mode {
        CenterMode::Feasible => {
            if !feasible.is_empty() {
                pick_feasible()
            } else {
                pick_infeasible()
            }
        }
        CenterMode::Infeasible => {
            if !infeasible.is_empty() {
                pick_infeasible()
            } else {
                pick_feasible()
            }
        }
    }
}

/// Counters from one complete poll.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PollStats {
    /// Poll points processed (any status).
    pub evaluated: usize,
    pub n_ok: usize,
    /// Barrier or above-threshold points.
    pub n_rejected: usize,
    /// Processed points with status Ok and h below the feasibility tolerance.
    pub n_feasible: usize,
    /// Objective evaluations charged.
    pub charged: u64,
    pub nan_rejections: u64,
    /// True when the budget cut the batch short.
    pub truncated: bool,
}

/// Evaluates the poll points `center + alpha * d` in direction order, never
/// exiting early on success, stopping only when the evaluation budget runs
/// out. Returns the Ok-status candidates in direction order.
pub fn poll(
    problem: &Problem,
    center: &[f64],
    alpha: f64,
    pss: &PositiveSpanningSet,
    h_max: f64,
    feas_tol: f64,
    budget_left: u64,
) -> (Vec<(Vec<f64>, Evaluation)>, PollStats) {
    let mut stats = PollStats::default();
    let mut candidates = Vec::new();
    for d in &pss.dirs {
        if stats.charged >= budget_left {
            stats.truncated = true;
            break;
        }
        let x: Vec<f64> = center
            .iter()
            .zip(d)
            .map(|(&c, &di)| c + alpha * di)
            .collect();
        let eval = problem.evaluate(&x, h_max);
        stats.evaluated += 1;
        if eval.charged() {
            stats.charged += 1;
        }
        match eval.status {
            EvalStatus::Ok => {
                stats.n_ok += 1;
                if eval.h < feas_tol {
                    stats.n_feasible += 1;
                }
                candidates.push((x, eval));
            }
            EvalStatus::NanObjective => {
                stats.nan_rejections += 1;
                stats.n_rejected += 1;
            }
            EvalStatus::BarrierX | EvalStatus::AboveHmax => {
                stats.n_rejected += 1;
            }
        }
    }
    (candidates, stats)
}

/// Runs the filter + inexact-restoration solver.
pub fn run_dms_filter_ir(problem: &Problem, cfg: &RunConfig) -> Result<RunResult, RunError> {
    Run::new(problem, cfg, Variant::FilterIr)?.run()
}

/// Runs the extreme-barrier baseline: restoration disabled, the center is
/// always selected among feasible entries, and any point violating the
/// relaxable constraints beyond the tolerance is barred like a bound
/// violation.
pub fn run_extreme_barrier(problem: &Problem, cfg: &RunConfig) -> Result<RunResult, RunError> {
    Run::new(problem, cfg, Variant::ExtremeBarrier)?.run()
}

/// Points equally spaced on the segment joining the bound vectors.
pub fn segment_points(problem: &Problem, count: usize) -> Result<Vec<Vec<f64>>, RunError> {
    let finite = problem
        .lower()
        .iter()
        .chain(problem.upper())
        .all(|v| v.is_finite());
    if !finite {
        return Err(RunError::NonFiniteBounds);
    }
    let points = (0..count)
        .map(|i| {
            let t = if count == 1 {
                0.5
            } else {
                i as f64 / (count - 1) as f64
            };
            problem
                .lower()
                .iter()
                .zip(problem.upper())
                .map(|(&l, &u)| l + t * (u - l))
                .collect()
        })
        .collect();
    Ok(points)
}

struct Run<'a> {
    problem: &'a Problem,
    cfg: &'a RunConfig,
    variant: Variant,
    archive: Archive,
    state: ModeState,
    h_max: f64,
    evals: u64,
    h_evals: u64,
    nan_rejections: u64,
    halton_cursor: u64,
    log: Vec<IterationRecord>,
}

impl<'a> Run<'a> {
    fn new(problem: &'a Problem, cfg: &'a RunConfig, variant: Variant) -> Result<Self, RunError> {
        cfg.validate()?;
        let mut run = Run {
            problem,
            cfg,
            variant,
            archive: Archive::new(),
            state: ModeState::default(),
            h_max: f64::INFINITY,
            evals: 0,
            h_evals: 0,
            nan_rejections: 0,
            halton_cursor: 1 + cfg.seed,
            log: Vec::new(),
        };
        run.initialize()?;
        Ok(run)
    }

    /// The comparison key: objectives plus the violation component for the
    /// filter solver, objectives alone for the barrier baseline.
    fn key_of(&self, eval: &Evaluation) -> Vec<f64> {
        match self.variant {
            Variant::FilterIr => {
                let mut key = eval.f.clone();
                key.push(eval.h);
                key
            }
            Variant::ExtremeBarrier => eval.f.clone(),
        }
    }

    /// Threshold passed to evaluation: the barrier variant bars any point
    /// violating the relaxable constraints beyond the tolerance.
    fn eval_h_max(&self) -> f64 {
        match self.variant {
            Variant::FilterIr => self.h_max,
            Variant::ExtremeBarrier => self.cfg.feas_tol,
        }
    }

    fn initialize(&mut self) -> Result<(), RunError> {
        let points = match &self.cfg.initial_points {
            Some(points) => {
                for (index, p) in points.iter().enumerate() {
                    if p.len() != self.problem.n() {
                        return Err(RunError::InitialPointDimension {
                            index,
                            expected: self.problem.n(),
                            got: p.len(),
                        });
                    }
                }
                points.clone()
            }
            None => match self.variant {
                Variant::FilterIr => segment_points(self.problem, self.problem.n())?,
                Variant::ExtremeBarrier => match self.problem.default_start() {
                    Some(start) => vec![start.to_vec()],
                    None => {
                        vec![segment_points(self.problem, 1)?.remove(0)]
                    }
                },
            },
        };

        let in_bounds: Vec<Vec<f64>> = points
            .into_iter()
            .filter(|p| self.problem.in_bounds(p))
            .collect();
        if in_bounds.is_empty() {
            return Err(RunError::NoInitialInBounds);
        }
        let h_values: Vec<f64> = in_bounds
            .iter()
            .map(|p| self.problem.violation_at(p))
            .collect();

        match self.variant {
            Variant::FilterIr => {
                self.h_max = self.problem.h_max().resolve(self.problem.p(), &h_values);
                let best_h = h_values.iter().cloned().fold(f64::INFINITY, f64::min);
                if !h_values.iter().any(|&h| h <= self.h_max) {
                    return Err(RunError::NoInitialBelowHmax {
                        h_max: self.h_max,
                        best_h,
                    });
                }
            }
            Variant::ExtremeBarrier => {
                self.h_max = f64::INFINITY;
                let best_h = h_values.iter().cloned().fold(f64::INFINITY, f64::min);
                if !h_values.iter().any(|&h| h <= self.cfg.feas_tol) {
                    return Err(RunError::NoFeasibleStart {
                        feas_tol: self.cfg.feas_tol,
                        best_h,
                    });
                }
            }
        }

        let mut candidates = Vec::new();
        for x in in_bounds {
            if self.evals >= self.cfg.max_evals {
                break;
            }
            let eval = self.problem.evaluate(&x, self.eval_h_max());
            if eval.charged() {
                self.evals += 1;
            }
            match eval.status {
                EvalStatus::Ok => {
                    let key = self.key_of(&eval);
                    candidates.push(ArchiveEntry::new(x, self.cfg.alpha0, eval, key));
                }
                EvalStatus::NanObjective => self.nan_rejections += 1,
                EvalStatus::BarrierX | EvalStatus::AboveHmax => {}
            }
        }
        self.archive
            .merge_candidates(candidates, self.cfg.alpha0, &self.cfg.forcing);
        if self.archive.is_empty() {
            // every admissible point was rejected at evaluation time
            return match self.variant {
                Variant::FilterIr => Err(RunError::NoInitialBelowHmax {
                    h_max: self.h_max,
                    best_h: f64::INFINITY,
                }),
                Variant::ExtremeBarrier => Err(RunError::NoFeasibleStart {
                    feas_tol: self.cfg.feas_tol,
                    best_h: f64::INFINITY,
                }),
            };
        }
        Ok(())
    }

    fn next_pss(&mut self) -> PositiveSpanningSet {
        match self.cfg.directions {
            DirectionKind::Coordinate => coordinate_set(self.problem.n()),
            DirectionKind::HaltonDense => {
                let pss = halton_set(self.problem.n(), self.halton_cursor);
                // the generator may have skipped degenerate indices
                self.halton_cursor = pss.index + 1;
                pss
            }
        }
    }

    fn feasible_count(&self) -> usize {
        self.archive
            .entries()
            .iter()
            .filter(|e| e.eval.h < self.cfg.feas_tol)
            .count()
    }

    fn run(mut self) -> Result<RunResult, RunError> {
        let stop = loop {
            if self.evals >= self.cfg.max_evals {
                break StopReason::Budget;
            }
            if self
                .archive
                .entries()
                .iter()
                .all(|e| e.alpha < self.cfg.min_alpha)
            {
                break StopReason::MinAlpha;
            }
            self.iterate();
        };
        Ok(RunResult {
            archive: self.archive,
            evals: self.evals,
            h_evals: self.h_evals,
            nan_rejections: self.nan_rejections,
            log: self.log,
            stop,
            h_max: self.h_max,
            feas_tol: self.cfg.feas_tol,
        })
    }

    fn iterate(&mut self) {
        let iter = self.log.len() as u64 + 1;
        let mode = self.state.mode;

        // Step 1: iterate selection. (The search step of the framework is an
        // extension hook; none is implemented.)
        let center_idx = select_iterate(&self.archive, &self.state, self.cfg);
        let center = self.archive.entries()[center_idx].clone();
        let alpha_k = center.alpha;
        let center_feasible = center.eval.h < self.cfg.feas_tol;

        let mut step_kind = StepKind::Poll;
        let mut accepted: Vec<u64> = Vec::new();
        let mut evaluated_feasible = false;
        let mut poll_outcome: Option<(PollStats, f64)> = None;

        // Step 3: inexact restoration from violating centers.
        if self.variant == Variant::FilterIr && center.eval.h > 0.0 {
            let outcome = restore(self.problem, &center.x, alpha_k, &self.cfg.restoration)
                .expect("center stored in the archive has h > 0");
            self.h_evals += outcome.inner_evals as u64;
            if outcome.satisfied && self.evals < self.cfg.max_evals {
                let eval = self.problem.evaluate(&outcome.y_star, self.eval_h_max());
                if eval.charged() {
                    self.evals += 1;
                }
                match eval.status {
                    EvalStatus::Ok => {
                        if eval.h < self.cfg.feas_tol {
                            evaluated_feasible = true;
                        }
                        let key = self.key_of(&eval);
                        let entry = ArchiveEntry::new(outcome.y_star, alpha_k, eval, key);
                        accepted =
                            self.archive
                                .merge_candidates(vec![entry], alpha_k, &self.cfg.forcing);
                        if !accepted.is_empty() {
                            step_kind = StepKind::Restoration;
                        }
                    }
                    EvalStatus::NanObjective => self.nan_rejections += 1,
                    EvalStatus::BarrierX | EvalStatus::AboveHmax => {}
                }
            }
        }

        // Step 4: complete poll, skipped when restoration already improved
        // the list.
        if accepted.is_empty() {
            let pss = self.next_pss();
            let budget_left = self.cfg.max_evals - self.evals;
            let (candidates, stats) = poll(
                self.problem,
                &center.x,
                alpha_k,
                &pss,
                self.eval_h_max(),
                self.cfg.feas_tol,
                budget_left,
            );
            self.evals += stats.charged;
            self.nan_rejections += stats.nan_rejections;
            if stats.n_feasible > 0 {
                evaluated_feasible = true;
            }
            let entries: Vec<ArchiveEntry> = candidates
                .into_iter()
                .map(|(x, eval)| {
                    let key = self.key_of(&eval);
                    ArchiveEntry::new(x, alpha_k, eval, key)
                })
                .collect();
            accepted = self
                .archive
                .merge_candidates(entries, alpha_k, &self.cfg.forcing);
            step_kind = StepKind::Poll;
            poll_outcome = Some((stats, pss.max_norm()));
        }

        // Step 5: success classification and step-size update.
        let success = !accepted.is_empty();
        let outcome = if success {
            MergeOutcome::Success
        } else {
            MergeOutcome::Unsuccess
        };
        let step_outcome = if success {
            StepOutcome::Success
        } else {
            StepOutcome::Unsuccess
        };
        let alpha_new = step_update(alpha_k, step_outcome, &self.cfg.step_rule);
        self.archive
            .apply_step_update(outcome, center.id, &accepted, alpha_new);

        // Mode switching. A feasible center hands over to infeasible
        // exploration only when its poll ran, processed at least one point
        // and generated nothing feasible; an infeasible center hands back as
        // soon as any evaluated point (restoration or poll) was feasible.
        if self.variant == Variant::FilterIr {
            if center_feasible {
                if let Some((stats, max_norm)) = &poll_outcome {
                    if stats.evaluated >= 1 && stats.n_feasible == 0 {
                        self.state.mode = CenterMode::Infeasible;
                        self.state.last_feasible_center = Some(center.x.clone());
                        self.state.last_poll_max_norm = *max_norm;
                        self.state.last_center_alpha = alpha_k;
                    }
                }
            } else if evaluated_feasible {
                self.state.mode = CenterMode::Feasible;
            }
        }

        self.log.push(IterationRecord {
            iter,
            mode,
            step: step_kind,
            success,
            alpha: alpha_k,
            evals: self.evals,
            archive_size: self.archive.len(),
            n_feasible: self.feasible_count(),
        });
    }
}
