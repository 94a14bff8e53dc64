//! Inexact feasibility restoration: from an infeasible iterate `x_k`, seek
//! the closest point whose aggregated violation is contracted below
//! `xi(alpha_k) * h(x_k)`, staying inside the bounds.
//!
//! The subproblem `min 0.5 ||y - x_k||^2  s.t.  h(y) <= xi(alpha_k) h(x_k)`
//! is solved derivative-free: rounds of quadratic-penalty merit minimization
//! `M_mu(y) = 0.5 ||y - x_k||^2 + mu * max(0, h(y) - target)^2`, each round
//! an inner coordinate direct search started from the previous round's best
//! point with iterates projected to the bounds, `mu` growing geometrically
//! between rounds. Every point sampled anywhere in the search that already
//! meets the contraction target is remembered; the closest of those is the
//! answer. A final barrier-polish search sharpens that point at fine step
//! sizes. The returned flag, not optimality, is what the caller acts on.

use thiserror::Error;

use crate::problem::Problem;

#[derive(Debug, Error)]
pub enum RestorationError {
    #[error("restoration requires an infeasible center: h(x_k) = {0} is not positive")]
    FeasibleCenter(f64),
    #[error("center has {got} coordinates, problem dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Contraction factor for the violation target; decays to zero with the
/// step size. The default is `xi(alpha) = (alpha/2)^2`.
pub fn xi(alpha: f64) -> f64 {
    (alpha / 2.0) * (alpha / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestorationConfig {
    /// Coefficient inside the contraction: `xi(a) = (xi_coeff * a)^xi_exponent`.
    pub xi_coeff: f64,
    pub xi_exponent: f64,
    /// Total budget of violation evaluations per restoration call
    /// (`inner_budget_per_dim * n`).
    pub inner_budget_per_dim: usize,
    pub penalty_start: f64,
    pub penalty_growth: f64,
    pub max_penalty_rounds: usize,
    /// Slack added to the contraction target when judging satisfaction.
    pub tol: f64,
    /// Round the output to the coordinate mesh `{x_k + alpha_k z}` before
    /// the final check (integer-lattice globalization).
    pub round_to_mesh: bool,
    /// Run the barrier-polish stage after the penalty rounds.
    pub polish: bool,
}

impl Default for RestorationConfig {
    fn default() -> Self {
        RestorationConfig {
            xi_coeff: 0.5,
            xi_exponent: 2.0,
            inner_budget_per_dim: 200,
            penalty_start: 1.0,
            penalty_growth: 10.0,
            max_penalty_rounds: 8,
            tol: 0.0,
            round_to_mesh: false,
            polish: true,
        }
    }
}

impl RestorationConfig {
    pub fn xi(&self, alpha: f64) -> f64 {
        (self.xi_coeff * alpha).powf(self.xi_exponent)
    }
}

/// Merit bookkeeping for one penalty round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyRound {
    pub mu: f64,
    pub merit_start: f64,
    pub merit_end: f64,
}

#[derive(Debug, Clone)]
pub struct RestorationOutcome {
    pub y_star: Vec<f64>,
    pub achieved_h: f64,
    /// `achieved_h <= xi(alpha_k) * h(x_k) + tol`.
    pub satisfied: bool,
    /// Violation evaluations spent.
    pub inner_evals: usize,
    pub rounds: Vec<PenaltyRound>,
}

/// Scratch state shared by the search stages.
struct Search<'a> {
    problem: &'a Problem,
    center: &'a [f64],
    target: f64,
    tol: f64,
    budget: usize,
    evals: usize,
    /// Closest satisfied point sampled so far: (distance objective, point, h).
    best_satisfied: Option<(f64, Vec<f64>, f64)>,
}

fn half_sq_dist(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a
        .iter()
        .zip(b)
        .map(|(&ai, &bi)| (ai - bi) * (ai - bi))
        .sum::<f64>()
}

impl<'a> Search<'a> {
    fn violation(&mut self, y: &[f64]) -> f64 {
        self.evals += 1;
        let h = self.problem.violation_at(y);
        if h <= self.target + self.tol {
            let obj = half_sq_dist(y, self.center);
            let better = match &self.best_satisfied {
                Some((best_obj, _, _)) => obj < *best_obj,
                None => true,
            };
            if better {
                self.best_satisfied = Some((obj, y.to_vec(), h));
            }
        }
        h
    }

    fn merit(&mut self, y: &[f64], mu: f64) -> f64 {
        let h = self.violation(y);
        let excess = (h - self.target).max(0.0);
        half_sq_dist(y, self.center) + mu * excess * excess
    }

    fn out_of_budget(&self) -> bool {
        self.evals >= self.budget
    }

    /// Bisects along the segment from the center to a satisfied point for
    /// the first satisfied parameter, collapsing radial slack; the closest
    /// sample is captured by the tracker inside `violation`.
    fn ray_bisect(&mut self, y_sat: &[f64], iters: usize) {
        let mut lo = 0.0_f64; // center side, violates the target
        let mut hi = 1.0_f64;
        for _ in 0..iters {
            if self.out_of_budget() {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let y: Vec<f64> = self
                .center
                .iter()
                .zip(y_sat)
                .map(|(&c, &s)| c + mid * (s - c))
                .collect();
            if self.violation(&y) <= self.target + self.tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Coordinate direct search on the merit from `start`, step halving from
    /// `step0` down to `min_step`, accepting the best strictly improving
    /// poll point.
    fn descend(
        &mut self,
        start: Vec<f64>,
        start_value: f64,
        step0: f64,
        min_step: f64,
        mu: f64,
    ) -> (Vec<f64>, f64) {
        let n = self.problem.n();
        let mut current = start;
        let mut current_value = start_value;
        let mut step = step0;
        while step >= min_step && !self.out_of_budget() {
            let mut best: Option<(f64, Vec<f64>)> = None;
            for i in 0..n {
                for sign in [1.0, -1.0] {
                    if self.out_of_budget() {
                        break;
                    }
                    let mut y = current.clone();
                    y[i] += sign * step;
                    self.problem.project(&mut y);
                    if y == current {
                        continue;
                    }
                    let value = self.merit(&y, mu);
                    let improves_best = best.as_ref().is_none_or(|(b, _)| value < *b);
                    if value < current_value && improves_best {
                        best = Some((value, y));
                    }
                }
            }
            match best {
                Some((value, y)) => {
                    current = y;
                    current_value = value;
                }
                None => step *= 0.5,
            }
        }
        (current, current_value)
    }

    /// Slides the best satisfied point along the target level set. Probes
    /// step in directions orthogonal to the center ray (axis polling stalls
    /// there: near the optimum the improving cone between the distance
    /// gradient and the level set collapses to a sliver no axis hits), with
    /// a small inward-pull ladder against boundary curvature; every
    /// satisfied probe is bisected back onto the level set.
    fn tangent_polish(&mut self, step0: f64, min_step: f64) {
        let Some((mut best_obj, mut best_y, _)) = self.best_satisfied.clone() else {
            return;
        };
        let n = self.problem.n();
        let mut step = step0;
        while step >= min_step && !self.out_of_budget() {
            let radial: Vec<f64> = best_y
                .iter()
                .zip(self.center)
                .map(|(&y, &c)| y - c)
                .collect();
            let r = radial.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r == 0.0 {
                return; // the center itself satisfies; nothing closer exists
            }
            let u: Vec<f64> = radial.iter().map(|v| v / r).collect();
            let mut improved = false;
            for i in 0..n {
                // e_i with its radial component removed
                let mut tangent: Vec<f64> = u.iter().map(|&ui| -ui * u[i]).collect();
                tangent[i] += 1.0;
                let norm = tangent.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm < 1e-9 {
                    continue;
                }
                for sign in [1.0, -1.0] {
                    // the satisfied set sits beyond the level set, away from
                    // the center: push outward to re-enter it, then bisect
                    // back; the bisected point is what must improve
                    for push in [0.0, 0.25, 0.5, 1.0, 2.0] {
                        if self.out_of_budget() {
                            break;
                        }
                        let mut y = best_y.clone();
                        for ((yi, &ti), &ui) in y.iter_mut().zip(&tangent).zip(&u) {
                            *yi += sign * step * ti / norm + push * step * ui;
                        }
                        self.problem.project(&mut y);
                        if y == best_y {
                            continue;
                        }
                        let h = self.violation(&y);
                        if h <= self.target + self.tol {
                            self.ray_bisect(&y, 40);
                            let (obj, point, _) = self
                                .best_satisfied
                                .clone()
                                .expect("a satisfied point was just recorded");
                            if obj < best_obj {
                                best_obj = obj;
                                best_y = point;
                                improved = true;
                                break;
                            }
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
    }
}

/// Solves the restoration subproblem around `x_k` at step size `alpha_k`.
///
/// Requires `h(x_k) > 0`. Deterministic given its inputs. Violation
/// evaluations performed here are reported in `inner_evals` and are not part
/// of the objective-evaluation budget; only the returned point is meant to
/// receive a full evaluation by the caller.
pub fn restore(
    problem: &Problem,
    x_k: &[f64],
    alpha_k: f64,
    cfg: &RestorationConfig,
) -> Result<RestorationOutcome, RestorationError> {
    if x_k.len() != problem.n() {
        return Err(RestorationError::DimensionMismatch {
            expected: problem.n(),
            got: x_k.len(),
        });
    }
    let h_center = problem.violation_at(x_k);
    if h_center <= 0.0 || h_center.is_nan() {
        return Err(RestorationError::FeasibleCenter(h_center));
    }
    let target = cfg.xi(alpha_k) * h_center;
    let min_step = alpha_k * 2.0_f64.powi(-10);

    let mut search = Search {
        problem,
        center: x_k,
        target,
        tol: cfg.tol,
        budget: cfg.inner_budget_per_dim * problem.n(),
        evals: 0,
        best_satisfied: None,
    };

    let mut rounds = Vec::new();
    let mut point = x_k.to_vec();
    let mut mu = cfg.penalty_start;
    for _ in 0..cfg.max_penalty_rounds {
        if search.out_of_budget() {
            break;
        }
        let merit_start = search.merit(&point, mu);
        let (end_point, merit_end) =
            search.descend(point.clone(), merit_start, alpha_k, min_step, mu);
        rounds.push(PenaltyRound {
            mu,
            merit_start,
            merit_end,
        });
        point = end_point;
        mu *= cfg.penalty_growth;
    }

    if cfg.polish {
        if let Some((_, y, _)) = search.best_satisfied.clone() {
            search.ray_bisect(&y, 60);
        }
        search.tangent_polish(alpha_k, alpha_k * 2.0_f64.powi(-20));
    }

    // The answer is the closest satisfied sample, else the last merit point.
    // In lattice mode the answer snaps to the mesh first.
    let (mut y_star, mut achieved_h) = match &search.best_satisfied {
        Some((_, y, h)) => (y.clone(), *h),
        None => {
            search.evals += 1;
            let h = problem.violation_at(&point);
            (point.clone(), h)
        }
    };
    if cfg.round_to_mesh {
        let rounded = crate::directions::round_to_mesh(
            &y_star,
            x_k,
            alpha_k,
            problem.lower(),
            problem.upper(),
        );
        if rounded != y_star {
            y_star = rounded;
            search.evals += 1;
            achieved_h = problem.violation_at(&y_star);
        }
    }
    let satisfied = achieved_h <= target + cfg.tol;

    Ok(RestorationOutcome {
        y_star,
        achieved_h,
        satisfied,
        inner_evals: search.evals,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Problem;
    use std::sync::Arc;

    fn box_problem(
        lower: f64,
        upper: f64,
        n: usize,
        constraint: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Problem {
        Problem::new(
            "restoration-fixture",
            vec![lower; n],
            vec![upper; n],
            vec![Arc::new(|x: &[f64]| x[0]), Arc::new(|x: &[f64]| -x[0])],
            vec![Arc::new(constraint)],
        )
        .unwrap()
    }

    #[test]
    fn xi_values() {
        assert_eq!(xi(1.0), 0.25);
        assert_eq!(xi(0.5), 0.0625);
        let mut alpha = 1.0;
        let mut last = xi(alpha);
        for _ in 0..20 {
            alpha *= 0.5;
            let v = xi(alpha);
            assert!(v < last && v > 0.0);
            last = v;
        }
        assert!(last < 1e-12);
        assert_eq!(RestorationConfig::default().xi(1.0), 0.25);
    }

    #[test]
    fn feasible_center_is_a_precondition_error() {
        let p = box_problem(0.0, 2.0, 2, |x| x[0] + x[1] - 10.0);
        let err = restore(&p, &[0.5, 0.5], 1.0, &RestorationConfig::default()).unwrap_err();
        assert!(matches!(err, RestorationError::FeasibleCenter(_)));
    }

    #[test]
    fn linear_hinge_contracts_from_the_corner() {
        // c(y) = y1 + y2 - 1 on [0,2]^2 from (2,2): h = 9, target = 2.25
        let p = box_problem(0.0, 2.0, 2, |x| x[0] + x[1] - 1.0);
        let out = restore(&p, &[2.0, 2.0], 1.0, &RestorationConfig::default()).unwrap();
        assert!(out.satisfied);
        assert!(out.achieved_h <= 2.25);
        assert!(p.in_bounds(&out.y_star));
        // the optimum sits on y1 + y2 = 1 + sqrt(2.25) = 2.5 by symmetry,
        // so the distance objective is 0.5 * 2 * (2 - 1.25)^2 = 0.5625
        let obj = half_sq_dist(&out.y_star, &[2.0, 2.0]);
        assert!(
            (obj - 0.5625).abs() < 1e-3,
            "distance objective {obj} should be close to 0.5625"
        );
    }

    #[test]
    fn satisfied_outcomes_satisfy_exactly() {
        let p = box_problem(0.0, 2.0, 2, |x| x[0] + x[1] - 1.0);
        for alpha in [1.0, 0.5, 0.25] {
            let h0 = p.violation_at(&[2.0, 2.0]);
            let out = restore(&p, &[2.0, 2.0], alpha, &RestorationConfig::default()).unwrap();
            if out.satisfied {
                let recheck = p.violation_at(&out.y_star);
                assert!(recheck <= xi(alpha) * h0);
                assert!(p.in_bounds(&out.y_star));
            }
        }
    }

    #[test]
    fn merit_never_worsens_within_a_round() {
        let p = box_problem(0.0, 2.0, 2, |x| 2.0 * x[0] - x[1] - 0.5);
        let out = restore(&p, &[2.0, 0.0], 1.0, &RestorationConfig::default()).unwrap();
        assert!(!out.rounds.is_empty());
        for round in &out.rounds {
            assert!(
                round.merit_end <= round.merit_start,
                "round at mu={} worsened: {} -> {}",
                round.mu,
                round.merit_start,
                round.merit_end
            );
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged_not_fatal() {
        let cfg = RestorationConfig {
            inner_budget_per_dim: 2,
            ..RestorationConfig::default()
        };
        let p = box_problem(0.0, 2.0, 2, |x| x[0] + x[1] - 1.0);
        let out = restore(&p, &[2.0, 2.0], 1.0, &cfg).unwrap();
        assert!(out.inner_evals <= 2 * 2 + 1);
        // with almost no budget the contraction will usually fail; either
        // way the outcome reports a consistent flag
        assert_eq!(out.satisfied, out.achieved_h <= 2.25);
    }

    #[test]
    fn one_dimensional_closed_form() {
        // c(x) = 0.25 - x on [0,1], start 0: h0 = 0.0625, target = 0.015625,
        // optimal y* = 0.25 - sqrt(target) = 0.125
        let p = box_problem(0.0, 1.0, 1, |x| 0.25 - x[0]);
        let out = restore(&p, &[0.0], 1.0, &RestorationConfig::default()).unwrap();
        assert!(out.satisfied);
        assert!(out.y_star[0] >= 0.125 - 1e-9);
        assert!((out.y_star[0] - 0.125).abs() < 2e-3);
    }

    #[test]
    fn mesh_rounding_keeps_or_revokes_satisfaction() {
        let p = box_problem(0.0, 1.0, 1, |x| 0.25 - x[0]);
        let cfg = RestorationConfig {
            round_to_mesh: true,
            ..RestorationConfig::default()
        };
        let out = restore(&p, &[0.0], 0.5, &cfg).unwrap();
        let mesh_cell = out.y_star[0] / 0.5;
        assert_eq!(mesh_cell, mesh_cell.round());
        assert_eq!(
            out.satisfied,
            out.achieved_h <= xi(0.5) * p.violation_at(&[0.0])
        );
    }

    #[test]
    fn feasibility_chain_as_alpha_decays() {
        // chain restorations the way the run does: each center is the
        // previous answer, alpha halving, so h must collapse to zero
        let p = box_problem(0.0, 2.0, 2, |x| x[0] + x[1] - 1.0);
        let mut center = vec![2.0, 2.0];
        let mut alpha = 1.0;
        let mut h = p.violation_at(&center);
        for _ in 0..10 {
            if h == 0.0 {
                break;
            }
            let out = restore(&p, &center, alpha, &RestorationConfig::default()).unwrap();
            assert!(out.satisfied, "restoration should satisfy at alpha={alpha}");
            assert!(out.achieved_h <= xi(alpha) * h);
            center = out.y_star;
            h = out.achieved_h;
            alpha *= 0.5;
        }
        assert!(
            h < 1e-10,
            "violation should collapse along the chain, got {h}"
        );
    }
}
