//! Front-quality metrics (purity, biobjective hypervolume, the spread
//! metrics Gamma and Delta) and Dolan-More performance profiles over
//! per-problem metric tables.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::archive::filter_front;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("cannot build a reference front from an empty union")]
    EmptyUnion,
    #[error("fronts mix problems '{0}' and '{1}'")]
    MixedProblems(String, String),
    #[error("fronts mix objective counts {0} and {1}")]
    MixedDimensions(usize, usize),
    #[error("hypervolume needs biobjective points, got {0} components")]
    NotBiobjective(usize),
    #[error("point {point:?} does not dominate the reference point {reference:?}")]
    RefPointViolation {
        point: Vec<f64>,
        reference: Vec<f64>,
    },
    #[error("front csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("profile row for problem '{0}' has no finite entry")]
    AllInfiniteRow(String),
}

/// A solver's Pareto-front approximation for one problem. Construction
/// filters the points to the mutually nondominated subset.
#[derive(Debug, Clone)]
pub struct Front {
    pub points: Vec<Vec<f64>>,
    pub solver_id: String,
    pub problem_id: String,
}

impl Front {
    pub fn new(
        points: Vec<Vec<f64>>,
        solver_id: impl Into<String>,
        problem_id: impl Into<String>,
    ) -> Self {
        Front {
            points: filter_front(&points),
            solver_id: solver_id.into(),
            problem_id: problem_id.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn m(&self) -> Option<usize> {
        self.points.first().map(Vec::len)
    }
}

/// Componentwise best and worst values of a reference front, the extreme
/// points appended when measuring spread.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    pub best: Vec<f64>,
    pub worst: Vec<f64>,
}

/// The union of all fronts for one problem with the dominated points
/// removed, plus its componentwise extremes.
pub fn reference_front(fronts: &[&Front]) -> Result<(Front, Extremes), MetricsError> {
    let mut union: Vec<Vec<f64>> = Vec::new();
    let mut problem_id: Option<&str> = None;
    let mut m: Option<usize> = None;
    for front in fronts {
        match problem_id {
            Some(id) if id != front.problem_id => {
                return Err(MetricsError::MixedProblems(
                    id.to_string(),
                    front.problem_id.clone(),
                ))
            }
            _ => problem_id = Some(&front.problem_id),
        }
        if let Some(fm) = front.m() {
            match m {
                Some(prev) if prev != fm => return Err(MetricsError::MixedDimensions(prev, fm)),
                _ => m = Some(fm),
            }
        }
        union.extend(front.points.iter().cloned());
    }
    if union.is_empty() {
        return Err(MetricsError::EmptyUnion);
    }
    let reference = Front::new(
        union,
        "reference",
        problem_id.unwrap_or_default().to_string(),
    );
    let m = m.unwrap();
    let mut best = vec![f64::INFINITY; m];
    let mut worst = vec![f64::NEG_INFINITY; m];
    for point in &reference.points {
        for j in 0..m {
            best[j] = best[j].min(point[j]);
            worst[j] = worst[j].max(point[j]);
        }
    }
    Ok((reference, Extremes { best, worst }))
}

/// Fraction of the front's points that survive in the reference front,
/// matched componentwise within `tol` (0 for exact). `None` when the front
/// is empty, which callers map to a failed table entry.
pub fn purity(front: &Front, reference: &Front, tol: f64) -> Option<f64> {
    if front.is_empty() {
        return None;
    }
    let matches = front
        .points
        .iter()
        .filter(|p| {
            reference.points.iter().any(|r| {
                r.len() == p.len() && r.iter().zip(p.iter()).all(|(&a, &b)| (a - b).abs() <= tol)
            })
        })
        .count();
    Some(matches as f64 / front.len() as f64)
}

/// Exact biobjective hypervolume dominated by `points` and bounded by
/// `ref_point`: sort the nondominated subset by the first component and sum
/// the staircase boxes. Every point must be componentwise at most the
/// reference point.
pub fn hypervolume2(points: &[Vec<f64>], ref_point: &[f64]) -> Result<f64, MetricsError> {
    if ref_point.len() != 2 {
        return Err(MetricsError::NotBiobjective(ref_point.len()));
    }
    for p in points {
        if p.len() != 2 {
            return Err(MetricsError::NotBiobjective(p.len()));
        }
        if p[0] > ref_point[0] || p[1] > ref_point[1] {
            return Err(MetricsError::RefPointViolation {
                point: p.clone(),
                reference: ref_point.to_vec(),
            });
        }
    }
    let mut front = filter_front(points);
    front.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    let mut total = 0.0;
    for (i, p) in front.iter().enumerate() {
        let next_f1 = front.get(i + 1).map_or(ref_point[0], |q| q[0]);
        total += (next_f1 - p[0]) * (ref_point[1] - p[1]);
    }
    Ok(total)
}

/// Largest gap along the front: per component, sort the values, prepend the
/// reference best and append the reference worst, take the maximum
/// consecutive difference; the metric is the worst component.
pub fn gamma_metric(front: &Front, extremes: &Extremes) -> f64 {
    assert!(!front.is_empty());
    let m = front.m().unwrap();
    let mut gamma = 0.0_f64;
    for j in 0..m {
        let mut values: Vec<f64> = front.points.iter().map(|p| p[j]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut prev = extremes.best[j];
        let mut max_gap = 0.0_f64;
        for &v in values.iter().chain(std::iter::once(&extremes.worst[j])) {
            max_gap = max_gap.max(v - prev);
            prev = v;
        }
        gamma = gamma.max(max_gap);
    }
    gamma
}

/// Evenness of the gap distribution along the front. Per component, with
/// sorted values v_1..v_N between the extreme gaps d0 and dN and interior
/// gaps d_i of mean dbar:
/// `(d0 + dN + sum |d_i - dbar|) / (d0 + dN + (N-1) dbar)`, worst component.
/// A single point reduces to the extreme-gap ratio; a degenerate zero
/// denominator scores 0.
pub fn delta_metric(front: &Front, extremes: &Extremes) -> f64 {
    assert!(!front.is_empty());
    let m = front.m().unwrap();
    let n = front.len();
    let mut delta = 0.0_f64;
    for j in 0..m {
        let mut values: Vec<f64> = front.points.iter().map(|p| p[j]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d0 = values[0] - extremes.best[j];
        let dn = extremes.worst[j] - values[n - 1];
        let interior: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let component = if interior.is_empty() {
            let denom = d0 + dn;
            if denom == 0.0 {
                0.0
            } else {
                (d0 + dn) / denom
            }
        } else {
            let dbar = interior.iter().sum::<f64>() / interior.len() as f64;
            let spread: f64 = interior.iter().map(|d| (d - dbar).abs()).sum();
            let denom = d0 + dn + interior.len() as f64 * dbar;
            if denom == 0.0 {
                0.0
            } else {
                (d0 + dn + spread) / denom
            }
        };
        delta = delta.max(component);
    }
    delta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Purity,
    Hypervolume,
    Gamma,
    Delta,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Purity,
        MetricKind::Hypervolume,
        MetricKind::Gamma,
        MetricKind::Delta,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Purity => "purity",
            MetricKind::Hypervolume => "hv",
            MetricKind::Gamma => "gamma",
            MetricKind::Delta => "delta",
        }
    }

    pub fn parse(name: &str) -> Option<MetricKind> {
        match name.trim().to_ascii_lowercase().as_str() {
            "purity" => Some(MetricKind::Purity),
            "hv" | "hypervolume" => Some(MetricKind::Hypervolume),
            "gamma" => Some(MetricKind::Gamma),
            "delta" => Some(MetricKind::Delta),
            _ => None,
        }
    }

    /// Purity and hypervolume are larger-is-better and enter the table
    /// inverted so that lower table values always win.
    pub fn invert(&self) -> bool {
        matches!(self, MetricKind::Purity | MetricKind::Hypervolume)
    }
}

/// One `t_{p,s}` cell: lower is better, infinity marks failure.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricCell {
    pub problem: String,
    pub solver: String,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct MetricTable {
    pub metric: MetricKind,
    pub cells: Vec<MetricCell>,
}

/// A solver's cumulative profile: breakpoints `tau` with the fraction of
/// problems solved within `tau` times the per-problem best.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverProfile {
    pub solver: String,
    pub points: Vec<(f64, f64)>,
}

/// Dolan-More performance profiles of a metric table. Problems whose rows
/// are entirely infinite are dropped and reported in the second component.
pub fn performance_profiles(table: &MetricTable) -> (Vec<SolverProfile>, Vec<String>) {
    // first-appearance orders keep the output deterministic
    let mut solvers: Vec<String> = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    for cell in &table.cells {
        if !solvers.contains(&cell.solver) {
            solvers.push(cell.solver.clone());
        }
        if !problems.contains(&cell.problem) {
            problems.push(cell.problem.clone());
        }
    }
    let value_of = |problem: &str, solver: &str| {
        table
            .cells
            .iter()
            .find(|c| c.problem == problem && c.solver == solver)
            .map_or(f64::INFINITY, |c| c.value)
    };

    let mut dropped = Vec::new();
    let mut rows: Vec<(String, Vec<f64>, f64)> = Vec::new();
    for problem in &problems {
        let values: Vec<f64> = solvers.iter().map(|s| value_of(problem, s)).collect();
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        if min.is_infinite() {
            dropped.push(problem.clone());
        } else {
            rows.push((problem.clone(), values, min));
        }
    }
    if rows.is_empty() {
        return (
            solvers
                .into_iter()
                .map(|solver| SolverProfile {
                    solver,
                    points: vec![(1.0, 0.0)],
                })
                .collect(),
            dropped,
        );
    }

    // breakpoints where some membership flips: the achieved ratios
    let mut taus: BTreeSet<u64> = BTreeSet::new();
    taus.insert(1.0_f64.to_bits());
    for (_, values, min) in &rows {
        for &v in values {
            if v.is_finite() && *min > 0.0 {
                let ratio = (v / min).max(1.0);
                taus.insert(ratio.to_bits());
            }
        }
    }
    let taus: Vec<f64> = taus.into_iter().map(f64::from_bits).collect();

    let total = rows.len() as f64;
    let profiles = solvers
        .iter()
        .enumerate()
        .map(|(s, solver)| {
            let points = taus
                .iter()
                .map(|&tau| {
                    let solved = rows
                        .iter()
                        .filter(|(_, values, min)| values[s] <= tau * min)
                        .count();
                    (tau, solved as f64 / total)
                })
                .collect();
            SolverProfile {
                solver: solver.clone(),
                points,
            }
        })
        .collect();
    (profiles, dropped)
}

/// Reads a front CSV: a header naming `f1..fk` (underscores accepted) and
/// optionally `h`, then one point per row. Rows with `h >= feas_tol` are
/// skipped; other columns (coordinates, step sizes) are ignored.
pub fn parse_front_csv(text: &str, feas_tol: f64) -> Result<Vec<Vec<f64>>, MetricsError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(MetricsError::Csv {
        line: 1,
        message: "missing header".into(),
    })?;
    let names: Vec<String> = header
        .split(',')
        .map(|s| s.trim().replace('_', "").to_ascii_lowercase())
        .collect();
    let mut f_cols: Vec<(usize, usize)> = Vec::new(); // (objective index, column)
    let mut h_col = None;
    for (col, name) in names.iter().enumerate() {
        if let Some(rest) = name.strip_prefix('f') {
            if let Ok(k) = rest.parse::<usize>() {
                f_cols.push((k, col));
            }
        } else if name == "h" {
            h_col = Some(col);
        }
    }
    f_cols.sort();
    if f_cols.is_empty() {
        return Err(MetricsError::Csv {
            line: 1,
            message: format!("no f1..fk columns in header '{header}'"),
        });
    }

    let mut points = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |col: usize| -> Result<f64, MetricsError> {
            fields
                .get(col)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or(MetricsError::Csv {
                    line: i + 1,
                    message: format!("bad value in column {}", col + 1),
                })
        };
        if let Some(col) = h_col {
            if parse(col)? >= feas_tol {
                continue;
            }
        }
        let point = f_cols
            .iter()
            .map(|&(_, col)| parse(col))
            .collect::<Result<Vec<f64>, _>>()?;
        points.push(point);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn front(points: &[[f64; 2]], solver: &str) -> Front {
        Front::new(points.iter().map(|p| p.to_vec()).collect(), solver, "prob")
    }

    #[test]
    fn reference_front_union_and_extremes() {
        let a = front(&[[1.0, 2.0]], "a");
        let b = front(&[[2.0, 1.0]], "b");
        let (reference, extremes) = reference_front(&[&a, &b]).unwrap();
        assert_eq!(reference.points.len(), 2);
        assert_eq!(extremes.best, vec![1.0, 1.0]);
        assert_eq!(extremes.worst, vec![2.0, 2.0]);

        let a = front(&[[1.0, 2.0]], "a");
        let b = front(&[[0.0, 1.0]], "b");
        let (reference, _) = reference_front(&[&a, &b]).unwrap();
        assert_eq!(reference.points, vec![vec![0.0, 1.0]]);
    }

    #[test]
    fn reference_front_matches_pairwise_oracle() {
        // brute-force O(N^2) dominance filter over three overlapping fronts
        let fronts = [
            front(&[[0.0, 3.0], [1.0, 1.0], [4.0, 0.5]], "a"),
            front(&[[0.5, 2.0], [2.0, 2.0], [3.0, 0.0]], "b"),
            front(&[[1.0, 1.0], [0.0, 3.5], [5.0, 5.0]], "c"),
        ];
        let refs: Vec<&Front> = fronts.iter().collect();
        let (reference, _) = reference_front(&refs).unwrap();

        let union: Vec<Vec<f64>> = fronts.iter().flat_map(|f| f.points.clone()).collect();
        let mut oracle = Vec::new();
        for p in &union {
            let dominated = union
                .iter()
                .any(|q| q != p && q.iter().zip(p).all(|(a, b)| a <= b));
            let duplicate = oracle.contains(p);
            if !dominated && !duplicate {
                oracle.push(p.clone());
            }
        }
        let mut got = reference.points.clone();
        let mut want = oracle;
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn empty_union_is_an_error() {
        let empty = front(&[], "a");
        assert!(matches!(
            reference_front(&[&empty]),
            Err(MetricsError::EmptyUnion)
        ));
    }

    #[test]
    fn purity_cases() {
        let reference = front(&[[1.0, 2.0], [2.0, 1.0]], "ref");
        let subset = front(&[[1.0, 2.0]], "s");
        assert_eq!(purity(&subset, &reference, 0.0), Some(1.0));

        let beaten = front(&[[3.0, 3.0]], "s");
        assert_eq!(purity(&beaten, &reference, 0.0), Some(0.0));

        let mixed = Front::new(
            vec![
                vec![1.0, 2.0],
                vec![2.0, 1.0],
                vec![1.5, 1.5],
                vec![0.5, 3.0],
            ],
            "s",
            "prob",
        );
        let reference = front(&[[1.0, 2.0], [2.0, 1.0], [0.5, 3.0]], "ref");
        assert_eq!(purity(&mixed, &reference, 0.0), Some(0.75));

        assert_eq!(purity(&front(&[], "s"), &reference, 0.0), None);
    }

    #[test]
    fn hypervolume_fixtures() {
        assert_eq!(hypervolume2(&[vec![1.0, 1.0]], &[2.0, 2.0]).unwrap(), 1.0);
        assert_eq!(
            hypervolume2(&[vec![1.0, 2.0], vec![2.0, 1.0]], &[3.0, 3.0]).unwrap(),
            3.0
        );
        assert_eq!(hypervolume2(&[], &[1.0, 1.0]).unwrap(), 0.0);
        // dominated points contribute nothing
        let hv = hypervolume2(
            &[vec![1.0, 2.0], vec![2.0, 1.0], vec![2.5, 2.5]],
            &[3.0, 3.0],
        )
        .unwrap();
        assert_eq!(hv, 3.0);
        assert!(matches!(
            hypervolume2(&[vec![4.0, 0.0]], &[3.0, 3.0]),
            Err(MetricsError::RefPointViolation { .. })
        ));
    }

    #[test]
    fn hypervolume_translation_invariant_and_monotone() {
        let pts = vec![vec![0.2, 0.9], vec![0.5, 0.4], vec![0.8, 0.1]];
        let base = hypervolume2(&pts, &[1.0, 1.0]).unwrap();
        let shifted: Vec<Vec<f64>> = pts.iter().map(|p| vec![p[0] + 5.0, p[1] - 2.0]).collect();
        let moved = hypervolume2(&shifted, &[6.0, -1.0]).unwrap();
        assert!((base - moved).abs() < 1e-12);

        let mut more = pts.clone();
        more.push(vec![0.3, 0.5]); // nondominated addition
        let grown = hypervolume2(&more, &[1.0, 1.0]).unwrap();
        assert!(grown >= base);
    }

    #[test]
    fn gamma_fixtures() {
        let f = front(&[[0.0, 1.0], [1.0, 0.0]], "s");
        let own = Extremes {
            best: vec![0.0, 0.0],
            worst: vec![1.0, 1.0],
        };
        assert!((gamma_metric(&f, &own) - 1.0).abs() < 1e-12);

        let f = Front::new(
            vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]],
            "s",
            "prob",
        );
        assert!((gamma_metric(&f, &own) - 0.5).abs() < 1e-12);

        // single point between the extremes: gaps are v - 0 and 1 - v, so
        // the second component's 0.8 gap dominates
        let f = front(&[[0.3, 0.8]], "s");
        assert!((gamma_metric(&f, &own) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn delta_fixtures() {
        let own = Extremes {
            best: vec![0.0, 0.0],
            worst: vec![1.0, 1.0],
        };
        // perfectly uniform interior gaps with zero extreme gaps
        let f = Front::new(
            vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]],
            "s",
            "prob",
        );
        assert!(delta_metric(&f, &own).abs() < 1e-12);

        // gaps 0.4 / 0.6 in each component: (|0.4-0.5| + |0.6-0.5|) / 1.0
        let f = Front::new(
            vec![vec![0.0, 1.0], vec![0.4, 0.6], vec![1.0, 0.0]],
            "s",
            "prob",
        );
        assert!((delta_metric(&f, &own) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn gamma_delta_invariant_under_component_shift() {
        let own = Extremes {
            best: vec![0.0, 0.0],
            worst: vec![1.0, 1.0],
        };
        let f = Front::new(
            vec![vec![0.0, 1.0], vec![0.3, 0.55], vec![1.0, 0.0]],
            "s",
            "prob",
        );
        let shift = 17.25;
        let shifted = Front::new(
            f.points.iter().map(|p| vec![p[0] + shift, p[1]]).collect(),
            "s",
            "prob",
        );
        let shifted_ext = Extremes {
            best: vec![own.best[0] + shift, own.best[1]],
            worst: vec![own.worst[0] + shift, own.worst[1]],
        };
        assert!((gamma_metric(&f, &own) - gamma_metric(&shifted, &shifted_ext)).abs() < 1e-12);
        assert!((delta_metric(&f, &own) - delta_metric(&shifted, &shifted_ext)).abs() < 1e-12);
    }

    #[test]
    fn delta_handles_duplicates_and_degenerate_fronts() {
        let own = Extremes {
            best: vec![0.0, 0.0],
            worst: vec![1.0, 1.0],
        };
        // duplicate interior value: a zero-length gap enters the spread sum
        let f = Front {
            points: vec![
                vec![0.0, 1.0],
                vec![0.4, 0.6],
                vec![0.4, 0.6],
                vec![1.0, 0.0],
            ],
            solver_id: "s".into(),
            problem_id: "prob".into(),
        };
        let d = delta_metric(&f, &own);
        assert!(d.is_finite() && d > 0.0);

        // all identical: zero denominator scores zero
        let ext = Extremes {
            best: vec![0.5, 0.5],
            worst: vec![0.5, 0.5],
        };
        let f = front(&[[0.5, 0.5]], "s");
        assert_eq!(delta_metric(&f, &ext), 0.0);
    }

    fn table(cells: &[(&str, &str, f64)]) -> MetricTable {
        MetricTable {
            metric: MetricKind::Gamma,
            cells: cells
                .iter()
                .map(|(p, s, v)| MetricCell {
                    problem: p.to_string(),
                    solver: s.to_string(),
                    value: *v,
                })
                .collect(),
        }
    }

    fn rho_at(profile: &SolverProfile, tau: f64) -> f64 {
        profile
            .points
            .iter()
            .filter(|(t, _)| *t <= tau)
            .map(|(_, r)| *r)
            .next_back()
            .unwrap_or(0.0)
    }

    #[test]
    fn profile_two_by_two_example() {
        let t = table(&[
            ("p1", "s1", 1.0),
            ("p1", "s2", 2.0),
            ("p2", "s1", 2.0),
            ("p2", "s2", 1.0),
        ]);
        let (profiles, dropped) = performance_profiles(&t);
        assert!(dropped.is_empty());
        let s1 = &profiles[0];
        assert_eq!(s1.solver, "s1");
        assert!((rho_at(s1, 1.0) - 0.5).abs() < 1e-12);
        assert!((rho_at(s1, 2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn profile_best_everywhere_and_ties() {
        let t = table(&[
            ("p1", "s1", 1.0),
            ("p1", "s2", 1.0),
            ("p2", "s1", 0.5),
            ("p2", "s2", 3.0),
        ]);
        let (profiles, _) = performance_profiles(&t);
        // both solvers tie at the p1 minimum, so both count at tau = 1
        assert!((rho_at(&profiles[0], 1.0) - 1.0).abs() < 1e-12);
        assert!((rho_at(&profiles[1], 1.0) - 0.5).abs() < 1e-12);
        // curves are nondecreasing
        for p in &profiles {
            for w in p.points.windows(2) {
                assert!(w[1].1 >= w[0].1);
            }
        }
    }

    #[test]
    fn profile_failures_never_count_and_rows_drop() {
        let t = table(&[
            ("p1", "s1", 1.0),
            ("p1", "s2", f64::INFINITY),
            ("dead", "s1", f64::INFINITY),
            ("dead", "s2", f64::INFINITY),
        ]);
        let (profiles, dropped) = performance_profiles(&t);
        assert_eq!(dropped, vec!["dead".to_string()]);
        let last = profiles[1].points.last().unwrap();
        assert_eq!(last.1, 0.0); // s2 never solves the surviving problem
        assert_eq!(profiles[0].points.last().unwrap().1, 1.0);
    }

    #[test]
    fn profile_zero_minimum() {
        // a zero best value means only exact zeros are ever within ratio
        let t = table(&[
            ("p1", "s1", 0.0),
            ("p1", "s2", 0.5),
            ("p2", "s1", 1.0),
            ("p2", "s2", 1.0),
        ]);
        let (profiles, _) = performance_profiles(&t);
        assert!((rho_at(&profiles[0], 1e9) - 1.0).abs() < 1e-12);
        assert!((rho_at(&profiles[1], 1e9) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn front_csv_round_trip_shapes() {
        let text = "x1,x2,f1,f2,h,alpha\n0.1,0.2,1.5,2.5,0,1\n0.3,0.4,2.5,1.5,0.5,1\n";
        let pts = parse_front_csv(text, 1e-5).unwrap();
        assert_eq!(pts, vec![vec![1.5, 2.5]]); // the h = 0.5 row is infeasible

        let minimal = "f1,f2\n1,2\n2,1\n";
        let pts = parse_front_csv(minimal, 1e-5).unwrap();
        assert_eq!(pts.len(), 2);

        let with_underscores = "f_1,f_2,h\n1,2,0\n";
        let pts = parse_front_csv(with_underscores, 1e-5).unwrap();
        assert_eq!(pts, vec![vec![1.0, 2.0]]);

        assert!(parse_front_csv("a,b\n1,2\n", 1e-5).is_err());
        assert!(parse_front_csv("f1,f2\n1,oops\n", 1e-5).is_err());
    }
}
