//! The six nonlinear constraint families used to turn bound-constrained
//! biobjective problems into relaxably-constrained ones, together with their
//! conventional starting points.

use std::sync::Arc;

use super::{Problem, ProblemError, ScalarFn};

/// Number of constraints a family contributes for dimension `n`.
fn family_p(family: u8, n: usize) -> Result<usize, ProblemError> {
    let p = match family {
        1 | 2 | 5 => n.checked_sub(2),
        3 | 4 => n.checked_sub(1),
        6 => Some(1),
        _ => return Err(ProblemError::UnknownFamily(family)),
    };
    match p {
        Some(p) if n >= 3 => Ok(p),
        _ => Err(ProblemError::FamilyDimension { family, n }),
    }
}

/// Builds constraint `j` (0-based) of the given family.
fn family_constraint(family: u8, j: usize, n: usize) -> ScalarFn {
    match family {
        // (3 - 2 x_{j+1}) x_{j+1} - x_j - 2 x_{j+2} + 1
        1 => Arc::new(move |x: &[f64]| {
            (3.0 - 2.0 * x[j + 1]) * x[j + 1] - x[j] - 2.0 * x[j + 2] + 1.0
        }),
        // same shape with constant 2.5
        2 => Arc::new(move |x: &[f64]| {
            (3.0 - 2.0 * x[j + 1]) * x[j + 1] - x[j] - 2.0 * x[j + 2] + 2.5
        }),
        // x_j^2 + x_{j+1}^2 + x_j x_{j+1} - 2 x_j - 2 x_{j+1} + 1
        3 => Arc::new(move |x: &[f64]| {
            x[j] * x[j] + x[j + 1] * x[j + 1] + x[j] * x[j + 1] - 2.0 * x[j] - 2.0 * x[j + 1] + 1.0
        }),
        // x_j^2 + x_{j+1}^2 + x_j x_{j+1} - 1
        4 => Arc::new(move |x: &[f64]| x[j] * x[j] + x[j + 1] * x[j + 1] + x[j] * x[j + 1] - 1.0),
        // (3 - 0.5 x_{j+1}) x_{j+1} - x_j - 2 x_{j+2} + 1
        5 => Arc::new(move |x: &[f64]| {
            (3.0 - 0.5 * x[j + 1]) * x[j + 1] - x[j] - 2.0 * x[j + 2] + 1.0
        }),
        // single constraint: sum of the family-5 terms over i = 1..n-2
        6 => Arc::new(move |x: &[f64]| {
            (0..n - 2)
                .map(|i| (3.0 - 0.5 * x[i + 1]) * x[i + 1] - x[i] - 2.0 * x[i + 2] + 1.0)
                .sum()
        }),
        _ => unreachable!("family validated by family_p"),
    }
}

/// Appends the constraints of `family` (1..=6) to a bound-constrained base
/// problem. Objectives and bounds are unchanged; the family's conventional
/// starting point is attached as the problem's default start.
pub fn apply_constraint_family(base: &Problem, family: u8) -> Result<Problem, ProblemError> {
    if base.p() != 0 {
        return Err(ProblemError::BaseNotBoundConstrained(base.p()));
    }
    let n = base.n();
    let p = family_p(family, n)?;
    let constraints: Vec<ScalarFn> = (0..p).map(|j| family_constraint(family, j, n)).collect();
    let mut out = base.clone();
    out.constraints = constraints;
    out.name = format!("{}_g{}", base.name(), family);
    out.default_start = Some(suggested_start(family, n)?);
    Ok(out)
}

/// Conventional constant starting point for each constraint family.
pub fn suggested_start(family: u8, n: usize) -> Result<Vec<f64>, ProblemError> {
    let value = match family {
        1 => 1.0,
        2 | 5 | 6 => 2.0,
        3 => 0.5,
        4 => 0.0,
        _ => return Err(ProblemError::UnknownFamily(family)),
    };
    Ok(vec![value; n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::builtin_problem_with_dim;

    fn base(n: usize) -> Problem {
        builtin_problem_with_dim("ZDT1", Some(n)).unwrap()
    }

    #[test]
    fn family_counts() {
        for (family, expect) in [(1u8, 2usize), (2, 2), (3, 3), (4, 3), (5, 2), (6, 1)] {
            let p = apply_constraint_family(&base(4), family).unwrap();
            assert_eq!(p.p(), expect, "family {family}");
        }
    }

    #[test]
    fn family_needs_three_variables() {
        let two = Problem::new(
            "tiny",
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![Arc::new(|x: &[f64]| x[0]), Arc::new(|x: &[f64]| x[1])],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            apply_constraint_family(&two, 1),
            Err(ProblemError::FamilyDimension { .. })
        ));
    }

    #[test]
    fn family_requires_bound_constrained_base() {
        let constrained = apply_constraint_family(&base(4), 1).unwrap();
        assert!(matches!(
            apply_constraint_family(&constrained, 2),
            Err(ProblemError::BaseNotBoundConstrained(2))
        ));
    }

    #[test]
    fn family1_at_ones_gives_minus_one_each() {
        let p = apply_constraint_family(&base(4), 1).unwrap();
        let c = p.constraint_values(&[1.0; 4]);
        assert_eq!(c.len(), 2);
        for v in c {
            assert!((v - (-1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn family2_at_twos_n3() {
        // MOP2 admits the 2-vector inside its bounds
        let mop2_base = builtin_problem_with_dim("MOP2", Some(3)).unwrap();
        let p = apply_constraint_family(&mop2_base, 2).unwrap();
        let c = p.constraint_values(&[2.0; 3]);
        assert_eq!(c.len(), 1);
        assert!((c[0] - (-5.5)).abs() < 1e-12);
    }

    #[test]
    fn family4_at_zeros_gives_minus_one_each() {
        let p = apply_constraint_family(&base(3), 4).unwrap();
        let c = p.constraint_values(&[0.0; 3]);
        assert_eq!(c.len(), 2);
        for v in c {
            assert!((v - (-1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn suggested_start_values() {
        assert_eq!(suggested_start(3, 5).unwrap(), vec![0.5; 5]);
        assert_eq!(suggested_start(4, 3).unwrap(), vec![0.0; 3]);
        assert_eq!(suggested_start(1, 4).unwrap(), vec![1.0; 4]);
        for fam in [2u8, 5, 6] {
            assert_eq!(suggested_start(fam, 3).unwrap(), vec![2.0; 3]);
        }
        assert!(suggested_start(7, 3).is_err());
    }

    #[test]
    fn starts_are_feasible_for_families_1_2_4_with_n4() {
        for family in [1u8, 2, 4] {
            let p = apply_constraint_family(&base(4), family).unwrap();
            let start = suggested_start(family, 4).unwrap();
            let h = p.violation_at(&start);
            assert_eq!(h, 0.0, "family {family} start should satisfy constraints");
        }
    }

    #[test]
    fn family6_is_single_sum() {
        let p = apply_constraint_family(&base(5), 6).unwrap();
        assert_eq!(p.p(), 1);
        // sum of family-5 terms at the 2-vector: each term is
        // (3 - 1) * 2 - 2 - 4 + 1 = -1, three terms for n = 5
        let c = p.constraint_values(&[2.0; 5]);
        assert!((c[0] - (-3.0)).abs() < 1e-12);
    }
}
