//! Text config files describing external problems.
//!
//! UTF-8 `key = value` lines; `#` starts a comment; blank lines are ignored.
//! Keys:
//!
//! ```text
//! name = <identifier>
//! n = <positive integer>
//! lower = <real> [<real> ...]     # one value repeats across coordinates
//! upper = <real> [<real> ...]
//! objective.<k> = <expression>    # k = 1, 2, ...
//! constraint.<k> = <expression>   # optional
//! family = <1..6>                 # optional, appends a constraint family
//! h_max = auto | <real>           # optional, default auto
//! start = <real> [<real> ...]     # optional default starting point
//! ```
//!
//! Expressions use the language in [`super::expr`]. Decimal points are `.`
//! and exponent notation like `1e-3` is accepted.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::expr::Expr;
use super::{apply_constraint_family, HMax, Problem, ProblemError, ScalarFn};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', got '{text}'")]
    Malformed { line: usize, text: String },
    #[error("line {line}: {message}")]
    Value { line: usize, message: String },
    #[error("missing required key '{0}'")]
    MissingKey(&'static str),
    #[error("objective indices must be 1..=k without gaps, got {0:?}")]
    ObjectiveIndices(Vec<usize>),
    #[error("constraint indices must be 1..=k without gaps, got {0:?}")]
    ConstraintIndices(Vec<usize>),
    #[error("'family' cannot be combined with explicit 'constraint.*' entries")]
    FamilyWithConstraints,
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Parses a problem description from config-file text.
pub fn parse_problem_config(text: &str) -> Result<Problem, ConfigError> {
    let mut name: Option<String> = None;
    let mut n: Option<usize> = None;
    let mut lower: Option<(usize, Vec<f64>)> = None;
    let mut upper: Option<(usize, Vec<f64>)> = None;
    let mut objectives: BTreeMap<usize, (usize, Expr)> = BTreeMap::new();
    let mut constraints: BTreeMap<usize, (usize, Expr)> = BTreeMap::new();
    let mut family: Option<(usize, u8)> = None;
    let mut h_max = HMax::Auto;
    let mut start: Option<(usize, Vec<f64>)> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Malformed {
                line,
                text: content.to_string(),
            })?;
        let key = key.trim();
        let value = value.trim();
        let value_err = |message: String| ConfigError::Value { line, message };

        match key {
            "name" => name = Some(value.to_string()),
            "n" => {
                let parsed = value
                    .parse::<usize>()
                    .map_err(|_| value_err(format!("invalid dimension '{value}'")))?;
                if parsed == 0 {
                    return Err(value_err("dimension must be positive".into()));
                }
                n = Some(parsed);
            }
            "lower" => lower = Some((line, parse_reals(value).map_err(value_err)?)),
            "upper" => upper = Some((line, parse_reals(value).map_err(value_err)?)),
            "start" => start = Some((line, parse_reals(value).map_err(value_err)?)),
            "family" => {
                let fam = value
                    .parse::<u8>()
                    .ok()
                    .filter(|f| (1..=6).contains(f))
                    .ok_or_else(|| value_err(format!("family must be 1..6, got '{value}'")))?;
                family = Some((line, fam));
            }
            "h_max" => {
                h_max = if value.eq_ignore_ascii_case("auto") {
                    HMax::Auto
                } else {
                    let v = value
                        .parse::<f64>()
                        .map_err(|_| value_err(format!("invalid h_max '{value}'")))?;
                    if v <= 0.0 || v.is_nan() {
                        return Err(value_err("h_max must be positive".into()));
                    }
                    HMax::Value(v)
                };
            }
            _ => {
                if let Some(idx) = key.strip_prefix("objective.") {
                    let k = idx
                        .parse::<usize>()
                        .map_err(|_| value_err(format!("bad objective index '{idx}'")))?;
                    let expr =
                        Expr::parse(value).map_err(|e| value_err(format!("objective.{k}: {e}")))?;
                    objectives.insert(k, (line, expr));
                } else if let Some(idx) = key.strip_prefix("constraint.") {
                    let k = idx
                        .parse::<usize>()
                        .map_err(|_| value_err(format!("bad constraint index '{idx}'")))?;
                    let expr = Expr::parse(value)
                        .map_err(|e| value_err(format!("constraint.{k}: {e}")))?;
                    constraints.insert(k, (line, expr));
                } else {
                    return Err(value_err(format!("unknown key '{key}'")));
                }
            }
        }
    }

    let name = name.ok_or(ConfigError::MissingKey("name"))?;
    let n = n.ok_or(ConfigError::MissingKey("n"))?;
    let (lower_line, lower) = lower.ok_or(ConfigError::MissingKey("lower"))?;
    let (upper_line, upper) = upper.ok_or(ConfigError::MissingKey("upper"))?;
    if objectives.is_empty() {
        return Err(ConfigError::MissingKey("objective.1"));
    }
    if family.is_some() && !constraints.is_empty() {
        return Err(ConfigError::FamilyWithConstraints);
    }

    let lower = broadcast(lower, n).map_err(|m| ConfigError::Value {
        line: lower_line,
        message: m,
    })?;
    let upper = broadcast(upper, n).map_err(|m| ConfigError::Value {
        line: upper_line,
        message: m,
    })?;

    let keys: Vec<usize> = objectives.keys().copied().collect();
    if keys != (1..=keys.len()).collect::<Vec<_>>() {
        return Err(ConfigError::ObjectiveIndices(keys));
    }
    let keys: Vec<usize> = constraints.keys().copied().collect();
    if !keys.is_empty() && keys != (1..=keys.len()).collect::<Vec<_>>() {
        return Err(ConfigError::ConstraintIndices(keys));
    }

    let objective_fns: Vec<ScalarFn> = objectives
        .into_values()
        .map(|(_, expr)| expr_fn(expr))
        .collect();
    let constraint_fns: Vec<ScalarFn> = constraints
        .into_values()
        .map(|(_, expr)| expr_fn(expr))
        .collect();

    let mut problem =
        Problem::new(name, lower, upper, objective_fns, constraint_fns)?.with_h_max(h_max);
    if let Some((line, pt)) = start {
        let pt = broadcast(pt, n).map_err(|m| ConfigError::Value { line, message: m })?;
        problem = problem.with_default_start(pt);
    }
    if let Some((_, fam)) = family {
        problem = apply_constraint_family(&problem, fam)?;
    }
    Ok(problem)
}

/// Expression evaluation failures become NaN so the evaluation layer rejects
/// the point like a barrier point.
fn expr_fn(expr: Expr) -> ScalarFn {
    Arc::new(move |x: &[f64]| expr.eval_at(x).unwrap_or(f64::NAN))
}

fn parse_reals(value: &str) -> Result<Vec<f64>, String> {
    let parts: Result<Vec<f64>, _> = value.split_whitespace().map(str::parse::<f64>).collect();
    let parts = parts.map_err(|_| format!("invalid real list '{value}'"))?;
    if parts.is_empty() {
        return Err("empty value".into());
    }
    Ok(parts)
}

fn broadcast(values: Vec<f64>, n: usize) -> Result<Vec<f64>, String> {
    if values.len() == n {
        Ok(values)
    } else if values.len() == 1 {
        Ok(vec![values[0]; n])
    } else {
        Err(format!("expected 1 or {n} values, got {}", values.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::EvalStatus;

    const TOY: &str = "\
# biobjective toy with one linear constraint
name = segment
n = 2
lower = 0
upper = 1
objective.1 = x[1]
objective.2 = 1 - x[1]
constraint.1 = 0.25 - x[1]
h_max = auto
";

    #[test]
    fn parses_toy_problem() {
        let p = parse_problem_config(TOY).unwrap();
        assert_eq!(p.name(), "segment");
        assert_eq!((p.n(), p.m(), p.p()), (2, 2, 1));
        assert_eq!(p.lower(), &[0.0, 0.0]);
        assert_eq!(p.upper(), &[1.0, 1.0]);
        let e = p.evaluate(&[0.5, 0.5], 10.0);
        assert_eq!(e.status, EvalStatus::Ok);
        assert_eq!(e.f, vec![0.5, 0.5]);
        assert_eq!(e.h, 0.0);
        // violated at x1 = 0: h = 0.25^2
        assert!((p.violation_at(&[0.0, 0.0]) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn family_key_appends_constraints() {
        let text = "\
name = zdt1like
n = 4
lower = 0
upper = 1
objective.1 = x[1]
objective.2 = 1 - sqrt(x[1]) + 9 * sum(i, 2, n, x[i]) / (n - 1)
family = 4
";
        let p = parse_problem_config(text).unwrap();
        assert_eq!(p.p(), 3);
        assert_eq!(p.name(), "zdt1like_g4");
        assert_eq!(p.default_start(), Some(&[0.0; 4][..]));
    }

    #[test]
    fn family_conflicts_with_constraints() {
        let text = format!("{TOY}family = 1\n");
        assert!(matches!(
            parse_problem_config(&text),
            Err(ConfigError::FamilyWithConstraints)
        ));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "name = a\nn = 2\nlower = 0\nupper = oops\nobjective.1 = x1\nobjective.2 = x2\n";
        match parse_problem_config(text) {
            Err(ConfigError::Value { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected value error, got {other:?}"),
        }
    }

    #[test]
    fn missing_keys_and_gaps() {
        assert!(matches!(
            parse_problem_config("name = a\n"),
            Err(ConfigError::MissingKey("n"))
        ));
        let gap = "name = a\nn = 2\nlower = 0\nupper = 1\nobjective.1 = x1\nobjective.3 = x2\n";
        assert!(matches!(
            parse_problem_config(gap),
            Err(ConfigError::ObjectiveIndices(_))
        ));
    }

    #[test]
    fn expression_failure_becomes_nan_rejection() {
        let text = "\
name = bad
n = 1
lower = 0
upper = 1
objective.1 = x[3]
objective.2 = x[1]
";
        let p = parse_problem_config(text).unwrap();
        let e = p.evaluate(&[0.5], 10.0);
        assert_eq!(e.status, EvalStatus::NanObjective);
    }

    #[test]
    fn explicit_h_max() {
        let text = TOY.replace("h_max = auto", "h_max = 2.5");
        let p = parse_problem_config(&text).unwrap();
        assert_eq!(p.h_max(), HMax::Value(2.5));
    }
}
