//! Resolving problem references: catalog names (with an optional `@dim`
//! suffix), or paths to problem config files.

use std::path::Path;

use dmsfir::problem::{
    apply_constraint_family, builtin_names, builtin_problem_with_dim, parse_problem_config, HMax,
    Problem,
};

use crate::CmdError;

/// Resolves a problem reference and applies dimension/family/h_max options.
/// Returns the problem and its identifier for output paths and tables.
pub fn resolve_problem(
    reference: &str,
    dim: Option<usize>,
    family: u8,
    h_max: &str,
) -> Result<(Problem, String), CmdError> {
    let (mut problem, mut id) = if Path::new(reference).is_file() {
        let text = std::fs::read_to_string(reference)
            .map_err(|e| CmdError::config(format!("cannot read '{reference}': {e}")))?;
        let problem = parse_problem_config(&text)
            .map_err(|e| CmdError::config(format!("{reference}: {e}")))?;
        let id = problem.name().to_string();
        (problem, id)
    } else {
        let (name, ref_dim) = split_dim_suffix(reference)?;
        let dim = dim.or(ref_dim);
        let problem =
            builtin_problem_with_dim(name, dim).map_err(|e| CmdError::config(e.to_string()))?;
        let id = match dim {
            Some(d) => format!("{}_n{}", problem.name(), d),
            None => problem.name().to_string(),
        };
        (problem, id)
    };

    if family > 0 {
        if problem.p() > 0 {
            return Err(CmdError::config(format!(
                "problem '{id}' already has constraints; --family needs a bound-constrained base"
            )));
        }
        problem = apply_constraint_family(&problem, family)
            .map_err(|e| CmdError::config(e.to_string()))?;
        id = format!("{id}_g{family}");
    }

    match h_max.trim() {
        "auto" | "" => {}
        value => {
            let v: f64 = value
                .parse()
                .map_err(|_| CmdError::config(format!("invalid --h-max '{value}'")))?;
            if v <= 0.0 || v.is_nan() {
                return Err(CmdError::config("--h-max must be positive".to_string()));
            }
            problem = problem.with_h_max(HMax::Value(v));
        }
    }

    Ok((problem, id))
}

/// Splits `NAME@DIM` references; plain names pass through.
fn split_dim_suffix(reference: &str) -> Result<(&str, Option<usize>), CmdError> {
    match reference.split_once('@') {
        None => Ok((reference, None)),
        Some((name, dim)) => {
            let dim: usize = dim
                .parse()
                .map_err(|_| CmdError::config(format!("invalid dimension in '{reference}'")))?;
            Ok((name, Some(dim)))
        }
    }
}

pub fn print_catalog() {
    println!("built-in problems (reference as NAME or NAME@DIM):");
    for name in builtin_names() {
        let p = builtin_problem_with_dim(name, None).expect("catalog entry builds");
        println!(
            "  {:<8} n = {:>2}, m = {}, bounds [{}, {}] ...",
            name,
            p.n(),
            p.m(),
            p.lower()[0],
            p.upper()[0],
        );
    }
    println!("constraint families: --family 1..6 (0 = bound-constrained base)");
}
