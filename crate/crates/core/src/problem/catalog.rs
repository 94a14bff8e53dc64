//! Built-in biobjective test problems.
//!
//! Formulas follow the standard literature definitions; the default
//! dimensions are the conventional ones for this benchmark collection.
//!
//! | name    | n  | bounds                    |
//! |---------|----|---------------------------|
//! | ZDT1    | 30 | [0,1]^n                   |
//! | ZDT2    | 30 | [0,1]^n                   |
//! | ZDT3    | 30 | [0,1]^n                   |
//! | ZDT4    | 10 | x1 in [0,1], rest [-5,5]  |
//! | ZDT6    | 10 | [0,1]^n                   |
//! | MOP2    | 4  | [-4,4]^n                  |
//! | SK2     | 4  | [-10,10]^4                |
//! | Kursawe | 3  | [-5,5]^n                  |
//!
//! ZDT family (Zitzler-Deb-Thiele): f1 = x1 (ZDT6 uses an exponential ramp),
//! f2 = g * h(f1, g) with the usual g and h per variant. MOP2 is the
//! Fonseca-Fleming two-exponential problem. Kursawe is the classic
//! disconnected-front problem. SK2 is implemented as
//! f1 = -(x1-2)^2 - (x2+3)^2 - (x3-5)^2 - (x4-4)^2 + 5 and
//! f2 = sum_i (x_i^2 + sin(x_i)); SK2 variants differ across sources, and
//! this is the variant this crate commits to.

use std::f64::consts::PI;
use std::sync::Arc;

use super::{Problem, ProblemError, ScalarFn};

struct CatalogEntry {
    name: &'static str,
    default_n: usize,
    min_n: usize,
    build: fn(usize) -> Problem,
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "ZDT1",
        default_n: 30,
        min_n: 2,
        build: zdt1,
    },
    CatalogEntry {
        name: "ZDT2",
        default_n: 30,
        min_n: 2,
        build: zdt2,
    },
    CatalogEntry {
        name: "ZDT3",
        default_n: 30,
        min_n: 2,
        build: zdt3,
    },
    CatalogEntry {
        name: "ZDT4",
        default_n: 10,
        min_n: 2,
        build: zdt4,
    },
    CatalogEntry {
        name: "ZDT6",
        default_n: 10,
        min_n: 2,
        build: zdt6,
    },
    CatalogEntry {
        name: "MOP2",
        default_n: 4,
        min_n: 1,
        build: mop2,
    },
    CatalogEntry {
        name: "SK2",
        default_n: 4,
        min_n: 4,
        build: sk2,
    },
    CatalogEntry {
        name: "Kursawe",
        default_n: 3,
        min_n: 2,
        build: kursawe,
    },
];

/// Names of the built-in problems, in catalog order.
pub fn builtin_names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

/// Builds a built-in problem at its conventional dimension.
pub fn builtin_problem(name: &str) -> Result<Problem, ProblemError> {
    builtin_problem_with_dim(name, None)
}

/// Builds a built-in problem, optionally overriding the dimension (useful
/// for desk-scale runs, e.g. ZDT1 at n = 5).
pub fn builtin_problem_with_dim(name: &str, n: Option<usize>) -> Result<Problem, ProblemError> {
    let entry = CATALOG
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| ProblemError::UnknownName {
            name: name.to_string(),
            available: builtin_names().join(", "),
        })?;
    let n = n.unwrap_or(entry.default_n);
    if n < entry.min_n || (entry.name == "SK2" && n != 4) {
        return Err(ProblemError::BadDimension {
            name: entry.name.to_string(),
            n,
        });
    }
    Ok((entry.build)(n))
}

fn zdt_g(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    1.0 + 9.0 * x[1..].iter().sum::<f64>() / (n - 1.0)
}

fn zdt1(n: usize) -> Problem {
    let f1: ScalarFn = Arc::new(|x: &[f64]| x[0]);
    let f2: ScalarFn = Arc::new(|x: &[f64]| {
        let g = zdt_g(x);
        g * (1.0 - (x[0] / g).sqrt())
    });
    Problem::new("ZDT1", vec![0.0; n], vec![1.0; n], vec![f1, f2], vec![]).unwrap()
}

fn zdt2(n: usize) -> Problem {
    let f1: ScalarFn = Arc::new(|x: &[f64]| x[0]);
    let f2: ScalarFn = Arc::new(|x: &[f64]| {
        let g = zdt_g(x);
        g * (1.0 - (x[0] / g).powi(2))
    });
    Problem::new("ZDT2", vec![0.0; n], vec![1.0; n], vec![f1, f2], vec![]).unwrap()
}

fn zdt3(n: usize) -> Problem {
    let f1: ScalarFn = Arc::new(|x: &[f64]| x[0]);
    let f2: ScalarFn = Arc::new(|x: &[f64]| {
        let g = zdt_g(x);
        let r = x[0] / g;
        g * (1.0 - r.sqrt() - r * (10.0 * PI * x[0]).sin())
    });
    Problem::new("ZDT3", vec![0.0; n], vec![1.0; n], vec![f1, f2], vec![]).unwrap()
}

fn zdt4(n: usize) -> Problem {
    let f1: ScalarFn = Arc::new(|x: &[f64]| x[0]);
    let f2: ScalarFn = Arc::new(|x: &[f64]| {
        let g = 1.0
            + 10.0 * (x.len() as f64 - 1.0)
            + x[1..]
                .iter()
                .map(|&v| v * v - 10.0 * (4.0 * PI * v).cos())
                .sum::<f64>();
        g * (1.0 - (x[0] / g).sqrt())
    });
    let mut lower = vec![-5.0; n];
    let mut upper = vec![5.0; n];
    lower[0] = 0.0;
    upper[0] = 1.0;
    Problem::new("ZDT4", lower, upper, vec![f1, f2], vec![]).unwrap()
}

fn zdt6(n: usize) -> Problem {
    let f1: ScalarFn =
        Arc::new(|x: &[f64]| 1.0 - (-4.0 * x[0]).exp() * (6.0 * PI * x[0]).sin().powi(6));
    let f2: ScalarFn = Arc::new(|x: &[f64]| {
        let n = x.len() as f64;
        let g = 1.0 + 9.0 * (x[1..].iter().sum::<f64>() / (n - 1.0)).powf(0.25);
        let f1 = 1.0 - (-4.0 * x[0]).exp() * (6.0 * PI * x[0]).sin().powi(6);
        g * (1.0 - (f1 / g).powi(2))
    });
    Problem::new("ZDT6", vec![0.0; n], vec![1.0; n], vec![f1, f2], vec![]).unwrap()
}

fn mop2(n: usize) -> Problem {
    let shift = 1.0 / (n as f64).sqrt();
    let f1: ScalarFn = Arc::new(move |x: &[f64]| {
        1.0 - (-x.iter().map(|&v| (v - shift).powi(2)).sum::<f64>()).exp()
    });
    let f2: ScalarFn = Arc::new(move |x: &[f64]| {
        1.0 - (-x.iter().map(|&v| (v + shift).powi(2)).sum::<f64>()).exp()
    });
    Problem::new("MOP2", vec![-4.0; n], vec![4.0; n], vec![f1, f2], vec![]).unwrap()
}

fn sk2(_n: usize) -> Problem {
    // Fixed at n = 4 by definition.
    let f1: ScalarFn = Arc::new(|x: &[f64]| {
        -(x[0] - 2.0).powi(2) - (x[1] + 3.0).powi(2) - (x[2] - 5.0).powi(2) - (x[3] - 4.0).powi(2)
            + 5.0
    });
    let f2: ScalarFn = Arc::new(|x: &[f64]| x.iter().map(|&v| v * v + v.sin()).sum());
    Problem::new("SK2", vec![-10.0; 4], vec![10.0; 4], vec![f1, f2], vec![]).unwrap()
}

fn kursawe(n: usize) -> Problem {
    let f1: ScalarFn = Arc::new(|x: &[f64]| {
        x.windows(2)
            .map(|w| -10.0 * (-0.2 * (w[0] * w[0] + w[1] * w[1]).sqrt()).exp())
            .sum()
    });
    let f2: ScalarFn = Arc::new(|x: &[f64]| {
        x.iter()
            .map(|&v| v.abs().powf(0.8) + 5.0 * (v * v * v).sin())
            .sum()
    });
    Problem::new("Kursawe", vec![-5.0; n], vec![5.0; n], vec![f1, f2], vec![]).unwrap()
}
