//! Positive spanning sets for polling: the coordinate basis and an
//! asymptotically dense family built from Halton points via Householder
//! reflections, plus the step-size update rule and mesh rounding.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DirectionError {
    #[error("step rule needs 0 < beta1 <= beta2 < 1 <= gamma, got beta1={beta1}, beta2={beta2}, gamma={gamma}")]
    BadStepRule { beta1: f64, beta2: f64, gamma: f64 },
    #[error("lattice step rule needs beta1, beta2 and gamma to be integer powers of a rational tau (tau = 2 supported), got beta1={beta1}, beta2={beta2}, gamma={gamma}")]
    NotLattice { beta1: f64, beta2: f64, gamma: f64 },
}

/// Which family of positive spanning sets the poll step draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionKind {
    /// The maximal basis `{e_1, ..., e_n, -e_1, ..., -e_n}`.
    Coordinate,
    /// Householder reflections of normalized Halton points; the generated
    /// normalized directions are dense in the unit sphere as the index grows.
    HaltonDense,
}

/// An ordered set of poll directions with the norm bounds they satisfy.
#[derive(Debug, Clone)]
pub struct PositiveSpanningSet {
    pub dirs: Vec<Vec<f64>>,
    pub d_min: f64,
    pub d_max: f64,
    pub kind: DirectionKind,
    /// Generation counter for dense sets (0 for the coordinate set).
    pub index: u64,
}

impl PositiveSpanningSet {
    pub fn max_norm(&self) -> f64 {
        self.dirs.iter().map(|d| norm(d)).fold(0.0_f64, f64::max)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

/// The 2n coordinate directions `e_1, ..., e_n, -e_1, ..., -e_n`.
pub fn coordinate_set(n: usize) -> PositiveSpanningSet {
    assert!(n >= 1);
    let mut dirs = Vec::with_capacity(2 * n);
    for sign in [1.0, -1.0] {
        for i in 0..n {
            let mut d = vec![0.0; n];
            d[i] = sign;
            dirs.push(d);
        }
    }
    PositiveSpanningSet {
        dirs,
        d_min: 1.0,
        d_max: 1.0,
        kind: DirectionKind::Coordinate,
        index: 0,
    }
}

/// First `k` primes, for Halton bases.
fn primes(k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while out.len() < k {
        if out.iter().all(|&p| !candidate.is_multiple_of(p)) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

/// Radical inverse of `index` in the given base: the classic Halton
/// coordinate in (0, 1) for index >= 1.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut denom = 1.0;
    while index > 0 {
        denom *= base as f64;
        result += (index % base) as f64 / denom;
        index /= base;
    }
    result
}

/// The `index`-th Halton point in (0,1)^n over the first n prime bases.
pub fn halton_point(n: usize, index: u64) -> Vec<f64> {
    debug_assert!(index >= 1);
    primes(n)
        .into_iter()
        .map(|b| radical_inverse(index, b))
        .collect()
}

/// Positive spanning set of 2n unit directions built from the `index`-th
/// Halton point: `v = (2u - 1)/||2u - 1||`, `H = I - 2 v v^T`, directions are
/// the columns of `H` and their negatives. A (measure-zero) zero vector
/// `2u - 1` skips to the next index.
pub fn halton_set(n: usize, index: u64) -> PositiveSpanningSet {
    assert!(n >= 1);
    assert!(index >= 1);
    let mut index = index;
    let v = loop {
        let u = halton_point(n, index);
        let centered: Vec<f64> = u.iter().map(|&ui| 2.0 * ui - 1.0).collect();
        let len = norm(&centered);
        if len > 0.0 {
            break centered.iter().map(|&c| c / len).collect::<Vec<f64>>();
        }
        index += 1;
    };

    // Columns of the Householder matrix are orthonormal; normalize anyway to
    // keep unit norms exact against rounding.
    let mut dirs = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut col: Vec<f64> = (0..n)
            .map(|i| {
                let identity = if i == j { 1.0 } else { 0.0 };
                identity - 2.0 * v[i] * v[j]
            })
            .collect();
        let len = norm(&col);
        for c in &mut col {
            *c /= len;
        }
        dirs.push(col);
    }
    for j in 0..n {
        dirs.push(dirs[j].iter().map(|&c| -c).collect());
    }
    PositiveSpanningSet {
        dirs,
        d_min: 1.0,
        d_max: 1.0,
        kind: DirectionKind::HaltonDense,
        index,
    }
}

/// Step-size update coefficients: shrink into `[beta1, beta2]` on
/// unsuccessful iterations, expand into `[1, gamma]` on successful ones.
/// In lattice mode the factors must be integer powers of tau = 2 so the
/// iterates stay on a dyadic mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRule {
    pub beta1: f64,
    pub beta2: f64,
    pub gamma: f64,
    pub lattice: bool,
}

impl Default for StepRule {
    fn default() -> Self {
        // halve on unsuccess, keep constant on success
        StepRule {
            beta1: 0.5,
            beta2: 0.5,
            gamma: 1.0,
            lattice: true,
        }
    }
}

impl StepRule {
    pub fn validate(&self) -> Result<(), DirectionError> {
        let ok =
            0.0 < self.beta1 && self.beta1 <= self.beta2 && self.beta2 < 1.0 && self.gamma >= 1.0;
        if !ok {
            return Err(DirectionError::BadStepRule {
                beta1: self.beta1,
                beta2: self.beta2,
                gamma: self.gamma,
            });
        }
        if self.lattice {
            let pow2 = |v: f64| v > 0.0 && v.log2().fract() == 0.0;
            if !(pow2(self.beta1) && pow2(self.beta2) && pow2(self.gamma)) {
                return Err(DirectionError::NotLattice {
                    beta1: self.beta1,
                    beta2: self.beta2,
                    gamma: self.gamma,
                });
            }
        }
        Ok(())
    }
}

/// Iteration outcome driving the step-size update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Success,
    Unsuccess,
}

/// New step size after an iteration: the deterministic choices are the top
/// of each allowed interval (`gamma * alpha` on success, `beta2 * alpha` on
/// unsuccess).
pub fn step_update(alpha: f64, outcome: StepOutcome, rule: &StepRule) -> f64 {
    debug_assert!(alpha > 0.0);
    match outcome {
        StepOutcome::Success => alpha * rule.gamma,
        StepOutcome::Unsuccess => alpha * rule.beta2,
    }
}

/// Rounds `y` to the nearest point of the coordinate mesh
/// `{center + alpha * z, z integer}` that stays inside the bounds.
pub fn round_to_mesh(
    y: &[f64],
    center: &[f64],
    alpha: f64,
    lower: &[f64],
    upper: &[f64],
) -> Vec<f64> {
    debug_assert!(alpha > 0.0);
    y.iter()
        .zip(center)
        .zip(lower.iter().zip(upper))
        .map(|((&yi, &ci), (&l, &u))| {
            let mut z = ((yi - ci) / alpha).round();
            // nearest representable multiples inside the box
            let z_lo = ((l - ci) / alpha).ceil();
            let z_hi = ((u - ci) / alpha).floor();
            if z_lo <= z_hi {
                z = z.clamp(z_lo, z_hi);
            }
            (ci + alpha * z).clamp(l, u)
        })
        .collect()
}
