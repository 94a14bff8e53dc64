//! The nondominated list: (point; step size) pairs compared over an extended
//! objective vector, with plain and sufficient-decrease dominance and the
//! success classification of iterations.

use crate::problem::Evaluation;

/// Forcing function for sufficient-decrease globalization. `Zero` is the
/// integer-lattice regime (plain dominance); `Power` is
/// `rho(t) = eta1 * t^(1 + eta2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Forcing {
    Zero,
    Power { eta1: f64, eta2: f64 },
}

impl Forcing {
    /// The conventional power forcing used with dense direction sets.
    pub fn power_default() -> Self {
        Forcing::Power {
            eta1: 1e-4,
            eta2: 1.0,
        }
    }

    /// Acceptance margin at the given step size.
    pub fn margin(&self, alpha: f64) -> f64 {
        match *self {
            Forcing::Zero => 0.0,
            Forcing::Power { eta1, eta2 } => eta1 * alpha.powf(1.0 + eta2),
        }
    }
}

/// Componentwise dominance with an optional sufficient-decrease margin.
///
/// With `margin == 0` this is plain Pareto dominance: `a <= b` componentwise
/// and `a != b`. With `margin > 0` it is the sufficient-decrease relation
/// `a - margin <= b` componentwise, where equality is allowed.
pub fn dominates(a: &[f64], b: &[f64], margin: f64) -> bool {
    debug_assert_eq!(a.len(), b.len());
    if margin > 0.0 {
        a.iter().zip(b).all(|(&ai, &bi)| ai - margin <= bi)
    } else {
        a.iter().zip(b).all(|(&ai, &bi)| ai <= bi) && a != b
    }
}

/// Maximal mutually-nondominated subset under plain dominance, preserving
/// the input order; exact duplicates collapse to the first occurrence.
pub fn filter_front(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    filter_front_indices(points)
        .into_iter()
        .map(|i| points[i].clone())
        .collect()
}

/// Indices of the nondominated subset, in input order.
pub fn filter_front_indices(points: &[Vec<f64>]) -> Vec<usize> {
    let mut keep = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if dominates(q, p, 0.0) {
                continue 'outer;
            }
            // duplicates survive only through their first occurrence
            if q == p && j < i {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    keep
}

/// One stored (point; step size) pair. Only `Ok`-status evaluations are ever
/// stored; `key` is the vector the list is ordered by (objectives plus the
/// violation component for the filter solver, objectives alone for the
/// extreme-barrier baseline).
#[derive(Debug, Clone)]
pub struct ArchiveEntry {
    /// Insertion index, unique within one archive; ties break toward the
    /// lowest id.
    pub id: u64,
    pub x: Vec<f64>,
    pub alpha: f64,
    pub eval: Evaluation,
    pub key: Vec<f64>,
}

impl ArchiveEntry {
    pub fn new(x: Vec<f64>, alpha: f64, eval: Evaluation, key: Vec<f64>) -> Self {
        debug_assert!(eval.is_ok());
        debug_assert!(alpha > 0.0);
        debug_assert!(key.iter().all(|v| v.is_finite()));
        ArchiveEntry {
            id: 0,
            x,
            alpha,
            eval,
            key,
        }
    }
}

/// Iteration classification after a merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOutcome {
    Success,
    Unsuccess,
}

/// The list of mutually nondominated entries, in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    next_id: u64,
}

impl Archive {
    pub fn new() -> Self {
        Archive::default()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&ArchiveEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn contains(&self, id: u64) -> bool {
        self.get(id).is_some()
    }

    /// Merges candidates in the given order. A candidate is rejected iff a
    /// current member dominates it with the margin `forcing.margin(alpha)`
    /// (exact key duplicates are always rejected); accepted candidates are
    /// appended and remove the members they plainly dominate. Returns the ids
    /// of the accepted entries; the iteration is successful iff the list
    /// changed, i.e. iff this is nonempty.
    pub fn merge_candidates(
        &mut self,
        candidates: Vec<ArchiveEntry>,
        alpha: f64,
        forcing: &Forcing,
    ) -> Vec<u64> {
        let margin = forcing.margin(alpha);
        let mut accepted = Vec::new();
        for mut candidate in candidates {
            let rejected = self
                .entries
                .iter()
                .any(|e| dominates(&e.key, &candidate.key, margin) || e.key == candidate.key);
            if rejected {
                continue;
            }
            self.entries
                .retain(|e| !dominates(&candidate.key, &e.key, 0.0));
            candidate.id = self.next_id;
            self.next_id += 1;
            accepted.push(candidate.id);
            self.entries.push(candidate);
        }
        accepted
    }

    /// Step-size bookkeeping after an iteration. On success all newly added
    /// entries plus the center (when still listed) carry `alpha_new`; on
    /// unsuccess only the center shrinks, and it must still be listed since
    /// unsuccessful iterations never remove entries.
    pub fn apply_step_update(
        &mut self,
        outcome: MergeOutcome,
        center_id: u64,
        new_ids: &[u64],
        alpha_new: f64,
    ) {
        debug_assert!(alpha_new > 0.0);
        match outcome {
            MergeOutcome::Success => {
                for e in &mut self.entries {
                    if e.id == center_id || new_ids.contains(&e.id) {
                        e.alpha = alpha_new;
                    }
                }
            }
            MergeOutcome::Unsuccess => {
                let center = self
                    .entries
                    .iter_mut()
                    .find(|e| e.id == center_id)
                    .expect("unsuccessful iteration must keep its center listed");
                center.alpha = alpha_new;
            }
        }
    }

    /// True when every pair of entries is mutually nondominated under plain
    /// dominance. O(k^2); used by tests and debug checks.
    pub fn is_mutually_nondominated(&self) -> bool {
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                if dominates(&a.key, &b.key, 0.0) || dominates(&b.key, &a.key, 0.0) {
                    return false;
                }
            }
        }
        true
    }
}
