//! Covering-based choice sets.
//!
//! On tournaments `x` covers `y` within `S` when `x` beats `y` and beats
//! every member of `S` that `y` beats. The `*_weak` variants accept majority
//! ties by reading covering as sign dominance: `x` beats `y` and
//! `sign g(x, z) >= sign g(y, z)` for every `z` in `S`. Both readings agree
//! whenever `S` carries no ties.

use crate::error::{Error, Result};
use crate::prefcore::{AltSet, ChoiceSet, FeasibleSet, MarginMatrix};

use super::game::bipartisan_on;

fn dominates(margins: &MarginMatrix, within: AltSet, x: usize, y: usize) -> bool {
    margins.beats(x, y)
        && within
            .iter()
            .all(|z| margins.get(x, z).signum() >= margins.get(y, z).signum())
}

fn check_members(within: AltSet, x: usize, y: usize) -> Result<()> {
    if within.contains(x) && within.contains(y) {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "{x} and {y} must both belong to {within:?}"
        )))
    }
}

/// Whether `x` covers `y` within `within`, which must be a tournament.
pub fn covers(margins: &MarginMatrix, within: AltSet, x: usize, y: usize) -> Result<bool> {
    margins.require_tournament(within)?;
    check_members(within, x, y)?;
    Ok(dominates(margins, within, x, y))
}

/// [`covers`] for weak tournaments.
pub fn covers_weak(margins: &MarginMatrix, within: AltSet, x: usize, y: usize) -> Result<bool> {
    check_members(within, x, y)?;
    Ok(dominates(margins, within, x, y))
}

fn uncovered_in(margins: &MarginMatrix, within: AltSet) -> AltSet {
    within
        .iter()
        .filter(|&x| !within.iter().any(|y| dominates(margins, within, y, x)))
        .collect()
}

/// Alternatives of `feasible` not covered by any other member.
pub fn uncovered_set(margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
    margins.require_tournament(feasible.set())?;
    uncovered_set_weak(margins, feasible)
}

/// [`uncovered_set`] for weak tournaments.
pub fn uncovered_set_weak(margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
    // Sign dominance is a strict partial order, so maximal elements exist.
    ChoiceSet::new(uncovered_in(margins, feasible.set()), feasible)
}

fn covering_in(margins: &MarginMatrix, candidate: AltSet, feasible: AltSet) -> bool {
    feasible.difference(candidate).iter().all(|x| {
        let ext = candidate.insert(x);
        candidate.iter().any(|b| dominates(margins, ext, b, x))
    })
}

/// Whether `candidate` is a covering set of `feasible`: every outsider is
/// covered by some member of `candidate` within `candidate ∪ {outsider}`.
pub fn is_covering_set(
    margins: &MarginMatrix,
    candidate: AltSet,
    feasible: FeasibleSet,
) -> Result<bool> {
    margins.require_tournament(feasible.set())?;
    is_covering_set_weak(margins, candidate, feasible)
}

/// [`is_covering_set`] for weak tournaments.
pub fn is_covering_set_weak(
    margins: &MarginMatrix,
    candidate: AltSet,
    feasible: FeasibleSet,
) -> Result<bool> {
    if candidate.is_empty() || !candidate.is_subset(feasible.set()) {
        return Err(Error::Validation(format!(
            "covering-set candidate {candidate:?} must be a nonempty subset of {:?}",
            feasible.set()
        )));
    }
    Ok(covering_in(margins, candidate, feasible.set()))
}

/// The minimal covering set of a tournament, by subset enumeration in
/// increasing size.
pub fn minimal_covering_set(margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
    margins.require_tournament(feasible.set())?;
    minimal_covering_set_weak(margins, feasible)
}

/// [`minimal_covering_set`] for weak tournaments, using sign-dominance covering.
pub fn minimal_covering_set_weak(
    margins: &MarginMatrix,
    feasible: FeasibleSet,
) -> Result<ChoiceSet> {
    let a = feasible.set();
    for k in 1..=a.len() {
        let mut found = a.subsets_of_size(k).filter(|&b| covering_in(margins, b, a));
        if let Some(first) = found.next() {
            if let Some(second) = found.next() {
                return Err(Error::Internal(format!(
                    "two minimal covering sets of size {k}: {first:?} and {second:?}"
                )));
            }
            return ChoiceSet::new(first, feasible);
        }
    }
    Err(Error::Internal(format!("no covering set of {a:?}")))
}

/// Minimal covering set of a tournament grown from the bipartisan set: add the
/// bipartisan set of the outsiders that are uncovered against the current
/// set until none remain.
pub fn minimal_covering_set_fast(
    margins: &MarginMatrix,
    feasible: FeasibleSet,
) -> Result<ChoiceSet> {
    margins.require_tournament(feasible.set())?;
    let signs = margins.majority_signs();
    let a = feasible.set();
    let mut current = bipartisan_on(&signs, a);
    loop {
        let pending: AltSet = a
            .difference(current)
            .iter()
            .filter(|&x| uncovered_in(&signs, current.insert(x)).contains(x))
            .collect();
        if pending.is_empty() {
            return ChoiceSet::new(current, feasible);
        }
        current = current.union(bipartisan_on(&signs, pending));
    }
}
