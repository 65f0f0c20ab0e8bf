//! The symmetric zero-sum game whose payoff matrix is the margin matrix.
//!
//! Its value is zero by skew-symmetry, so a mixed strategy `p` over the
//! feasible set is optimal iff `p >= 0`, `Σ p = 1` and `pᵀG >= 0`. The
//! bipartisan (essential) set is the union of the supports of all optimal
//! strategies; for tournaments from an odd electorate the optimal strategy
//! is unique.

use num_traits::{One, Signed, Zero};

use super::simplex::{rational, Cmp, Constraint, LinearProgram, LpOutcome, Rational};
use crate::error::Result;
use crate::prefcore::{AltSet, ChoiceSet, FeasibleSet, MarginMatrix};

/// Exact mixed strategy over the members of a feasible set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedStrategy {
    members: Vec<usize>,
    probabilities: Vec<Rational>,
}

impl MixedStrategy {
    /// Feasible alternatives, ascending; `probabilities()[k]` belongs to `members()[k]`.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn probability(&self, a: usize) -> Rational {
        self.members
            .iter()
            .position(|&x| x == a)
            .map(|k| self.probabilities[k].clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> AltSet {
        self.members
            .iter()
            .zip(&self.probabilities)
            .filter(|(_, p)| p.is_positive())
            .map(|(&a, _)| a)
            .collect()
    }
}

fn optimality_program(margins: &MarginMatrix, members: &[usize], maximize: Option<usize>) -> LinearProgram {
    let k = members.len();
    let mut constraints = Vec::with_capacity(k + 1);
    constraints.push(Constraint {
        coeffs: vec![Rational::one(); k],
        cmp: Cmp::Eq,
        rhs: Rational::one(),
    });
    for &col in members {
        constraints.push(Constraint {
            coeffs: members
                .iter()
                .map(|&row| rational(margins.get(row, col) as i64))
                .collect(),
            cmp: Cmp::Ge,
            rhs: Rational::zero(),
        });
    }
    let objective = members
        .iter()
        .map(|&a| {
            if Some(a) == maximize {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    LinearProgram {
        num_vars: k,
        objective,
        constraints,
    }
}

fn solve(margins: &MarginMatrix, members: &[usize], maximize: Option<usize>) -> Vec<Rational> {
    match optimality_program(margins, members, maximize).solve() {
        LpOutcome::Optimal { x, .. } => x,
        // Skew-symmetric games always have an optimal strategy and the
        // feasible region is a subset of the simplex.
        other => unreachable!("margin game LP returned {other:?}"),
    }
}

/// An optimal strategy of the margin game restricted to `feasible`.
pub fn maximin_strategy(margins: &MarginMatrix, feasible: FeasibleSet) -> MixedStrategy {
    let members: Vec<usize> = feasible.iter().collect();
    let probabilities = solve(margins, &members, None);
    MixedStrategy {
        members,
        probabilities,
    }
}

/// For each member of `feasible`, the largest probability any optimal
/// strategy assigns to it.
pub fn support_maxima(margins: &MarginMatrix, feasible: FeasibleSet) -> Vec<(usize, Rational)> {
    let members: Vec<usize> = feasible.iter().collect();
    members
        .iter()
        .enumerate()
        .map(|(k, &a)| (a, solve(margins, &members, Some(a)).swap_remove(k)))
        .collect()
}

pub(crate) fn bipartisan_on(margins: &MarginMatrix, within: AltSet) -> AltSet {
    let members: Vec<usize> = within.iter().collect();
    let mut support = AltSet::EMPTY;
    let absorb = |x: &[Rational], support: &mut AltSet| {
        for (k, p) in x.iter().enumerate() {
            if p.is_positive() {
                *support = support.insert(members[k]);
            }
        }
    };
    absorb(&solve(margins, &members, None), &mut support);
    for &a in &members {
        if !support.contains(a) {
            absorb(&solve(margins, &members, Some(a)), &mut support);
        }
    }
    support
}

/// Union of the supports of all optimal strategies (the bipartisan set on
/// odd tournaments, the essential set in general).
pub fn bipartisan(margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
    ChoiceSet::new(bipartisan_on(margins, feasible.set()), feasible)
}
