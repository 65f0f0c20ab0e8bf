use crate::error::{Error, Result};
use crate::prefcore::{AltSet, ChoiceSet, FeasibleSet, MarginMatrix, Profile};

fn argmax(feasible: FeasibleSet, score: impl Fn(usize) -> i64) -> Result<ChoiceSet> {
    let best = feasible.iter().map(&score).max().expect("feasible sets are nonempty");
    ChoiceSet::new(feasible.iter().filter(|&a| score(a) == best).collect(), feasible)
}

/// Alternatives maximising wins minus losses in pairwise majority contests.
pub fn copeland(margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
    argmax(feasible, |a| {
        feasible
            .iter()
            .map(|b| margins.get(a, b).signum() as i64)
            .sum()
    })
}

/// Alternatives maximising the margin row sum `Σ_b g(a, b)`.
pub fn borda(margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
    argmax(feasible, |a| feasible.iter().map(|b| margins.get(a, b) as i64).sum())
}

/// Alternatives ranked first by the most voters. Every voter must have a
/// unique top alternative within `feasible`.
pub fn plurality(profile: &Profile, feasible: FeasibleSet) -> Result<ChoiceSet> {
    feasible.check_within(profile.universe())?;
    let mut counts = vec![0i64; profile.m()];
    for (i, rel) in profile.voters().iter().enumerate() {
        let top = rel.strict_top(feasible.set()).ok_or_else(|| {
            Error::precondition("plurality", format!("voter {} has tied top alternatives", i + 1))
        })?;
        counts[top] += 1;
    }
    argmax(feasible, |a| counts[a])
}

/// Maximal elements of the transitive closure of the weak majority relation
/// `g(a, b) >= 0`.
pub fn top_cycle(margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
    let members: Vec<usize> = feasible.iter().collect();
    let m = margins.size();
    // reach[a]: alternatives reachable from a along weak-majority edges.
    let mut reach = vec![AltSet::EMPTY; m];
    for &a in &members {
        reach[a] = members
            .iter()
            .copied()
            .filter(|&b| margins.get(a, b) >= 0)
            .collect();
    }
    for &k in &members {
        for &a in &members {
            if reach[a].contains(k) {
                reach[a] = reach[a].union(reach[k]);
            }
        }
    }
    let top = members
        .iter()
        .copied()
        .filter(|&a| members.iter().all(|&b| !reach[b].contains(a) || reach[a].contains(b)))
        .collect();
    ChoiceSet::new(top, feasible)
}
