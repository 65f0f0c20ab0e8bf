//! Constructive attacks: the `3m`-voter Condorcet-extension profile and the
//! `n + 1` voter conversion of a set-monotonicity failure.

use super::{ManipulationWitness, MisreportClass, ModeFlags, PreferenceMode};
use crate::axioms::{Axiom, Witness};
use crate::error::{Error, Result};
use crate::prefcore::{
    condorcet_winner, margin_matrix, AltSet, PreferenceRelation, Profile, Verdict,
};
use crate::solutions::Scf;

fn tiers(m: usize, tiers: &[AltSet]) -> Result<PreferenceRelation> {
    let lists: Vec<Vec<usize>> = tiers
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| t.iter().collect())
        .collect();
    PreferenceRelation::from_tiers(m, &lists)
}

/// The `3m`-voter profile over `a1..am`. Voters `2k-1` and `2k` rank `a_k`
/// last below one indifference class; voter `2m+k` ranks the others first,
/// then `a_k`, then `a_{k+1}` (cyclically).
pub fn theorem1_profile(m: usize) -> Result<Profile> {
    if m < 3 {
        return Err(Error::Validation(format!(
            "the construction needs at least 3 alternatives, got {m}"
        )));
    }
    let all = AltSet::full(m);
    let mut voters = Vec::with_capacity(3 * m);
    for k in 0..m {
        let r = tiers(m, &[all.remove(k), AltSet::singleton(k)])?;
        voters.push(r.clone());
        voters.push(r);
    }
    for k in 0..m {
        let next = (k + 1) % m;
        voters.push(tiers(
            m,
            &[
                all.remove(k).remove(next),
                AltSet::singleton(k),
                AltSet::singleton(next),
            ],
        )?);
    }
    Profile::from_relations(voters)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem1Branch {
    /// `a_j` left the choice set after the first lift: voter `2j-1` manipulates at `R`.
    FirstVoterAtR,
    /// `a_j` survived the first lift: voter `2j` manipulates at `R'`.
    SecondVoterAtRPrime,
}

#[derive(Clone, Debug)]
pub struct Theorem1Outcome {
    pub witness: ManipulationWitness,
    /// 0-based index of the least chosen alternative `a_j` at `R`.
    pub chosen: usize,
    /// 0-based index of `a_{j-1}`, lifted to the top.
    pub lifted: usize,
    pub branch: Theorem1Branch,
    pub r_prime: Profile,
    pub r_double_prime: Profile,
}

/// Builds the `3m`-voter profile, lifts `a_{j-1}` for the two voters that
/// rank the least chosen `a_j` last, checks that `a_{j-1}` becomes the
/// Condorcet winner and returns the resulting `P̂`-manipulation.
pub fn theorem1_attack(scf: &Scf, m: usize) -> Result<Theorem1Outcome> {
    let r = theorem1_profile(m)?;
    let a = r.all();
    let chosen = scf
        .apply(&r, a)?
        .set()
        .first()
        .ok_or_else(|| Error::Internal("empty choice set".into()))?;
    let lifted = (chosen + m - 1) % m;
    let middle = AltSet::full(m).remove(lifted).remove(chosen);
    let lift = tiers(
        m,
        &[AltSet::singleton(lifted), middle, AltSet::singleton(chosen)],
    )?;
    let (first, second) = (2 * chosen, 2 * chosen + 1);
    let r1 = r.with_voter(first, lift.clone());
    let r2 = r1.with_voter(second, lift);
    let winner = condorcet_winner(&margin_matrix(&r2, a));
    if winner != Some(lifted) {
        return Err(Error::Internal(format!(
            "lifted alternative a{} is not the Condorcet winner of R'' (found {winner:?})",
            lifted + 1
        )));
    }
    if scf.apply(&r2, a)?.set() != AltSet::singleton(lifted) {
        return Err(Error::precondition(
            scf.key(),
            "does not select the Condorcet winner of R''",
        ));
    }
    let flags = ModeFlags::strict_single();
    let (branch, witness) = if !scf.apply(&r1, a)?.contains(chosen) {
        let w = ManipulationWitness::build(scf, a, r.clone(), r1.clone(), vec![first], flags)?;
        (Theorem1Branch::FirstVoterAtR, w)
    } else {
        let w = ManipulationWitness::build(scf, a, r1.clone(), r2.clone(), vec![second], flags)?;
        (Theorem1Branch::SecondVoterAtRPrime, w)
    };
    Ok(Theorem1Outcome {
        witness,
        chosen,
        lifted,
        branch,
        r_prime: r1,
        r_double_prime: r2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem3Case {
    /// `b P_i a`: voter `n+1` manipulates at `S`.
    Strict,
    /// `b I_i a`: voter `n+1` manipulates at `S'`.
    Indifferent,
}

#[derive(Clone, Debug)]
pub struct Theorem3Outcome {
    pub witness: ManipulationWitness,
    pub case: Theorem3Case,
    pub s: Profile,
    pub s_prime: Profile,
}

/// Converts a set-monotonicity failure of a pairwise rule into a strong
/// `R̂`-manipulation by an added voter `n+1`.
///
/// Voter `i` becomes indifferent between `a` and `b` in both `S` and `S'`,
/// and voter `n+1` is indifferent everywhere except on `{a, b}`, where it
/// carries voter `i`'s original comparison (in `S`) or the altered one
/// (in `S'`). The margins of `S` and `S'` equal those of `R` and `R'`.
pub fn theorem3_attack(scf: &Scf, violation: &Witness) -> Result<Theorem3Outcome> {
    if !scf.is_pairwise() {
        return Err(Error::precondition(scf.key(), "rule is not pairwise"));
    }
    violation.replay(Axiom::SetMonotonicity, scf)?;
    let (Some(altered), Some(i), Some((a, b))) =
        (&violation.altered, violation.voter, violation.pair)
    else {
        return Err(Error::MalformedWitness(
            "set-monotonicity witness without voter, pair or altered profile".into(),
        ));
    };
    let feasible = violation.feasible;
    let r = &violation.profile;
    let (ri, ri_alt) = (r.voter(i), altered.voter(i));
    let m = r.m();
    let case = match ri.verdict(a, b) {
        Verdict::Below => Theorem3Case::Strict,
        Verdict::Tied => Theorem3Case::Indifferent,
        Verdict::Above => {
            return Err(Error::MalformedWitness(
                "voter already prefers a to b; neither construction applies".into(),
            ))
        }
    };
    let full = PreferenceRelation::indifference(m);
    // U×U \ {(a,b)} ∪ (R_i ∩ {(a,b)})
    let joiner = if ri.weakly_prefers(a, b) {
        full.clone()
    } else {
        full.with_verdict(a, b, Verdict::Below)
    };
    // U×U \ {(b,a)} ∪ (R'_i ∩ {(b,a)})
    let joiner_alt = if ri_alt.weakly_prefers(b, a) {
        full.clone()
    } else {
        full.with_verdict(a, b, Verdict::Above)
    };
    let s = r
        .with_voter(i, ri.with_verdict(a, b, Verdict::Tied))
        .with_appended(joiner);
    let s_prime = r
        .with_voter(i, ri_alt.with_verdict(a, b, Verdict::Tied))
        .with_appended(joiner_alt);
    for (name, x, y) in [("S", &s, r), ("S'", &s_prime, altered)] {
        let gx = margin_matrix(x, feasible);
        let gy = margin_matrix(y, feasible);
        if !gx.same_margins_on(&gy, feasible.set()) {
            return Err(Error::Pairwiseness(format!(
                "margins of {name} differ from the original profile"
            )));
        }
        if scf.apply(x, feasible)? != scf.apply(y, feasible)? {
            return Err(Error::Pairwiseness(format!(
                "{} chooses differently on {name} despite equal margins",
                scf.key()
            )));
        }
    }
    let n = r.n();
    let flags = ModeFlags {
        preference: PreferenceMode::Weak,
        misreport: MisreportClass::KeepTies,
        ..ModeFlags::default()
    };
    let (truth, lie) = match case {
        Theorem3Case::Strict => (s.clone(), s_prime.voter(n).clone()),
        Theorem3Case::Indifferent => (s_prime.clone(), s.voter(n).clone()),
    };
    let misreport = truth.with_voter(n, lie);
    let witness = ManipulationWitness::build(scf, feasible, truth, misreport, vec![n], flags)?;
    Ok(Theorem3Outcome {
        witness,
        case,
        s,
        s_prime,
    })
}
