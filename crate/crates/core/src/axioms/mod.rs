//! Bounded decision procedures for the monotonicity-type axioms.
//!
//! Every check scans a [`DomainSpec`] in a fixed order (profiles, feasible
//! sets by ascending bitmask, voters, pairs, variants) and stops at the first
//! violation, so reports are reproducible. Evaluations that hit a rule
//! precondition (plurality with tied tops, say) are skipped and counted.

mod checks;
mod lattice;

use std::fmt;

use serde::Serialize;

pub use checks::{
    check, check_condorcet_extension, check_iua, check_monotonicity, check_pairwiseness,
    check_set_monotonicity, check_ssp, check_strong_monotonicity,
};
pub use lattice::{check_lattice, verify_implications};

use crate::error::{Error, Result};
use crate::prefcore::{
    condorcet_winner, margin_matrix, weaken_variants, AltSet, ChoiceSet, DomainSpec, FeasibleSet,
    Profile,
};
use crate::solutions::Scf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    Monotonicity,
    StrongMonotonicity,
    SetMonotonicity,
    Ssp,
    Iua,
    Pairwiseness,
    CondorcetExtension,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::Monotonicity,
        Axiom::StrongMonotonicity,
        Axiom::SetMonotonicity,
        Axiom::Ssp,
        Axiom::Iua,
        Axiom::Pairwiseness,
        Axiom::CondorcetExtension,
    ];

    /// CLI key.
    pub fn key(self) -> &'static str {
        match self {
            Axiom::Monotonicity => "mono",
            Axiom::StrongMonotonicity => "strongmono",
            Axiom::SetMonotonicity => "setmono",
            Axiom::Ssp => "ssp",
            Axiom::Iua => "iua",
            Axiom::Pairwiseness => "pairwise",
            Axiom::CondorcetExtension => "condorcet",
        }
    }

    pub fn parse(key: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.key() == key)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn key(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
        }
    }
}

/// The objects behind one axiom violation.
///
/// Which optional fields are set depends on the axiom:
/// single-voter axioms fill `altered`, `voter` and `pair`; `ssp` fills
/// `subset`; `iua` and `pairwise` fill `altered`; `tracked` is the
/// alternative that was dropped (or the Condorcet winner).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub feasible: FeasibleSet,
    pub profile: Profile,
    pub altered: Option<Profile>,
    pub subset: Option<FeasibleSet>,
    pub voter: Option<usize>,
    pub pair: Option<(usize, usize)>,
    pub tracked: Option<usize>,
    /// `f(R, A)`.
    pub before: ChoiceSet,
    /// `f(R', A)`, or `f(R, B)` for `ssp`. Absent for `condorcet`.
    pub after: Option<ChoiceSet>,
}

impl Witness {
    /// Re-evaluates the rule on the stored objects and checks that the
    /// violation of `axiom` is reproduced.
    pub fn replay(&self, axiom: Axiom, scf: &Scf) -> Result<()> {
        let bad = |why: &str| Err(Error::MalformedWitness(format!("{axiom} witness: {why}")));
        let a = self.feasible;
        let before = scf.apply(&self.profile, a)?;
        if before != self.before {
            return bad("stored f(R, A) does not match the rule");
        }
        let x = before.set();
        match axiom {
            Axiom::Monotonicity | Axiom::StrongMonotonicity | Axiom::SetMonotonicity => {
                let (Some(altered), Some(i), Some((p, q))) = (&self.altered, self.voter, self.pair)
                else {
                    return bad("missing altered profile, voter or pair");
                };
                if p == q || !a.contains(p) || !a.contains(q) {
                    return bad("pair is not two distinct feasible alternatives");
                }
                if self.profile.differing_voters(altered) != [i] {
                    return bad("profiles must differ exactly at the named voter");
                }
                if !weaken_variants(self.profile.voter(i), p, q).contains(altered.voter(i)) {
                    return bad("altered relation is not a strengthening of a against b");
                }
                let after = scf.apply(altered, a)?;
                if Some(after) != self.after {
                    return bad("stored f(R', A) does not match the rule");
                }
                let holds = match axiom {
                    Axiom::Monotonicity => {
                        self.tracked == Some(p) && x.contains(p) && !after.contains(p)
                    }
                    Axiom::StrongMonotonicity => self
                        .tracked
                        .is_some_and(|t| t != q && x.contains(t) && !after.contains(t)),
                    _ => !x.contains(q) && after != before,
                };
                if !holds {
                    return bad("the choice sets do not violate the axiom");
                }
            }
            Axiom::Ssp => {
                let Some(b) = self.subset else {
                    return bad("missing subset");
                };
                if !x.is_subset(b.set()) || !b.set().is_subset(a.set()) {
                    return bad("subset must lie between f(R, A) and A");
                }
                let after = scf.apply(&self.profile, b)?;
                if Some(after) != self.after || after.set() == x {
                    return bad("f(R, B) does not differ from f(R, A)");
                }
            }
            Axiom::Iua => {
                let Some(altered) = &self.altered else {
                    return bad("missing altered profile");
                };
                let agree = self.profile.voters().iter().zip(altered.voters()).all(|(r, s)| {
                    x.iter()
                        .all(|c| a.iter().all(|d| r.verdict(c, d) == s.verdict(c, d)))
                });
                if !agree || altered.n() != self.profile.n() {
                    return bad("profiles differ on a pair touching a chosen alternative");
                }
                let after = scf.apply(altered, a)?;
                if Some(after) != self.after || after == before {
                    return bad("choice sets do not differ");
                }
            }
            Axiom::Pairwiseness => {
                let Some(altered) = &self.altered else {
                    return bad("missing altered profile");
                };
                let g = margin_matrix(&self.profile, a);
                let h = margin_matrix(altered, a);
                if !g.same_margins_on(&h, a.set()) {
                    return bad("margins differ on the feasible set");
                }
                let after = scf.apply(altered, a)?;
                if Some(after) != self.after || after == before {
                    return bad("choice sets do not differ");
                }
            }
            Axiom::CondorcetExtension => {
                let winner = condorcet_winner(&margin_matrix(&self.profile, a));
                if winner.is_none() || winner != self.tracked {
                    return bad("no Condorcet winner, or a different one");
                }
                if winner.map(AltSet::singleton) == Some(x) {
                    return bad("the rule selects the Condorcet winner alone");
                }
            }
        }
        Ok(())
    }
}

/// Result of one axiom check on one domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub scf: String,
    pub domain: DomainSpec,
    pub witness: Option<Witness>,
    /// Profiles scanned, up to and including the one carrying the witness.
    pub instances_checked: u64,
    /// Evaluations skipped because a rule precondition failed.
    pub skipped: u64,
}

impl AxiomReport {
    pub fn verdict(&self) -> Outcome {
        if self.witness.is_some() {
            Outcome::Fail
        } else {
            Outcome::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// A pass only certifies the axiom on the whole domain when this holds.
    pub fn exhaustive(&self) -> bool {
        self.domain.is_exhaustive()
    }
}
