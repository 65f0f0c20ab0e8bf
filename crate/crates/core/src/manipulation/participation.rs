use super::{ManipulationWitness, MisreportClass, ModeFlags, PreferenceMode};
use crate::error::{Error, Result};
use crate::prefcore::{
    enumerate_profiles, kelly_strict, margin_matrix, AltSet, ChoiceSet, DomainSpec, FeasibleSet,
    PreferenceRelation, Profile,
};
use crate::solutions::{CachedScf, Scf};

/// Voter `n+1` strictly prefers the outcome without their ballot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParticipationWitness {
    pub feasible: FeasibleSet,
    pub base: Profile,
    pub joiner: PreferenceRelation,
    /// `f(R, A)`.
    pub without: ChoiceSet,
    /// `f((R, R_{n+1}), A)`.
    pub with: ChoiceSet,
}

impl ParticipationWitness {
    pub fn joined(&self) -> Profile {
        self.base.with_appended(self.joiner.clone())
    }

    pub fn replay(&self, scf: &Scf) -> Result<()> {
        let without = scf.apply(&self.base, self.feasible)?;
        let with = scf.apply(&self.joined(), self.feasible)?;
        if without != self.without || with != self.with {
            return Err(Error::MalformedWitness(
                "participation: stored choice sets do not match the rule".into(),
            ));
        }
        if !kelly_strict(without.set(), with.set(), &self.joiner) {
            return Err(Error::MalformedWitness(
                "participation: the joiner does not prefer abstaining".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParticipationReport {
    pub scf: String,
    /// `voters` bounds the base electorate; every size from 1 up is scanned.
    pub domain: DomainSpec,
    pub witness: Option<ParticipationWitness>,
    /// (base profile, joiner) pairs scanned.
    pub instances_checked: u64,
    pub skipped: u64,
}

impl ParticipationReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn eval(rule: &mut CachedScf<'_>, p: &Profile, a: FeasibleSet, skipped: &mut u64) -> Result<Option<ChoiceSet>> {
    match rule.eval(p, a) {
        Ok(c) => Ok(Some(c)),
        Err(e) if e.is_precondition() => {
            *skipped += 1;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Scans base profiles with 1 to `spec.voters` voters and every joiner
/// relation of the domain's class, looking for a joiner who would rather
/// abstain.
pub fn check_participation(scf: &Scf, spec: &DomainSpec) -> Result<ParticipationReport> {
    let joiners = spec.relations()?;
    let mut rule = CachedScf::new(scf);
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut found = None;
    'search: for size in 1..=spec.voters {
        for base in enumerate_profiles(&spec.with_voters(size))? {
            for joiner in &joiners {
                checked += 1;
                let joined = base.with_appended(joiner.clone());
                for set in AltSet::full(spec.alternatives).subsets() {
                    let Ok(a) = FeasibleSet::new(set) else {
                        continue;
                    };
                    let Some(without) = eval(&mut rule, &base, a, &mut skipped)? else {
                        continue;
                    };
                    let Some(with) = eval(&mut rule, &joined, a, &mut skipped)? else {
                        continue;
                    };
                    if kelly_strict(without.set(), with.set(), joiner) {
                        found = Some(ParticipationWitness {
                            feasible: a,
                            base: base.clone(),
                            joiner: joiner.clone(),
                            without,
                            with,
                        });
                        break 'search;
                    }
                }
            }
        }
    }
    if let Some(w) = &found {
        w.replay(scf)?;
    }
    Ok(ParticipationReport {
        scf: scf.key().to_string(),
        domain: *spec,
        witness: found,
        instances_checked: checked,
        skipped,
    })
}

/// Turns a participation failure of a pairwise rule into a manipulation:
/// the joiner reports complete indifference, which leaves every margin and
/// hence the outcome of the base profile in place.
pub fn prop3_reduction(scf: &Scf, failure: &ParticipationWitness) -> Result<ManipulationWitness> {
    if !scf.is_pairwise() {
        return Err(Error::precondition(scf.key(), "rule is not pairwise"));
    }
    failure.replay(scf)?;
    let a = failure.feasible;
    let n = failure.base.n();
    let truth = failure.joined();
    let misreport = failure
        .base
        .with_appended(PreferenceRelation::indifference(failure.base.m()));
    if !margin_matrix(&misreport, a).same_margins_on(&margin_matrix(&failure.base, a), a.set()) {
        return Err(Error::Pairwiseness(
            "a fully indifferent ballot changed the margins".into(),
        ));
    }
    if scf.apply(&misreport, a)? != failure.without {
        return Err(Error::Pairwiseness(format!(
            "{} changed its choice after a fully indifferent ballot",
            scf.key()
        )));
    }
    let flags = ModeFlags {
        preference: PreferenceMode::Strict,
        misreport: MisreportClass::KeepTies,
        ..ModeFlags::default()
    };
    ManipulationWitness::build(scf, a, truth, misreport, vec![n], flags)
}

/// First profile and feasible set of `spec` on which appending a fully
/// indifferent voter changes the choice set, if any.
pub fn indifferent_joiner_invariance(
    scf: &Scf,
    spec: &DomainSpec,
) -> Result<Option<(Profile, FeasibleSet)>> {
    let blank = PreferenceRelation::indifference(spec.alternatives);
    for profile in enumerate_profiles(spec)? {
        let joined = profile.with_appended(blank.clone());
        for set in AltSet::full(spec.alternatives).subsets() {
            let Ok(a) = FeasibleSet::new(set) else {
                continue;
            };
            let before = scf.apply(&profile, a);
            let after = scf.apply(&joined, a);
            match (before, after) {
                (Ok(x), Ok(y)) if x == y => {}
                (Err(e), _) | (_, Err(e)) if e.is_precondition() => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
                _ => return Ok(Some((profile, a))),
            }
        }
    }
    Ok(None)
}
