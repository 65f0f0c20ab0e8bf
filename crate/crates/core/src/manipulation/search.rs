use std::collections::HashMap;

use super::{ManipulationWitness, MisreportClass, ModeFlags, PreferenceMode};
use crate::error::{Error, Result};
use crate::prefcore::{
    enumerate_profiles, kelly_strict, kelly_weak, relations, AltSet, ChoiceSet, DomainSpec,
    FeasibleSet, PreferenceRelation, Profile,
};
use crate::solutions::{CachedScf, Scf};

/// Largest number of candidate evaluations one search may need.
pub const DEFAULT_SEARCH_CAP: u128 = 100_000_000;

/// Reports a voter with relation `truth` may submit: every relation of
/// `flags.misreport_mode` on `feasible`, spliced into `truth` (pairs outside
/// `feasible` keep their true verdicts), minus `truth` itself. Under
/// [`MisreportClass::KeepTies`] true ties inside `feasible` stay tied.
pub fn misreport_candidates(
    truth: &PreferenceRelation,
    feasible: FeasibleSet,
    flags: &ModeFlags,
) -> Result<Vec<PreferenceRelation>> {
    let members: Vec<usize> = feasible.iter().collect();
    let local = relations(members.len(), flags.misreport_mode, DEFAULT_SEARCH_CAP)?;
    Ok(splice_all(truth, &members, &local, flags.misreport))
}

fn splice_all(
    truth: &PreferenceRelation,
    members: &[usize],
    local: &[PreferenceRelation],
    class: MisreportClass,
) -> Vec<PreferenceRelation> {
    let keeps_ties = |r: &PreferenceRelation| {
        class == MisreportClass::Any
            || (0..members.len()).all(|s| {
                (s + 1..members.len())
                    .all(|t| !truth.indifferent(members[s], members[t]) || r.indifferent(s, t))
            })
    };
    local
        .iter()
        .filter(|r| keeps_ties(r))
        .map(|r| {
            let mut out = truth.clone();
            for s in 0..members.len() {
                for t in s + 1..members.len() {
                    out = out.with_verdict(members[s], members[t], r.verdict(s, t));
                }
            }
            out
        })
        .filter(|r| r != truth)
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&p| cur[p] < n - k + p) else {
            return out;
        };
        cur[pos] += 1;
        for q in pos + 1..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

struct Searcher<'a> {
    rule: CachedScf<'a>,
    local: HashMap<usize, Vec<PreferenceRelation>>,
    cap: u128,
    skipped: u64,
}

impl<'a> Searcher<'a> {
    fn new(scf: &'a Scf) -> Self {
        Searcher {
            rule: CachedScf::new(scf),
            local: HashMap::new(),
            cap: DEFAULT_SEARCH_CAP,
            skipped: 0,
        }
    }

    fn candidates(
        &mut self,
        truth: &PreferenceRelation,
        feasible: FeasibleSet,
        flags: &ModeFlags,
    ) -> Result<Vec<PreferenceRelation>> {
        let members: Vec<usize> = feasible.iter().collect();
        if !self.local.contains_key(&members.len()) {
            let rels = relations(members.len(), flags.misreport_mode, self.cap)?;
            self.local.insert(members.len(), rels);
        }
        Ok(splice_all(truth, &members, &self.local[&members.len()], flags.misreport))
    }

    fn eval(&mut self, profile: &Profile, feasible: FeasibleSet) -> Result<Option<ChoiceSet>> {
        match self.rule.eval(profile, feasible) {
            Ok(c) => Ok(Some(c)),
            Err(e) if e.is_precondition() => {
                self.skipped += 1;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn search(
        &mut self,
        profile: &Profile,
        feasible: FeasibleSet,
        before: ChoiceSet,
        flags: &ModeFlags,
    ) -> Result<Option<ManipulationWitness>> {
        let n = profile.n();
        let options: Vec<Vec<PreferenceRelation>> = profile
            .voters()
            .iter()
            .map(|r| self.candidates(r, feasible, flags))
            .collect::<Result<_>>()?;
        let groups: Vec<Vec<usize>> = (1..=flags.max_group_size.min(n))
            .flat_map(|k| combinations(n, k))
            .collect();
        let space: u128 = groups
            .iter()
            .map(|g| g.iter().map(|&i| options[i].len() as u128).product::<u128>())
            .sum();
        if space > self.cap {
            return Err(Error::CapExceeded {
                size: space,
                cap: self.cap,
            });
        }
        let x = before.set();
        for group in groups {
            if group.iter().any(|&i| options[i].is_empty()) {
                continue;
            }
            let pleased = |y: AltSet| {
                group.iter().all(|&i| {
                    let r = profile.voter(i);
                    match flags.preference {
                        PreferenceMode::Weak => kelly_weak(y, x, r),
                        PreferenceMode::Strict => kelly_strict(y, x, r),
                    }
                })
            };
            let mut digits = vec![0usize; group.len()];
            loop {
                let mut voters = profile.voters().to_vec();
                for (slot, &i) in group.iter().enumerate() {
                    voters[i] = options[i][digits[slot]].clone();
                }
                let altered = Profile::new(profile.shared_universe(), voters)?;
                if let Some(after) = self.eval(&altered, feasible)? {
                    let changed = after != before;
                    if (changed || !flags.require_outcome_change) && pleased(after.set()) {
                        let w = ManipulationWitness {
                            feasible,
                            truth: profile.clone(),
                            misreport: altered,
                            group: group.clone(),
                            flags: *flags,
                            before,
                            after,
                            verified: false,
                        };
                        return Ok(Some(w));
                    }
                }
                let Some(k) = (0..digits.len())
                    .rev()
                    .find(|&k| digits[k] + 1 < options[group[k]].len())
                else {
                    break;
                };
                digits[k] += 1;
                for d in &mut digits[k + 1..] {
                    *d = 0;
                }
            }
        }
        Ok(None)
    }
}

fn finish(scf: &Scf, w: Option<ManipulationWitness>) -> Result<Option<ManipulationWitness>> {
    w.map(|mut w| {
        w.verify(scf)?;
        w.verified = true;
        Ok(w)
    })
    .transpose()
}

/// First manipulation of `f(profile, feasible)` in search order: groups by
/// ascending size then lexicographically, joint misreports in relation
/// enumeration order with the last member varying fastest. Every group
/// member misreports; a witness with a truthful member would already have
/// been found for the smaller group.
pub fn find_manipulation(
    scf: &Scf,
    profile: &Profile,
    feasible: FeasibleSet,
    flags: &ModeFlags,
) -> Result<Option<ManipulationWitness>> {
    let before = scf.apply(profile, feasible)?;
    let mut s = Searcher::new(scf);
    let w = s.search(profile, feasible, before, flags)?;
    finish(scf, w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationReport {
    pub scf: String,
    pub domain: DomainSpec,
    pub flags: ModeFlags,
    pub witness: Option<ManipulationWitness>,
    /// Profiles scanned, up to and including the one carrying the witness.
    pub instances_checked: u64,
    /// Evaluations skipped because a rule precondition failed.
    pub skipped: u64,
}

impl ManipulationReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Runs [`find_manipulation`] on every profile and feasible set of `spec`.
pub fn check_group_strategyproofness(
    scf: &Scf,
    spec: &DomainSpec,
    flags: &ModeFlags,
) -> Result<ManipulationReport> {
    let mut s = Searcher::new(scf);
    let mut checked = 0u64;
    let mut found = None;
    'profiles: for profile in enumerate_profiles(spec)? {
        checked += 1;
        for set in AltSet::full(spec.alternatives).subsets() {
            if set.len() < 2 {
                continue;
            }
            let a = FeasibleSet::new(set)?;
            let Some(before) = s.eval(&profile, a)? else {
                continue;
            };
            if let Some(w) = s.search(&profile, a, before, flags)? {
                found = Some(w);
                break 'profiles;
            }
        }
    }
    Ok(ManipulationReport {
        scf: scf.key().to_string(),
        domain: *spec,
        flags: *flags,
        witness: finish(scf, found)?,
        instances_checked: checked,
        skipped: s.skipped,
    })
}
