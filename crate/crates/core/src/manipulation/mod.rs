//! Manipulation under the Kelly extension: brute-force group search,
//! participation checks and the constructive attacks.

mod constructions;
mod participation;
mod search;

use std::fmt;

use serde::Serialize;

pub use constructions::{
    theorem1_attack, theorem1_profile, theorem3_attack, Theorem1Branch, Theorem1Outcome,
    Theorem3Case, Theorem3Outcome,
};
pub use participation::{
    check_participation, indifferent_joiner_invariance, prop3_reduction, ParticipationReport,
    ParticipationWitness,
};
pub use search::{
    check_group_strategyproofness, find_manipulation, misreport_candidates, ManipulationReport,
    DEFAULT_SEARCH_CAP,
};

use crate::error::{Error, Result};
use crate::prefcore::{kelly_strict, kelly_weak, ChoiceSet, FeasibleSet, Profile, RelationMode};
use crate::solutions::Scf;

/// Which set comparison a manipulator needs: `R̂` or `P̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PreferenceMode {
    Weak,
    Strict,
}

impl PreferenceMode {
    pub fn key(self) -> &'static str {
        match self {
            PreferenceMode::Weak => "weak",
            PreferenceMode::Strict => "strict",
        }
    }

    pub fn parse(key: &str) -> Option<Self> {
        match key {
            "weak" => Some(PreferenceMode::Weak),
            "strict" => Some(PreferenceMode::Strict),
            _ => None,
        }
    }
}

/// Which misreports a manipulator may submit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MisreportClass {
    Any,
    /// Every true indifference must be reported (`I_i ⊆ I'_i`).
    KeepTies,
}

impl MisreportClass {
    pub fn key(self) -> &'static str {
        match self {
            MisreportClass::Any => "any",
            MisreportClass::KeepTies => "keep-ties",
        }
    }

    pub fn parse(key: &str) -> Option<Self> {
        match key {
            "any" => Some(MisreportClass::Any),
            "keep-ties" => Some(MisreportClass::KeepTies),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModeFlags {
    pub preference: PreferenceMode,
    pub misreport: MisreportClass,
    pub require_outcome_change: bool,
    pub max_group_size: usize,
    /// Relation class misreports are drawn from (on the feasible set).
    pub misreport_mode: RelationMode,
}

impl Default for ModeFlags {
    fn default() -> Self {
        ModeFlags {
            preference: PreferenceMode::Weak,
            misreport: MisreportClass::Any,
            require_outcome_change: true,
            max_group_size: 1,
            misreport_mode: RelationMode::General,
        }
    }
}

impl ModeFlags {
    /// `R̂` comparisons with tie-preserving misreports, groups up to `max_group_size`.
    pub fn strong(max_group_size: usize) -> Self {
        ModeFlags {
            misreport: MisreportClass::KeepTies,
            max_group_size,
            ..ModeFlags::default()
        }
    }

    /// Single-voter `P̂` manipulation with unrestricted misreports.
    pub fn strict_single() -> Self {
        ModeFlags {
            preference: PreferenceMode::Strict,
            ..ModeFlags::default()
        }
    }
}

impl fmt::Display for ModeFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pref={} misreport={} change={} group<={} reports={}",
            self.preference.key(),
            self.misreport.key(),
            self.require_outcome_change,
            self.max_group_size,
            self.misreport_mode.key()
        )
    }
}

/// A manipulation: group `group` (0-based, ascending) moves the outcome on
/// `feasible` from `before = f(truth)` to `after = f(misreport)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub feasible: FeasibleSet,
    pub truth: Profile,
    pub misreport: Profile,
    pub group: Vec<usize>,
    pub flags: ModeFlags,
    pub before: ChoiceSet,
    pub after: ChoiceSet,
    pub verified: bool,
}

impl ManipulationWitness {
    pub(crate) fn build(
        scf: &Scf,
        feasible: FeasibleSet,
        truth: Profile,
        misreport: Profile,
        group: Vec<usize>,
        flags: ModeFlags,
    ) -> Result<Self> {
        let mut w = ManipulationWitness {
            feasible,
            before: scf.apply(&truth, feasible)?,
            after: scf.apply(&misreport, feasible)?,
            truth,
            misreport,
            group,
            flags,
            verified: false,
        };
        w.verify(scf)?;
        w.verified = true;
        Ok(w)
    }

    /// Recomputes both choice sets and every Kelly comparison under the
    /// true relations of the group.
    pub fn verify(&self, scf: &Scf) -> Result<()> {
        let bad = |why: String| Err(Error::MalformedWitness(format!("manipulation: {why}")));
        let n = self.truth.n();
        if self.misreport.n() != n || self.misreport.universe() != self.truth.universe() {
            return bad("profiles have different shapes".into());
        }
        if self.group.is_empty()
            || self.group.windows(2).any(|w| w[0] >= w[1])
            || self.group.iter().any(|&i| i >= n)
        {
            return bad(format!("bad group {:?}", self.group));
        }
        if self.group.len() > self.flags.max_group_size {
            return bad("group larger than allowed".into());
        }
        if let Some(i) = self
            .truth
            .differing_voters(&self.misreport)
            .into_iter()
            .find(|i| !self.group.contains(i))
        {
            return bad(format!("voter {} changed but is not in the group", i + 1));
        }
        let before = scf.apply(&self.truth, self.feasible)?;
        let after = scf.apply(&self.misreport, self.feasible)?;
        if before != self.before || after != self.after {
            return bad("stored choice sets do not match the rule".into());
        }
        if self.flags.require_outcome_change && before == after {
            return bad("outcome did not change".into());
        }
        let a = self.feasible.set();
        for &i in &self.group {
            let truth = self.truth.voter(i);
            if !kelly_weak(after.set(), before.set(), truth) {
                return bad(format!("voter {} does not weakly prefer the new outcome", i + 1));
            }
            if self.flags.preference == PreferenceMode::Strict
                && !kelly_strict(after.set(), before.set(), truth)
            {
                return bad(format!("voter {} does not strictly prefer the new outcome", i + 1));
            }
            if self.flags.misreport == MisreportClass::KeepTies {
                let report = self.misreport.voter(i);
                let refined = a.iter().any(|c| {
                    a.iter()
                        .any(|d| c < d && truth.indifferent(c, d) && !report.indifferent(c, d))
                });
                if refined {
                    return bad(format!("voter {} broke a true tie", i + 1));
                }
            }
        }
        Ok(())
    }
}
