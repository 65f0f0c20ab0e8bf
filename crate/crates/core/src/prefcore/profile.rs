use std::fmt;
use std::sync::Arc;

use super::alt_set::{AltSet, MAX_ALTERNATIVES};
use super::relation::PreferenceRelation;
use crate::error::{Error, Result};

/// An alternative of the universe: an index plus an optional display label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alternative {
    pub id: usize,
    pub label: Option<String>,
}

impl Alternative {
    /// The label, or `a{id+1}` when none was given.
    pub fn display_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("a{}", self.id + 1))
    }
}

/// The universe `U`, shared between profiles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    alternatives: Vec<Alternative>,
}

impl Universe {
    /// `m` alternatives without labels.
    pub fn unlabeled(m: usize) -> Result<Self> {
        check_size(m)?;
        Ok(Universe {
            alternatives: (0..m).map(|id| Alternative { id, label: None }).collect(),
        })
    }

    pub fn labeled<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        check_size(labels.len())?;
        let mut alternatives = Vec::with_capacity(labels.len());
        for (id, label) in labels.iter().enumerate() {
            let label = label.as_ref();
            if labels[..id].iter().any(|l| l.as_ref() == label) {
                return Err(Error::Validation(format!("duplicate label `{label}`")));
            }
            alternatives.push(Alternative {
                id,
                label: Some(label.to_string()),
            });
        }
        Ok(Universe { alternatives })
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn alternatives(&self) -> &[Alternative] {
        &self.alternatives
    }

    pub fn label(&self, a: usize) -> String {
        self.alternatives[a].display_label()
    }

    pub fn has_explicit_labels(&self) -> bool {
        self.alternatives.iter().all(|a| a.label.is_some())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.alternatives
            .iter()
            .position(|a| a.display_label() == label)
    }

    pub fn all(&self) -> AltSet {
        AltSet::full(self.len())
    }

    /// Space-separated labels of the members of `set`, ascending by index.
    pub fn format_set(&self, set: AltSet) -> String {
        set.iter().map(|a| self.label(a)).collect::<Vec<_>>().join(" ")
    }

    /// Like [`Universe::format_set`] but sorted by label text.
    pub fn format_set_by_label(&self, set: AltSet) -> String {
        let mut labels: Vec<String> = set.iter().map(|a| self.label(a)).collect();
        labels.sort();
        labels.join(" ")
    }

    fn sub_universe(&self, members: AltSet) -> Universe {
        Universe {
            alternatives: members
                .iter()
                .enumerate()
                .map(|(id, a)| Alternative {
                    id,
                    label: Some(self.label(a)),
                })
                .collect(),
        }
    }
}

fn check_size(m: usize) -> Result<()> {
    if m == 0 || m > MAX_ALTERNATIVES {
        return Err(Error::Validation(format!(
            "a universe needs between 1 and {MAX_ALTERNATIVES} alternatives, got {m}"
        )));
    }
    Ok(())
}

/// A nonempty subset `A` of the universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeasibleSet(AltSet);

impl FeasibleSet {
    pub fn new(set: AltSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::Validation("feasible sets are nonempty".into()));
        }
        Ok(FeasibleSet(set))
    }

    /// The feasible set of all `m` alternatives.
    pub fn full(m: usize) -> Self {
        assert!(m > 0);
        FeasibleSet(AltSet::full(m))
    }

    pub fn set(self) -> AltSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, a: usize) -> bool {
        self.0.contains(a)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> + Clone {
        self.0.iter()
    }

    /// Checks `A ⊆ universe`.
    pub fn check_within(self, universe: &Universe) -> Result<()> {
        if self.0.is_subset(universe.all()) {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "feasible set {:?} is not a subset of a universe of {}",
                self.0,
                universe.len()
            )))
        }
    }
}

/// A nonempty subset of a feasible set: the value `f(R, A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoiceSet(AltSet);

impl ChoiceSet {
    pub fn new(set: AltSet, feasible: FeasibleSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::Internal("choice sets are nonempty".into()));
        }
        if !set.is_subset(feasible.set()) {
            return Err(Error::Internal(format!(
                "choice set {set:?} escapes feasible set {:?}",
                feasible.set()
            )));
        }
        Ok(ChoiceSet(set))
    }

    pub fn set(self) -> AltSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, a: usize) -> bool {
        self.0.contains(a)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> + Clone {
        self.0.iter()
    }
}

/// A preference profile `R = (R_1, ..., R_n)` over a shared universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    universe: Arc<Universe>,
    voters: Vec<PreferenceRelation>,
}

impl Profile {
    pub fn new(universe: Arc<Universe>, voters: Vec<PreferenceRelation>) -> Result<Self> {
        if voters.is_empty() {
            return Err(Error::Validation("a profile needs at least one voter".into()));
        }
        if let Some(i) = voters.iter().position(|r| r.size() != universe.len()) {
            return Err(Error::Validation(format!(
                "voter {} ranks {} alternatives but the universe has {}",
                i + 1,
                voters[i].size(),
                universe.len()
            )));
        }
        Ok(Profile { universe, voters })
    }

    /// Profile over an unlabeled universe sized from the first relation.
    pub fn from_relations(voters: Vec<PreferenceRelation>) -> Result<Self> {
        let m = voters
            .first()
            .ok_or_else(|| Error::Validation("a profile needs at least one voter".into()))?
            .size();
        Profile::new(Arc::new(Universe::unlabeled(m)?), voters)
    }

    pub(crate) fn new_unchecked(universe: Arc<Universe>, voters: Vec<PreferenceRelation>) -> Self {
        Profile { universe, voters }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn shared_universe(&self) -> Arc<Universe> {
        Arc::clone(&self.universe)
    }

    /// Number of alternatives `|U|`.
    pub fn m(&self) -> usize {
        self.universe.len()
    }

    /// Number of voters `n`.
    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn voters(&self) -> &[PreferenceRelation] {
        &self.voters
    }

    pub fn voter(&self, i: usize) -> &PreferenceRelation {
        &self.voters[i]
    }

    pub fn all(&self) -> FeasibleSet {
        FeasibleSet::full(self.m())
    }

    /// Copy with voter `i` (0-based) replaced.
    pub fn with_voter(&self, i: usize, rel: PreferenceRelation) -> Profile {
        assert_eq!(rel.size(), self.m());
        let mut voters = self.voters.clone();
        voters[i] = rel;
        Profile::new_unchecked(self.shared_universe(), voters)
    }

    /// Copy with an extra voter appended.
    pub fn with_appended(&self, rel: PreferenceRelation) -> Profile {
        assert_eq!(rel.size(), self.m());
        let mut voters = self.voters.clone();
        voters.push(rel);
        Profile::new_unchecked(self.shared_universe(), voters)
    }

    /// `R|_A`: every relation restricted to `A`, re-indexed to `0..|A|`,
    /// keeping the labels of the members of `A` and the voter order.
    pub fn restrict(&self, feasible: FeasibleSet) -> Result<Profile> {
        feasible.check_within(&self.universe)?;
        let universe = Arc::new(self.universe.sub_universe(feasible.set()));
        let voters = self
            .voters
            .iter()
            .map(|r| r.restrict(feasible.set()))
            .collect();
        Ok(Profile::new_unchecked(universe, voters))
    }

    /// Voters (0-based) at which `self` and `other` differ.
    pub fn differing_voters(&self, other: &Profile) -> Vec<usize> {
        (0..self.n().max(other.n()))
            .filter(|&i| self.voters.get(i) != other.voters.get(i))
            .collect()
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.voters.iter()).finish()
    }
}
