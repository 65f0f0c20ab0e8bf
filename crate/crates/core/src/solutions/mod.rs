//! Choice rules and their registry.
//!
//! Pairwise rules are stored as functions of the margin matrix, so two
//! profiles with equal margins on the feasible set always get the same
//! choice set. Other rules see the whole profile.

mod covering;
mod game;
mod majority;
mod memo;
pub mod simplex;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use covering::{
    covers, covers_weak, is_covering_set, is_covering_set_weak, minimal_covering_set,
    minimal_covering_set_fast, minimal_covering_set_weak, uncovered_set, uncovered_set_weak,
};
pub use game::{bipartisan, maximin_strategy, support_maxima, MixedStrategy};
pub use majority::{borda, copeland, plurality, top_cycle};
pub use memo::CachedScf;

use crate::error::{Error, Result};
use crate::prefcore::{margin_matrix, AltSet, ChoiceSet, FeasibleSet, MarginMatrix, Profile};

/// Static facts about a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScfDescriptor {
    pub key: String,
    pub name: String,
    pub pairwise: bool,
    pub requires_strict_profiles: bool,
    pub requires_tournament_margins: bool,
    pub claimed_condorcet_extension: bool,
    pub claimed_set_monotone: bool,
}

impl ScfDescriptor {
    pub fn new(key: &str, name: &str) -> Self {
        ScfDescriptor {
            key: key.into(),
            name: name.into(),
            pairwise: false,
            requires_strict_profiles: false,
            requires_tournament_margins: false,
            claimed_condorcet_extension: false,
            claimed_set_monotone: false,
        }
    }

    pub fn condorcet(mut self, yes: bool) -> Self {
        self.claimed_condorcet_extension = yes;
        self
    }

    pub fn set_monotone(mut self, yes: bool) -> Self {
        self.claimed_set_monotone = yes;
        self
    }

    pub fn tournament_only(mut self, yes: bool) -> Self {
        self.requires_tournament_margins = yes;
        self
    }

    pub fn strict_only(mut self, yes: bool) -> Self {
        self.requires_strict_profiles = yes;
        self
    }
}

type MarginRule = dyn Fn(&MarginMatrix, FeasibleSet) -> Result<ChoiceSet> + Send + Sync;
type ProfileRule = dyn Fn(&Profile, FeasibleSet) -> Result<ChoiceSet> + Send + Sync;

#[derive(Clone)]
enum Rule {
    Margins(Arc<MarginRule>),
    Profile(Arc<ProfileRule>),
}

/// A social choice function `f(R, A) ⊆ A`.
#[derive(Clone)]
pub struct Scf {
    descriptor: ScfDescriptor,
    rule: Rule,
}

impl fmt::Debug for Scf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Scf").field(&self.descriptor.key).finish()
    }
}

impl Scf {
    /// A rule that only sees the margin matrix.
    pub fn pairwise(
        mut descriptor: ScfDescriptor,
        rule: impl Fn(&MarginMatrix, FeasibleSet) -> Result<ChoiceSet> + Send + Sync + 'static,
    ) -> Self {
        descriptor.pairwise = true;
        Scf {
            descriptor,
            rule: Rule::Margins(Arc::new(rule)),
        }
    }

    /// A rule that sees the whole profile.
    pub fn profile_based(
        mut descriptor: ScfDescriptor,
        rule: impl Fn(&Profile, FeasibleSet) -> Result<ChoiceSet> + Send + Sync + 'static,
    ) -> Self {
        descriptor.pairwise = false;
        Scf {
            descriptor,
            rule: Rule::Profile(Arc::new(rule)),
        }
    }

    pub fn descriptor(&self) -> &ScfDescriptor {
        &self.descriptor
    }

    pub fn key(&self) -> &str {
        &self.descriptor.key
    }

    pub fn is_pairwise(&self) -> bool {
        matches!(self.rule, Rule::Margins(_))
    }

    /// `f(R, A)`. Precondition failures are reported as
    /// [`Error::Precondition`] naming the rule.
    pub fn apply(&self, profile: &Profile, feasible: FeasibleSet) -> Result<ChoiceSet> {
        feasible.check_within(profile.universe())?;
        if self.descriptor.requires_strict_profiles {
            if let Some(i) = profile
                .voters()
                .iter()
                .position(|r| !r.restrict(feasible.set()).is_linear())
            {
                return Err(Error::precondition(
                    self.key(),
                    format!("voter {} is not strict on the feasible set", i + 1),
                ));
            }
        }
        match &self.rule {
            Rule::Margins(_) => {
                let margins = margin_matrix(profile, feasible);
                self.apply_margins(&margins, feasible)
                    .map_err(|e| self.name_tie(e, |a| profile.universe().label(a)))
            }
            Rule::Profile(rule) => rule(profile, feasible),
        }
    }

    /// Evaluates a pairwise rule directly on margins.
    pub fn apply_margins(&self, margins: &MarginMatrix, feasible: FeasibleSet) -> Result<ChoiceSet> {
        let Rule::Margins(rule) = &self.rule else {
            return Err(Error::precondition(self.key(), "rule is not pairwise"));
        };
        if self.descriptor.requires_tournament_margins {
            margins
                .require_tournament(feasible.set())
                .map_err(|e| self.name_tie(e, |a| format!("a{}", a + 1)))?;
        }
        let chosen = rule(margins, feasible)?;
        ChoiceSet::new(chosen.set(), feasible)
    }

    fn name_tie(&self, err: Error, label: impl Fn(usize) -> String) -> Error {
        match err {
            Error::Tie { a, b } => Error::precondition(
                self.key(),
                format!("majority tie between {} and {}", label(a), label(b)),
            ),
            other => other,
        }
    }
}

/// `f(R, A)` through a rule's descriptor-checked dispatch.
pub fn apply_scf(scf: &Scf, profile: &Profile, feasible: FeasibleSet) -> Result<ChoiceSet> {
    scf.apply(profile, feasible)
}

/// Keys of the standard registry, in registry order.
pub const STANDARD_KEYS: [&str; 7] = [
    "copeland",
    "borda",
    "plurality",
    "topcycle",
    "uncovered",
    "mc",
    "bp",
];

pub fn copeland_scf() -> Scf {
    Scf::pairwise(
        ScfDescriptor::new("copeland", "Copeland's rule").condorcet(true),
        copeland,
    )
}

pub fn borda_scf() -> Scf {
    Scf::pairwise(ScfDescriptor::new("borda", "Borda's rule (margin row sums)"), borda)
}

pub fn plurality_scf() -> Scf {
    Scf::profile_based(ScfDescriptor::new("plurality", "plurality"), plurality)
}

pub fn top_cycle_scf() -> Scf {
    Scf::pairwise(
        ScfDescriptor::new("topcycle", "top cycle")
            .condorcet(true)
            .set_monotone(true),
        top_cycle,
    )
}

pub fn uncovered_scf() -> Scf {
    Scf::pairwise(
        ScfDescriptor::new("uncovered", "uncovered set").condorcet(true),
        uncovered_set_weak,
    )
}

pub fn minimal_covering_scf() -> Scf {
    Scf::pairwise(
        ScfDescriptor::new("mc", "minimal covering set")
            .condorcet(true)
            .set_monotone(true),
        minimal_covering_set_weak,
    )
}

pub fn bipartisan_scf() -> Scf {
    Scf::pairwise(
        ScfDescriptor::new("bp", "bipartisan set")
            .condorcet(true)
            .set_monotone(true),
        bipartisan,
    )
}

/// Always returns the whole feasible set.
pub fn constant_scf() -> Scf {
    Scf::pairwise(
        ScfDescriptor::new("constant", "constant (whole feasible set)").set_monotone(true),
        |_, feasible| ChoiceSet::new(feasible.set(), feasible),
    )
}

/// Chooses the alternatives with the *smallest* margin row sum, so
/// strengthening a chosen alternative can push it out. Not monotonic.
pub fn anti_borda_scf() -> Scf {
    Scf::pairwise(
        ScfDescriptor::new("antiborda", "anti-Borda (drops strengthened winners)"),
        |margins, feasible| {
            let score = |a: usize| -> i64 { feasible.iter().map(|b| margins.get(a, b) as i64).sum() };
            let worst = feasible.iter().map(score).min().expect("nonempty");
            ChoiceSet::new(feasible.iter().filter(|&a| score(a) == worst).collect(), feasible)
        },
    )
}

/// Resolute wrapper: the lowest-indexed member of `base`'s choice set.
pub fn tie_broken_scf(base: &Scf) -> Scf {
    let descriptor = ScfDescriptor::new(
        &format!("{}-lex", base.key()),
        &format!("{} with lexicographic tie-breaking", base.descriptor().name),
    )
    .condorcet(base.descriptor().claimed_condorcet_extension);
    let pick = |chosen: ChoiceSet, feasible: FeasibleSet| {
        ChoiceSet::new(AltSet::singleton(chosen.set().first().expect("nonempty")), feasible)
    };
    match &base.rule {
        Rule::Margins(rule) => {
            let rule = Arc::clone(rule);
            Scf::pairwise(descriptor, move |g, a| pick(rule(g, a)?, a))
        }
        Rule::Profile(rule) => {
            let rule = Arc::clone(rule);
            Scf::profile_based(descriptor, move |p, a| pick(rule(p, a)?, a))
        }
    }
}

/// Rules by key.
#[derive(Clone, Debug)]
pub struct Registry {
    rules: Vec<Scf>,
}

impl Registry {
    /// The seven rules of the CLI vocabulary.
    pub fn standard() -> Self {
        Registry {
            rules: vec![
                copeland_scf(),
                borda_scf(),
                plurality_scf(),
                top_cycle_scf(),
                uncovered_scf(),
                minimal_covering_scf(),
                bipartisan_scf(),
            ],
        }
    }

    pub fn empty() -> Self {
        Registry { rules: Vec::new() }
    }

    pub fn with(mut self, scf: Scf) -> Self {
        self.rules.push(scf);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Scf> {
        self.rules.iter().find(|s| s.key() == key)
    }

    /// Looks up a comma-separated key list.
    pub fn select(&self, keys: &str) -> Result<Vec<Scf>> {
        keys.split(',')
            .map(str::trim)
            .filter(|k| !k.is_empty())
            .map(|k| {
                self.get(k)
                    .cloned()
                    .ok_or_else(|| Error::Validation(format!("unknown rule `{k}`")))
            })
            .collect()
    }

    pub fn rules(&self) -> &[Scf] {
        &self.rules
    }

    pub fn keys(&self) -> Vec<&str> {
        self.rules.iter().map(Scf::key).collect()
    }
}
