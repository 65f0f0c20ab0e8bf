//! Alternatives, preference relations, profiles, majority margins, Kelly
//! comparisons between sets, and enumeration of small domains.

mod alt_set;
mod enumerate;
mod kelly;
mod margins;
mod profile;
mod relation;

pub use alt_set::{AltSet, MAX_ALTERNATIVES};
pub use enumerate::{
    enumerate_profiles, enumerate_relations, relation_count, relations, DomainSpec,
    EnumerationStyle, ProfileIter, DEFAULT_PROFILE_CAP,
};
pub use kelly::{kelly_strict, kelly_weak};
pub use margins::{condorcet_winner, margin_matrix, MarginMatrix};
pub use profile::{Alternative, ChoiceSet, FeasibleSet, Profile, Universe};
pub use relation::{
    weaken_variants, weaken_variants_transitive, PreferenceRelation, RelationMode, Verdict,
};
