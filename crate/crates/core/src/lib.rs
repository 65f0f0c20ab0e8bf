//! Irresolute social choice functions over small electorates.
//!
//! The crate is organised around five layers:
//!
//! * [`prefcore`]: alternatives, complete preference relations, profiles,
//!   majority margins, Kelly set comparisons and exhaustive domain enumeration.
//! * [`solutions`]: the choice rules themselves (top cycle, minimal covering
//!   set, bipartisan set, Copeland, Borda, plurality, uncovered set) together
//!   with an exact rational simplex solver for the majority-margin game.
//! * [`axioms`]: bounded decision procedures for monotonicity-type axioms,
//!   each producing a replayable witness on failure.
//! * [`manipulation`]: group manipulation search under the Kelly extension
//!   and constructive attacks.
//! * [`io`]: the profile text format and report serialisation.

pub mod axioms;
pub mod error;
pub mod io;
pub mod manipulation;
pub mod prefcore;
pub mod solutions;

pub use error::{Error, Result};
pub use prefcore::{
    AltSet, Alternative, ChoiceSet, DomainSpec, EnumerationStyle, FeasibleSet, MarginMatrix,
    PreferenceRelation, Profile, RelationMode, Verdict,
};


pub use solutions::{Registry, Scf, ScfDescriptor};
