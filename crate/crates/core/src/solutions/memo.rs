use std::collections::HashMap;

use super::Scf;
use crate::error::Result;
use crate::prefcore::{margin_matrix, ChoiceSet, FeasibleSet, Profile};

/// Per-search memo of a rule's outputs. Pairwise rules are keyed by the
/// margins on the feasible set; other rules are evaluated every time.
pub struct CachedScf<'a> {
    scf: &'a Scf,
    memo: HashMap<(u32, Vec<i32>), Result<ChoiceSet>>,
    evaluations: u64,
}

impl<'a> CachedScf<'a> {
    pub fn new(scf: &'a Scf) -> Self {
        CachedScf {
            scf,
            memo: HashMap::new(),
            evaluations: 0,
        }
    }

    pub fn scf(&self) -> &'a Scf {
        self.scf
    }

    /// Number of `eval` calls so far, cached or not.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn eval(&mut self, profile: &Profile, feasible: FeasibleSet) -> Result<ChoiceSet> {
        self.evaluations += 1;
        if !self.scf.is_pairwise() {
            return self.scf.apply(profile, feasible);
        }
        let margins = margin_matrix(profile, feasible);
        let key = (feasible.set().bits(), margins.key_on(feasible.set()));
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self.scf.apply(profile, feasible);
        self.memo.insert(key, out.clone());
        out
    }
}
