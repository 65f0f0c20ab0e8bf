use std::fmt;

use serde::{Deserialize, Serialize};

use super::alt_set::{AltSet, MAX_ALTERNATIVES};
use crate::error::{Error, Result};

/// Verdict on an unordered pair `{a, b}` with `a < b`.
///
/// The derived order (`Above < Tied < Below`) is the enumeration order of
/// relations: `a P b`, then `a I b`, then `b P a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    /// The lower-indexed alternative is strictly preferred.
    Above,
    Tied,
    /// The higher-indexed alternative is strictly preferred.
    Below,
}

impl Verdict {
    pub const ALL: [Verdict; 3] = [Verdict::Above, Verdict::Tied, Verdict::Below];

    fn flip(self) -> Verdict {
        match self {
            Verdict::Above => Verdict::Below,
            Verdict::Tied => Verdict::Tied,
            Verdict::Below => Verdict::Above,
        }
    }
}

/// Relation classes used by domains and by the relation mode flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationMode {
    /// Linear orders (antisymmetric weak orders).
    Strict,
    /// Complete transitive relations.
    Weak,
    /// Any complete relation, transitive or not.
    General,
}

impl RelationMode {
    pub fn key(self) -> &'static str {
        match self {
            RelationMode::Strict => "strict",
            RelationMode::Weak => "weak",
            RelationMode::General => "general",
        }
    }

    pub fn parse(key: &str) -> Option<Self> {
        match key {
            "strict" => Some(RelationMode::Strict),
            "weak" => Some(RelationMode::Weak),
            "general" => Some(RelationMode::General),
            _ => None,
        }
    }

    /// Whether a relation of class `inner` belongs to this class.
    pub fn admits(self, inner: RelationMode) -> bool {
        inner <= self
    }
}

fn pair_index(m: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < m);
    a * m - a * (a + 1) / 2 + (b - a - 1)
}

/// A complete binary relation over `{0, ..., m-1}` stored as one verdict per
/// unordered pair. Reflexivity is implicit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PreferenceRelation {
    m: usize,
    verdicts: Vec<Verdict>,
    mode: RelationMode,
}

impl PreferenceRelation {
    /// Builds a relation from pair verdicts listed in pair order
    /// `(0,1), (0,2), ..., (0,m-1), (1,2), ...`.
    pub fn from_verdicts(m: usize, verdicts: Vec<Verdict>) -> Result<Self> {
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::Validation(format!(
                "a relation needs between 1 and {MAX_ALTERNATIVES} alternatives, got {m}"
            )));
        }
        if verdicts.len() != m * (m - 1) / 2 {
            return Err(Error::Validation(format!(
                "{} pair verdicts given for {m} alternatives",
                verdicts.len()
            )));
        }
        let mode = classify(m, &verdicts);
        Ok(PreferenceRelation { m, verdicts, mode })
    }

    pub(crate) fn from_verdicts_unchecked(m: usize, verdicts: Vec<Verdict>) -> Self {
        let mode = classify(m, &verdicts);
        PreferenceRelation { m, verdicts, mode }
    }

    /// Builds a relation from a rule giving, for each `a < b`, the verdict.
    pub fn from_fn(m: usize, mut verdict: impl FnMut(usize, usize) -> Verdict) -> Result<Self> {
        let mut verdicts = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for a in 0..m {
            for b in a + 1..m {
                verdicts.push(verdict(a, b));
            }
        }
        Self::from_verdicts(m, verdicts)
    }

    /// Weak order from ordered tiers: earlier tiers are strictly preferred,
    /// members of one tier are indifferent. Tiers must partition `0..m`.
    pub fn from_tiers(m: usize, tiers: &[Vec<usize>]) -> Result<Self> {
        let mut rank = vec![usize::MAX; m];
        for (t, tier) in tiers.iter().enumerate() {
            if tier.is_empty() {
                return Err(Error::Validation(format!("tier {} is empty", t + 1)));
            }
            for &a in tier {
                if a >= m {
                    return Err(Error::Validation(format!(
                        "alternative {a} outside a universe of {m}"
                    )));
                }
                if rank[a] != usize::MAX {
                    return Err(Error::Validation(format!(
                        "alternative {a} appears in more than one tier"
                    )));
                }
                rank[a] = t;
            }
        }
        if let Some(a) = rank.iter().position(|&r| r == usize::MAX) {
            return Err(Error::Validation(format!("alternative {a} is missing from the tiers")));
        }
        Self::from_fn(m, |a, b| match rank[a].cmp(&rank[b]) {
            std::cmp::Ordering::Less => Verdict::Above,
            std::cmp::Ordering::Equal => Verdict::Tied,
            std::cmp::Ordering::Greater => Verdict::Below,
        })
    }

    /// Linear order, best first.
    pub fn linear(order: &[usize]) -> Result<Self> {
        let tiers: Vec<Vec<usize>> = order.iter().map(|&a| vec![a]).collect();
        Self::from_tiers(order.len(), &tiers)
    }

    /// Complete indifference (`U x U`).
    pub fn indifference(m: usize) -> Self {
        Self::from_verdicts_unchecked(m, vec![Verdict::Tied; m * m.saturating_sub(1) / 2])
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    /// Tightest class this relation belongs to.
    pub fn mode(&self) -> RelationMode {
        self.mode
    }

    pub fn is_weak_order(&self) -> bool {
        self.mode <= RelationMode::Weak
    }

    pub fn is_linear(&self) -> bool {
        self.mode == RelationMode::Strict
    }

    /// Verdict on `(a, b)` oriented so that `Above` means `a P b`.
    pub fn verdict(&self, a: usize, b: usize) -> Verdict {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => Verdict::Tied,
            Less => self.verdicts[pair_index(self.m, a, b)],
            Greater => self.verdicts[pair_index(self.m, b, a)].flip(),
        }
    }

    /// `a R b`.
    pub fn weakly_prefers(&self, a: usize, b: usize) -> bool {
        self.verdict(a, b) != Verdict::Below
    }

    /// `a P b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.verdict(a, b) == Verdict::Above
    }

    /// `a I b`.
    pub fn indifferent(&self, a: usize, b: usize) -> bool {
        self.verdict(a, b) == Verdict::Tied
    }

    /// Copy with the pair `{a, b}` set so that `verdict(a, b) == v`.
    pub fn with_verdict(&self, a: usize, b: usize, v: Verdict) -> Self {
        assert!(a != b, "a pair needs two distinct alternatives");
        let mut verdicts = self.verdicts.clone();
        if a < b {
            verdicts[pair_index(self.m, a, b)] = v;
        } else {
            verdicts[pair_index(self.m, b, a)] = v.flip();
        }
        Self::from_verdicts_unchecked(self.m, verdicts)
    }

    /// Sub-relation on `members` (ascending), re-indexed to `0..members.len()`.
    pub fn restrict(&self, members: AltSet) -> Self {
        let idx: Vec<usize> = members.iter().collect();
        let k = idx.len();
        let mut verdicts = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                verdicts.push(self.verdict(idx[i], idx[j]));
            }
        }
        Self::from_verdicts_unchecked(k, verdicts)
    }

    /// Whether `self` and `other` give the same verdict on every pair within `within`.
    pub fn agrees_on(&self, other: &Self, within: AltSet) -> bool {
        within.iter().all(|a| {
            within
                .iter()
                .filter(|&b| b > a)
                .all(|b| self.verdict(a, b) == other.verdict(a, b))
        })
    }

    /// Indifference classes ordered best first, if the relation is a weak order.
    pub fn tiers(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_weak_order() {
            return None;
        }
        // For a weak order the number of alternatives strictly above `a` fixes its tier.
        let above: Vec<usize> = (0..self.m)
            .map(|a| (0..self.m).filter(|&b| self.prefers(b, a)).count())
            .collect();
        let mut levels: Vec<usize> = above.clone();
        levels.sort_unstable();
        levels.dedup();
        Some(
            levels
                .iter()
                .map(|&lvl| (0..self.m).filter(|&a| above[a] == lvl).collect())
                .collect(),
        )
    }

    /// The unique `R`-maximal alternative within `within`, if one is strictly
    /// preferred to all others there.
    pub fn strict_top(&self, within: AltSet) -> Option<usize> {
        within
            .iter()
            .find(|&a| within.iter().all(|b| b == a || self.prefers(a, b)))
    }
}

fn classify(m: usize, verdicts: &[Verdict]) -> RelationMode {
    let rel = |a: usize, b: usize| -> Verdict {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => Verdict::Tied,
            Less => verdicts[pair_index(m, a, b)],
            Greater => verdicts[pair_index(m, b, a)].flip(),
        }
    };
    for a in 0..m {
        for b in 0..m {
            if a == b || rel(a, b) == Verdict::Below {
                continue;
            }
            for c in 0..m {
                if c == a || c == b || rel(b, c) == Verdict::Below {
                    continue;
                }
                if rel(a, c) == Verdict::Below {
                    return RelationMode::General;
                }
            }
        }
    }
    if verdicts.iter().all(|&v| v != Verdict::Tied) {
        RelationMode::Strict
    } else {
        RelationMode::Weak
    }
}

impl fmt::Debug for PreferenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tiers() {
            Some(tiers) => {
                let parts: Vec<String> = tiers
                    .iter()
                    .map(|t| t.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("="))
                    .collect();
                write!(f, "{}", parts.join(">"))
            }
            None => f
                .debug_struct("PreferenceRelation")
                .field("m", &self.m)
                .field("verdicts", &self.verdicts)
                .finish(),
        }
    }
}

/// The distinct members of `R^{(a,b)}`: the relation unchanged, the relation
/// with `(a, b)` added, and the relation with `(b, a)` removed and `(a, b)`
/// added. In each, `a` is weakly strengthened with respect to `b`.
pub fn weaken_variants(rel: &PreferenceRelation, a: usize, b: usize) -> Vec<PreferenceRelation> {
    assert!(a != b, "weaken_variants needs a != b");
    let mut out = vec![rel.clone()];
    let added = match rel.verdict(a, b) {
        Verdict::Below => rel.with_verdict(a, b, Verdict::Tied),
        _ => rel.clone(),
    };
    let forced = rel.with_verdict(a, b, Verdict::Above);
    for candidate in [added, forced] {
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// [`weaken_variants`] without the members that break transitivity.
pub fn weaken_variants_transitive(
    rel: &PreferenceRelation,
    a: usize,
    b: usize,
) -> Vec<PreferenceRelation> {
    weaken_variants(rel, a, b)
        .into_iter()
        .filter(PreferenceRelation::is_weak_order)
        .collect()
}
