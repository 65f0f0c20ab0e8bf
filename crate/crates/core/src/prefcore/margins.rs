use super::alt_set::AltSet;
use super::profile::{FeasibleSet, Profile};
use crate::error::{Error, Result};

/// Skew-symmetric matrix of majority margins
/// `g(a, b) = |{i : a P_i b}| - |{i : b P_i a}|` over the members of a scope.
///
/// Entries outside the scope are zero. Indices are universe indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarginMatrix {
    size: usize,
    scope: AltSet,
    entries: Vec<i32>,
    voters: usize,
}

impl MarginMatrix {
    /// Builds a matrix from row-major entries over `0..size`; all of them are in scope.
    pub fn from_entries(size: usize, entries: Vec<i32>, voters: usize) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::Validation(format!(
                "{} entries for a {size}x{size} matrix",
                entries.len()
            )));
        }
        for a in 0..size {
            if entries[a * size + a] != 0 {
                return Err(Error::Validation(format!("nonzero diagonal at {a}")));
            }
            for b in a + 1..size {
                if entries[a * size + b] != -entries[b * size + a] {
                    return Err(Error::Validation(format!(
                        "entries ({a},{b}) and ({b},{a}) are not opposite"
                    )));
                }
            }
        }
        Ok(MarginMatrix {
            size,
            scope: AltSet::full(size),
            entries,
            voters,
        })
    }

    /// The labeled tournament on `m` vertices whose pair `(a, b)`, `a < b`,
    /// is won by `a` iff the corresponding bit of `bits` is set; pairs are
    /// numbered in the order `(0,1), (0,2), ..., (1,2), ...`. Margins are
    /// `±1`, as realised by a single strict voter.
    pub fn tournament(m: usize, bits: u64) -> Self {
        let mut entries = vec![0; m * m];
        let mut k = 0;
        for a in 0..m {
            for b in a + 1..m {
                let g = if bits >> k & 1 == 1 { 1 } else { -1 };
                entries[a * m + b] = g;
                entries[b * m + a] = -g;
                k += 1;
            }
        }
        MarginMatrix {
            size: m,
            scope: AltSet::full(m),
            entries,
            voters: 1,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Alternatives whose pairwise entries were computed.
    pub fn scope(&self) -> AltSet {
        self.scope
    }

    pub fn voter_count(&self) -> usize {
        self.voters
    }

    pub fn odd_electorate(&self) -> bool {
        self.voters % 2 == 1
    }

    pub fn get(&self, a: usize, b: usize) -> i32 {
        self.entries[a * self.size + b]
    }

    /// `g(a, b) > 0`.
    pub fn beats(&self, a: usize, b: usize) -> bool {
        self.get(a, b) > 0
    }

    /// The first tied pair `(a, b)`, `a < b`, inside `within`, if any.
    pub fn first_tie(&self, within: AltSet) -> Option<(usize, usize)> {
        within.iter().find_map(|a| {
            within
                .iter()
                .filter(|&b| b > a)
                .find(|&b| self.get(a, b) == 0)
                .map(|b| (a, b))
        })
    }

    /// Errors with the first tied pair if `within` is not a tournament.
    pub fn require_tournament(&self, within: AltSet) -> Result<()> {
        match self.first_tie(within) {
            Some((a, b)) => Err(Error::Tie { a, b }),
            None => Ok(()),
        }
    }

    /// Whether both matrices carry the same margins on every pair within `within`.
    pub fn same_margins_on(&self, other: &MarginMatrix, within: AltSet) -> bool {
        within
            .iter()
            .all(|a| within.iter().all(|b| self.get(a, b) == other.get(a, b)))
    }

    /// Principal submatrix on `members`, re-indexed to `0..|members|`.
    pub fn submatrix(&self, members: AltSet) -> MarginMatrix {
        let idx: Vec<usize> = members.iter().collect();
        let k = idx.len();
        let mut entries = Vec::with_capacity(k * k);
        for &a in &idx {
            for &b in &idx {
                entries.push(self.get(a, b));
            }
        }
        MarginMatrix {
            size: k,
            scope: AltSet::full(k),
            entries,
            voters: self.voters,
        }
    }

    /// The matrix of signs `sign(g(a, b))`: the (weak) majority tournament.
    pub fn majority_signs(&self) -> MarginMatrix {
        MarginMatrix {
            size: self.size,
            scope: self.scope,
            entries: self.entries.iter().map(|g| g.signum()).collect(),
            voters: 1,
        }
    }

    /// Entries on `within` in row-major order; equal keys mean equal margins.
    pub fn key_on(&self, within: AltSet) -> Vec<i32> {
        let mut key = Vec::with_capacity(within.len() * within.len());
        for a in within.iter() {
            for b in within.iter().filter(|&b| b > a) {
                key.push(self.get(a, b));
            }
        }
        key
    }
}

/// Margins of `profile` on the pairs within `feasible`.
pub fn margin_matrix(profile: &Profile, feasible: FeasibleSet) -> MarginMatrix {
    let m = profile.m();
    let scope = feasible.set().intersection(AltSet::full(m));
    let mut entries = vec![0i32; m * m];
    for rel in profile.voters() {
        for a in scope.iter() {
            for b in scope.iter().filter(|&b| b > a) {
                if rel.prefers(a, b) {
                    entries[a * m + b] += 1;
                    entries[b * m + a] -= 1;
                } else if rel.prefers(b, a) {
                    entries[a * m + b] -= 1;
                    entries[b * m + a] += 1;
                }
            }
        }
    }
    MarginMatrix {
        size: m,
        scope,
        entries,
        voters: profile.n(),
    }
}

/// The alternative with positive margin against every other member of the
/// matrix scope, if there is one.
pub fn condorcet_winner(margins: &MarginMatrix) -> Option<usize> {
    let scope = margins.scope();
    scope
        .iter()
        .find(|&a| scope.iter().all(|b| b == a || margins.beats(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefcore::PreferenceRelation;

    fn profile(orders: &[&[usize]]) -> Profile {
        Profile::from_relations(
            orders
                .iter()
                .map(|o| PreferenceRelation::linear(o).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn unanimity_margins() {
        let p = profile(&[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]);
        let g = margin_matrix(&p, p.all());
        assert_eq!((g.get(0, 1), g.get(0, 2), g.get(1, 2)), (3, 3, 3));
        assert_eq!(g.get(2, 0), -3);
        assert_eq!(condorcet_winner(&g), Some(0));
    }

    #[test]
    fn full_indifference_gives_zero_matrix() {
        let p = Profile::from_relations(vec![PreferenceRelation::indifference(4); 3]).unwrap();
        let g = margin_matrix(&p, p.all());
        assert!((0..4).all(|a| (0..4).all(|b| g.get(a, b) == 0)));
        assert_eq!(condorcet_winner(&g), None);
    }

    #[test]
    fn condorcet_cycle_has_no_winner() {
        let p = profile(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]]);
        let g = margin_matrix(&p, p.all());
        assert_eq!(condorcet_winner(&g), None);
        assert_eq!(g.get(0, 1), 1);
        assert_eq!(g.get(1, 2), 1);
        assert_eq!(g.get(2, 0), 1);
    }

    #[test]
    fn margins_outside_scope_are_zero() {
        let p = profile(&[&[0, 1, 2]]);
        let a = FeasibleSet::new(AltSet::from_iter([0, 1])).unwrap();
        let g = margin_matrix(&p, a);
        assert_eq!(g.get(0, 1), 1);
        assert_eq!(g.get(0, 2), 0);
        assert_eq!(g.scope(), a.set());
    }

    #[test]
    fn tournament_bits_and_ties() {
        let t = MarginMatrix::tournament(3, 0b111);
        assert!(t.beats(0, 1) && t.beats(0, 2) && t.beats(1, 2));
        assert!(t.require_tournament(AltSet::full(3)).is_ok());
        let z = MarginMatrix::from_entries(2, vec![0, 0, 0, 0], 2).unwrap();
        assert_eq!(z.require_tournament(AltSet::full(2)), Err(Error::Tie { a: 0, b: 1 }));
        assert!(MarginMatrix::from_entries(2, vec![0, 1, 1, 0], 1).is_err());
    }
}
