use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::profile::{Profile, Universe};
use super::relation::{PreferenceRelation, RelationMode, Verdict};
use crate::error::{Error, Result};

/// Default bound on the number of profiles an exhaustive domain may hold.
pub const DEFAULT_PROFILE_CAP: u128 = 10_000_000;

/// Number of relations of the given class on `m` alternatives.
pub fn relation_count(m: usize, mode: RelationMode) -> u128 {
    match mode {
        RelationMode::Strict => (1..=m as u128).product(),
        RelationMode::Weak => ordered_bell(m),
        RelationMode::General => 3u128.saturating_pow((m * m.saturating_sub(1) / 2) as u32),
    }
}

/// Number of ordered set partitions (Fubini numbers).
fn ordered_bell(m: usize) -> u128 {
    // a(n) = sum_{k=1..n} C(n,k) a(n-k)
    let mut a = vec![1u128; m + 1];
    for n in 1..=m {
        let mut total = 0u128;
        let mut binom = 1u128;
        for k in 1..=n {
            binom = binom * (n - k + 1) as u128 / k as u128;
            total = total.saturating_add(binom.saturating_mul(a[n - k]));
        }
        a[n] = total;
    }
    a[m]
}

/// All relations of a class on `m` alternatives, ordered lexicographically by
/// their pair verdicts (`a P b` < `a I b` < `b P a`, first pair most significant).
pub fn relations(m: usize, mode: RelationMode, cap: u128) -> Result<Vec<PreferenceRelation>> {
    if m == 0 {
        return Err(Error::Validation("relations need at least one alternative".into()));
    }
    let count = relation_count(m, mode);
    if count > cap {
        return Err(Error::CapExceeded { size: count, cap });
    }
    let mut out = match mode {
        RelationMode::General => general_relations(m),
        RelationMode::Weak => {
            let mut tiers = Vec::new();
            let mut acc = Vec::new();
            ordered_partitions((0..m).collect(), &mut acc, &mut tiers);
            tiers
                .iter()
                .map(|t| PreferenceRelation::from_tiers(m, t).expect("partition"))
                .collect()
        }
        RelationMode::Strict => {
            let mut perms = Vec::new();
            permutations(&mut (0..m).collect::<Vec<_>>(), 0, &mut perms);
            perms
                .iter()
                .map(|p| PreferenceRelation::linear(p).expect("permutation"))
                .collect()
        }
    };
    out.sort_by(|a, b| a.verdicts().cmp(b.verdicts()));
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

/// Streaming form of [`relations`] with the default cap.
pub fn enumerate_relations(
    m: usize,
    mode: RelationMode,
) -> Result<impl Iterator<Item = PreferenceRelation>> {
    Ok(relations(m, mode, DEFAULT_PROFILE_CAP)?.into_iter())
}

fn general_relations(m: usize) -> Vec<PreferenceRelation> {
    let pairs = m * (m - 1) / 2;
    let mut digits = vec![0usize; pairs];
    let mut out = Vec::new();
    loop {
        out.push(PreferenceRelation::from_verdicts_unchecked(
            m,
            digits.iter().map(|&d| Verdict::ALL[d]).collect(),
        ));
        let mut k = pairs;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < 3 {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn ordered_partitions(rest: Vec<usize>, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if rest.is_empty() {
        out.push(acc.clone());
        return;
    }
    let k = rest.len();
    for mask in 1u32..(1 << k) {
        let tier: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]).collect();
        let remaining: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 0).map(|i| rest[i]).collect();
        acc.push(tier);
        ordered_partitions(remaining, acc, out);
        acc.pop();
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnumerationStyle {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// A bounded domain of profiles: `n` voters over `m` alternatives, relations
/// from one class, enumerated exhaustively or sampled with a fixed seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainSpec {
    pub voters: usize,
    pub alternatives: usize,
    pub mode: RelationMode,
    pub style: EnumerationStyle,
    pub cap: u128,
}

impl DomainSpec {
    pub fn exhaustive(voters: usize, alternatives: usize, mode: RelationMode) -> Self {
        DomainSpec {
            voters,
            alternatives,
            mode,
            style: EnumerationStyle::Exhaustive,
            cap: DEFAULT_PROFILE_CAP,
        }
    }

    pub fn sampled(
        voters: usize,
        alternatives: usize,
        mode: RelationMode,
        count: usize,
        seed: u64,
    ) -> Self {
        DomainSpec {
            style: EnumerationStyle::Sampled { count, seed },
            ..Self::exhaustive(voters, alternatives, mode)
        }
    }

    pub fn with_cap(self, cap: u128) -> Self {
        DomainSpec { cap, ..self }
    }

    pub fn with_voters(self, voters: usize) -> Self {
        DomainSpec { voters, ..self }
    }

    pub fn is_exhaustive(&self) -> bool {
        self.style == EnumerationStyle::Exhaustive
    }

    /// Size of the full profile space `|relations|^n`.
    pub fn space_size(&self) -> u128 {
        relation_count(self.alternatives, self.mode).saturating_pow(self.voters as u32)
    }

    /// Number of profiles the enumeration will yield.
    pub fn profile_count(&self) -> u128 {
        match self.style {
            EnumerationStyle::Exhaustive => self.space_size(),
            EnumerationStyle::Sampled { count, .. } => count as u128,
        }
    }

    pub fn check_cap(&self) -> Result<()> {
        let size = self.profile_count();
        if size > self.cap {
            return Err(Error::CapExceeded { size, cap: self.cap });
        }
        Ok(())
    }

    /// Relations available to each voter.
    pub fn relations(&self) -> Result<Vec<PreferenceRelation>> {
        relations(self.alternatives, self.mode, self.cap)
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m={} mode={}",
            self.voters,
            self.alternatives,
            self.mode.key()
        )?;
        match self.style {
            EnumerationStyle::Exhaustive => write!(f, " style=exhaustive"),
            EnumerationStyle::Sampled { count, seed } => {
                write!(f, " style=sampled count={count} seed={seed}")
            }
        }
    }
}

/// Profiles of a domain: the Cartesian power of the relation list, voter 1
/// most significant, or seeded uniform draws from it.
pub fn enumerate_profiles(spec: &DomainSpec) -> Result<ProfileIter> {
    if spec.voters == 0 {
        return Err(Error::Validation("a domain needs at least one voter".into()));
    }
    spec.check_cap()?;
    let universe = Arc::new(Universe::unlabeled(spec.alternatives)?);
    let relations = spec.relations()?;
    let source = match spec.style {
        EnumerationStyle::Exhaustive => Source::Odometer(Some(vec![0; spec.voters])),
        EnumerationStyle::Sampled { count, seed } => Source::Sampled {
            rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
            remaining: count,
        },
    };
    Ok(ProfileIter {
        universe,
        relations,
        voters: spec.voters,
        source,
    })
}

enum Source {
    Odometer(Option<Vec<usize>>),
    Sampled {
        rng: Box<ChaCha8Rng>,
        remaining: usize,
    },
}

pub struct ProfileIter {
    universe: Arc<Universe>,
    relations: Vec<PreferenceRelation>,
    voters: usize,
    source: Source,
}

impl ProfileIter {
    pub fn relations(&self) -> &[PreferenceRelation] {
        &self.relations
    }

    fn build(&self, digits: &[usize]) -> Profile {
        Profile::new_unchecked(
            Arc::clone(&self.universe),
            digits.iter().map(|&d| self.relations[d].clone()).collect(),
        )
    }
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let len = self.relations.len();
        match &mut self.source {
            Source::Odometer(state) => {
                let digits = state.take()?;
                let profile = self.build(&digits);
                let mut next = digits;
                let mut k = next.len();
                let advanced = loop {
                    if k == 0 {
                        break false;
                    }
                    k -= 1;
                    next[k] += 1;
                    if next[k] < len {
                        break true;
                    }
                    next[k] = 0;
                };
                if advanced {
                    if let Source::Odometer(state) = &mut self.source {
                        *state = Some(next);
                    }
                }
                Some(profile)
            }
            Source::Sampled { rng, remaining } => {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                let digits: Vec<usize> = (0..self.voters).map(|_| rng.gen_range(0..len)).collect();
                Some(self.build(&digits))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_counts_m3() {
        assert_eq!(relations(3, RelationMode::Strict, DEFAULT_PROFILE_CAP).unwrap().len(), 6);
        assert_eq!(relations(3, RelationMode::General, DEFAULT_PROFILE_CAP).unwrap().len(), 27);
    }

    #[test]
    fn weak_order_count_matches_partition_oracle() {
        // Oracle: count rank functions 0..m -> 0..m whose image is an initial segment.
        fn oracle(m: usize) -> usize {
            let mut count = 0;
            let total = m.pow(m as u32);
            for code in 0..total {
                let mut c = code;
                let ranks: Vec<usize> = (0..m)
                    .map(|_| {
                        let r = c % m;
                        c /= m;
                        r
                    })
                    .collect();
                let max = *ranks.iter().max().unwrap();
                if (0..=max).all(|r| ranks.contains(&r)) {
                    count += 1;
                }
            }
            count
        }
        for m in 1..=5 {
            let got = relations(m, RelationMode::Weak, DEFAULT_PROFILE_CAP).unwrap().len();
            assert_eq!(got, oracle(m), "m = {m}");
            assert_eq!(got as u128, relation_count(m, RelationMode::Weak));
        }
        assert_eq!(oracle(3), 13);
    }

    #[test]
    fn enumeration_is_sorted_and_duplicate_free() {
        for mode in [RelationMode::Strict, RelationMode::Weak, RelationMode::General] {
            let rels = relations(4, mode, DEFAULT_PROFILE_CAP).unwrap();
            assert!(rels.windows(2).all(|w| w[0].verdicts() < w[1].verdicts()));
            assert!(rels.iter().all(|r| mode.admits(r.mode())));
        }
    }

    #[test]
    fn filtered_general_enumeration_equals_direct_generation() {
        let general = relations(4, RelationMode::General, DEFAULT_PROFILE_CAP).unwrap();
        let weak: Vec<_> = general.iter().filter(|r| r.is_weak_order()).cloned().collect();
        let strict: Vec<_> = general.iter().filter(|r| r.is_linear()).cloned().collect();
        assert_eq!(weak, relations(4, RelationMode::Weak, DEFAULT_PROFILE_CAP).unwrap());
        assert_eq!(strict, relations(4, RelationMode::Strict, DEFAULT_PROFILE_CAP).unwrap());
    }

    #[test]
    fn relation_cap() {
        assert!(matches!(
            relations(7, RelationMode::General, DEFAULT_PROFILE_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn profile_counts() {
        let count = |spec: DomainSpec| enumerate_profiles(&spec).unwrap().count();
        assert_eq!(count(DomainSpec::exhaustive(3, 3, RelationMode::Strict)), 216);
        assert_eq!(count(DomainSpec::exhaustive(2, 3, RelationMode::Weak)), 169);
        for m in 1..=4 {
            assert_eq!(
                count(DomainSpec::exhaustive(1, m, RelationMode::Weak)) as u128,
                relation_count(m, RelationMode::Weak)
            );
        }
    }

    #[test]
    fn exhaustive_order_is_voter_one_major() {
        let spec = DomainSpec::exhaustive(2, 2, RelationMode::Strict);
        let ps: Vec<Profile> = enumerate_profiles(&spec).unwrap().collect();
        assert_eq!(ps.len(), 4);
        assert!(ps[0].voter(0).prefers(0, 1) && ps[0].voter(1).prefers(0, 1));
        assert!(ps[1].voter(0).prefers(0, 1) && ps[1].voter(1).prefers(1, 0));
        assert!(ps[2].voter(0).prefers(1, 0));
    }

    #[test]
    fn sampling_is_reproducible() {
        let spec = DomainSpec::sampled(4, 4, RelationMode::Weak, 50, 7);
        let a: Vec<Profile> = enumerate_profiles(&spec).unwrap().collect();
        let b: Vec<Profile> = enumerate_profiles(&spec).unwrap().collect();
        assert_eq!(a.len(), 50);
        assert_eq!(a, b);
    }

    #[test]
    fn exhaustive_cap_enforced() {
        let spec = DomainSpec::exhaustive(6, 4, RelationMode::Strict);
        assert!(matches!(enumerate_profiles(&spec), Err(Error::CapExceeded { .. })));
        let sampled = DomainSpec::sampled(6, 4, RelationMode::Strict, 10, 1);
        assert_eq!(enumerate_profiles(&sampled).unwrap().count(), 10);
    }
}
