use std::fmt;

/// Maximum number of alternatives any universe may hold.
pub const MAX_ALTERNATIVES: usize = 32;

/// A set of alternative indices stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AltSet(u32);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub fn from_bits(bits: u32) -> Self {
        AltSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `{0, 1, ..., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_ALTERNATIVES, "at most {MAX_ALTERNATIVES} alternatives");
        if m == MAX_ALTERNATIVES {
            AltSet(u32::MAX)
        } else {
            AltSet((1u32 << m) - 1)
        }
    }

    pub fn singleton(a: usize) -> Self {
        AltSet(1 << a)
    }

    pub fn contains(self, a: usize) -> bool {
        a < MAX_ALTERNATIVES && self.0 & (1 << a) != 0
    }

    pub fn insert(self, a: usize) -> Self {
        AltSet(self.0 | (1 << a))
    }

    pub fn remove(self, a: usize) -> Self {
        AltSet(self.0 & !(1 << a))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: AltSet) -> Self {
        AltSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AltSet) -> Self {
        AltSet(self.0 & other.0)
    }

    pub fn difference(self, other: AltSet) -> Self {
        AltSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> + Clone {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let a = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(a)
        })
    }

    /// All subsets of `self`, ascending by bitmask value (so the empty set first).
    pub fn subsets(self) -> impl Iterator<Item = AltSet> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(AltSet(cur))
        })
    }

    /// Nonempty subsets of `self` with exactly `k` members, ascending by bitmask.
    pub fn subsets_of_size(self, k: usize) -> impl Iterator<Item = AltSet> {
        self.subsets().filter(move |s| s.len() == k)
    }
}

impl FromIterator<usize> for AltSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(AltSet::EMPTY, AltSet::insert)
    }
}

impl fmt::Debug for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
