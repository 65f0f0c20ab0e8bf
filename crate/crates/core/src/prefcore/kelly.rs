use super::alt_set::AltSet;
use super::relation::PreferenceRelation;

/// `X R̂ Y`: every member of `x` is weakly preferred to every member of `y`.
pub fn kelly_weak(x: AltSet, y: AltSet, rel: &PreferenceRelation) -> bool {
    x.iter().all(|a| y.iter().all(|b| rel.weakly_prefers(a, b)))
}

/// `X P̂ Y`: `X R̂ Y` and some member of `x` is strictly preferred to some member of `y`.
pub fn kelly_strict(x: AltSet, y: AltSet, rel: &PreferenceRelation) -> bool {
    kelly_weak(x, y, rel) && x.iter().any(|a| y.iter().any(|b| rel.prefers(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> AltSet {
        items.iter().copied().collect()
    }

    #[test]
    fn reflexive_on_singletons() {
        let r = PreferenceRelation::linear(&[0, 1, 2]).unwrap();
        assert!(kelly_weak(set(&[0]), set(&[0]), &r));
        assert!(!kelly_strict(set(&[0]), set(&[0]), &r));
    }

    #[test]
    fn singleton_against_superset() {
        let r = PreferenceRelation::linear(&[0, 1]).unwrap();
        assert!(kelly_weak(set(&[0]), set(&[0, 1]), &r));
        assert!(kelly_strict(set(&[0]), set(&[0, 1]), &r));
        assert!(!kelly_weak(set(&[0, 1]), set(&[0]), &r));
    }

    #[test]
    fn incomparable_sets() {
        let r = PreferenceRelation::linear(&[0, 1, 2]).unwrap();
        assert!(!kelly_weak(set(&[0, 2]), set(&[1]), &r));
        assert!(!kelly_weak(set(&[1]), set(&[0, 2]), &r));
    }

    #[test]
    fn indifference_is_never_strict() {
        let r = PreferenceRelation::indifference(3);
        for x in AltSet::full(3).subsets().skip(1) {
            for y in AltSet::full(3).subsets().skip(1) {
                assert!(kelly_weak(x, y, &r));
                assert!(!kelly_strict(x, y, &r));
            }
        }
    }
}
