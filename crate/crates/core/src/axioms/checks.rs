use std::collections::HashMap;

use super::{Axiom, AxiomReport, Witness};
use crate::error::Result;
use crate::prefcore::{
    condorcet_winner, enumerate_profiles, margin_matrix, weaken_variants,
    weaken_variants_transitive, AltSet, ChoiceSet, DomainSpec, FeasibleSet, PreferenceRelation,
    Profile, RelationMode,
};
use crate::solutions::{CachedScf, Scf};

struct Ctx<'a> {
    rule: CachedScf<'a>,
    mode: RelationMode,
    skipped: u64,
}

impl Ctx<'_> {
    fn eval(&mut self, profile: &Profile, a: FeasibleSet) -> Result<Option<ChoiceSet>> {
        skip_precondition(self.rule.eval(profile, a), &mut self.skipped)
    }

    /// Strengthenings of `a` against `b` that stay in the domain's relation
    /// class, without the unchanged relation. Strict domains are altered
    /// within weak orders.
    fn variants(&self, rel: &PreferenceRelation, a: usize, b: usize) -> Vec<PreferenceRelation> {
        let all = match self.mode {
            RelationMode::General => weaken_variants(rel, a, b),
            _ => weaken_variants_transitive(rel, a, b),
        };
        all.into_iter().filter(|v| v != rel).collect()
    }
}

fn skip_precondition(out: Result<ChoiceSet>, skipped: &mut u64) -> Result<Option<ChoiceSet>> {
    match out {
        Ok(c) => Ok(Some(c)),
        Err(e) if e.is_precondition() => {
            *skipped += 1;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn feasible_sets(m: usize) -> impl Iterator<Item = FeasibleSet> {
    AltSet::full(m)
        .subsets()
        .filter_map(|s| FeasibleSet::new(s).ok())
}

fn witness(profile: &Profile, a: FeasibleSet, before: ChoiceSet) -> Witness {
    Witness {
        feasible: a,
        profile: profile.clone(),
        altered: None,
        subset: None,
        voter: None,
        pair: None,
        tracked: None,
        before,
        after: None,
    }
}

type Visit<'v> =
    dyn FnMut(&mut Ctx<'_>, &Profile, FeasibleSet, ChoiceSet) -> Result<Option<Witness>> + 'v;

fn scan(scf: &Scf, axiom: Axiom, spec: &DomainSpec, visit: &mut Visit<'_>) -> Result<AxiomReport> {
    let mut ctx = Ctx {
        rule: CachedScf::new(scf),
        mode: spec.mode,
        skipped: 0,
    };
    let mut checked = 0u64;
    let mut found = None;
    'profiles: for profile in enumerate_profiles(spec)? {
        checked += 1;
        for a in feasible_sets(spec.alternatives) {
            let Some(x) = ctx.eval(&profile, a)? else {
                continue;
            };
            if let Some(w) = visit(&mut ctx, &profile, a, x)? {
                found = Some(w);
                break 'profiles;
            }
        }
    }
    Ok(AxiomReport {
        axiom,
        scf: scf.key().to_string(),
        domain: *spec,
        witness: found,
        instances_checked: checked,
        skipped: ctx.skipped,
    })
}

/// Runs the check for `axiom`.
pub fn check(axiom: Axiom, scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    match axiom {
        Axiom::Monotonicity => check_monotonicity(scf, spec),
        Axiom::StrongMonotonicity => check_strong_monotonicity(scf, spec),
        Axiom::SetMonotonicity => check_set_monotonicity(scf, spec),
        Axiom::Ssp => check_ssp(scf, spec),
        Axiom::Iua => check_iua(scf, spec),
        Axiom::Pairwiseness => check_pairwiseness(scf, spec),
        Axiom::CondorcetExtension => check_condorcet_extension(scf, spec),
    }
}

/// Single-voter strengthening search shared by the three monotonicity
/// axioms. `pairs` lists the `(a, b)` to try; `judge` returns the tracked
/// alternative when `f(R', A)` violates the axiom.
fn strengthening_scan(
    scf: &Scf,
    axiom: Axiom,
    spec: &DomainSpec,
    pairs: impl Fn(AltSet, AltSet) -> Vec<(usize, usize)>,
    judge: impl Fn(AltSet, AltSet, usize, usize) -> Option<Option<usize>>,
) -> Result<AxiomReport> {
    scan(scf, axiom, spec, &mut |ctx, profile, a, x| {
        for i in 0..profile.n() {
            for (p, q) in pairs(a.set(), x.set()) {
                for v in ctx.variants(profile.voter(i), p, q) {
                    let altered = profile.with_voter(i, v);
                    let Some(y) = ctx.eval(&altered, a)? else {
                        continue;
                    };
                    if let Some(tracked) = judge(x.set(), y.set(), p, q) {
                        return Ok(Some(Witness {
                            altered: Some(altered),
                            voter: Some(i),
                            pair: Some((p, q)),
                            tracked,
                            after: Some(y),
                            ..witness(profile, a, x)
                        }));
                    }
                }
            }
        }
        Ok(None)
    })
}

fn ordered_pairs(from: AltSet, to: AltSet) -> Vec<(usize, usize)> {
    from.iter()
        .flat_map(|p| to.iter().filter(move |&q| q != p).map(move |q| (p, q)))
        .collect()
}

/// Raising a chosen alternative never removes it from the choice set.
pub fn check_monotonicity(scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    strengthening_scan(
        scf,
        Axiom::Monotonicity,
        spec,
        |a, x| ordered_pairs(x, a),
        |_, y, p, _| (!y.contains(p)).then_some(Some(p)),
    )
}

/// Strengthening any `a` against any `b` keeps every chosen `x != b` chosen.
pub fn check_strong_monotonicity(scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    strengthening_scan(
        scf,
        Axiom::StrongMonotonicity,
        spec,
        |a, _| ordered_pairs(a, a),
        |x, y, _, q| {
            x.iter()
                .find(|&t| t != q && !y.contains(t))
                .map(Some)
        },
    )
}

/// Weakening an unchosen `b` against any `a` leaves the choice set unchanged.
pub fn check_set_monotonicity(scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    strengthening_scan(
        scf,
        Axiom::SetMonotonicity,
        spec,
        |a, x| ordered_pairs(a, a.difference(x)),
        |x, y, _, _| (x != y).then_some(None),
    )
}

/// Removing unchosen alternatives leaves the choice set unchanged.
pub fn check_ssp(scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    scan(scf, Axiom::Ssp, spec, &mut |ctx, profile, a, x| {
        let spare = a.set().difference(x.set());
        for extra in spare.subsets() {
            let b = x.set().union(extra);
            if b == a.set() {
                continue;
            }
            let b = FeasibleSet::new(b)?;
            let Some(y) = ctx.eval(profile, b)? else {
                continue;
            };
            if y.set() != x.set() {
                return Ok(Some(Witness {
                    subset: Some(b),
                    after: Some(y),
                    ..witness(profile, a, x)
                }));
            }
        }
        Ok(None)
    })
}

/// Changing preferences only among unchosen alternatives leaves the choice
/// set unchanged. Each voter's relation may vary on pairs inside `A \ f(R, A)`
/// within the domain's relation class; all combinations are tried.
pub fn check_iua(scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    let class = match spec.mode {
        RelationMode::General => RelationMode::General,
        _ => RelationMode::Weak,
    };
    let pool = crate::prefcore::relations(spec.alternatives, class, spec.cap)?;
    scan(scf, Axiom::Iua, spec, &mut |ctx, profile, a, x| {
        let free = a.set().difference(x.set());
        if free.len() < 2 {
            return Ok(None);
        }
        let outside_free = |r: &PreferenceRelation, s: &PreferenceRelation| {
            (0..r.size()).all(|c| {
                (c + 1..r.size()).all(|d| {
                    (free.contains(c) && free.contains(d)) || r.verdict(c, d) == s.verdict(c, d)
                })
            })
        };
        let options: Vec<Vec<&PreferenceRelation>> = profile
            .voters()
            .iter()
            .map(|r| pool.iter().filter(|s| outside_free(r, s)).collect())
            .collect();
        let mut digits = vec![0usize; options.len()];
        loop {
            let voters: Vec<PreferenceRelation> = digits
                .iter()
                .zip(&options)
                .map(|(&d, opts)| opts[d].clone())
                .collect();
            if voters.as_slice() != profile.voters() {
                let altered = Profile::new(profile.shared_universe(), voters)?;
                if let Some(y) = ctx.eval(&altered, a)? {
                    if y != x {
                        return Ok(Some(Witness {
                            altered: Some(altered),
                            after: Some(y),
                            ..witness(profile, a, x)
                        }));
                    }
                }
            }
            let Some(k) = (0..digits.len()).rev().find(|&k| digits[k] + 1 < options[k].len())
            else {
                return Ok(None);
            };
            digits[k] += 1;
            for d in &mut digits[k + 1..] {
                *d = 0;
            }
        }
    })
}

/// Profiles with equal margins on `A` get equal choice sets. The rule is
/// evaluated directly, never through the margin memo.
pub fn check_pairwiseness(scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    let mut seen: HashMap<(AltSet, Vec<i32>), (Profile, ChoiceSet)> = HashMap::new();
    let mut checked = 0u64;
    let mut skipped = 0u64;
    let mut found = None;
    'profiles: for profile in enumerate_profiles(spec)? {
        checked += 1;
        for a in feasible_sets(spec.alternatives) {
            let Some(x) = skip_precondition(scf.apply(&profile, a), &mut skipped)? else {
                continue;
            };
            let key = (a.set(), margin_matrix(&profile, a).key_on(a.set()));
            match seen.get(&key) {
                Some((first, y)) if *y != x => {
                    found = Some(Witness {
                        altered: Some(profile.clone()),
                        after: Some(x),
                        ..witness(first, a, *y)
                    });
                    break 'profiles;
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (profile.clone(), x));
                }
            }
        }
    }
    Ok(AxiomReport {
        axiom: Axiom::Pairwiseness,
        scf: scf.key().to_string(),
        domain: *spec,
        witness: found,
        instances_checked: checked,
        skipped,
    })
}

/// A Condorcet winner of `A` is selected alone.
pub fn check_condorcet_extension(scf: &Scf, spec: &DomainSpec) -> Result<AxiomReport> {
    scan(scf, Axiom::CondorcetExtension, spec, &mut |_, profile, a, x| {
        let Some(w) = condorcet_winner(&margin_matrix(profile, a)) else {
            return Ok(None);
        };
        Ok((x.set() != AltSet::singleton(w)).then(|| Witness {
            tracked: Some(w),
            ..witness(profile, a, x)
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{
        anti_borda_scf, borda_scf, constant_scf, copeland_scf, plurality_scf, top_cycle_scf,
    };

    fn strict(n: usize, m: usize) -> DomainSpec {
        DomainSpec::exhaustive(n, m, RelationMode::Strict)
    }

    fn replays(report: &AxiomReport, scf: &Scf) {
        let w = report.witness.as_ref().expect("expected a failure");
        w.replay(report.axiom, scf).unwrap();
    }

    #[test]
    fn top_cycle_is_monotone_on_small_strict_domain() {
        let r = check_monotonicity(&top_cycle_scf(), &strict(3, 3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.instances_checked, 216);
    }

    #[test]
    fn rigged_rule_fails_monotonicity() {
        let scf = anti_borda_scf();
        let r = check_monotonicity(&scf, &strict(2, 3)).unwrap();
        replays(&r, &scf);
    }

    #[test]
    fn single_alternative_domains_pass() {
        for axiom in Axiom::ALL {
            let r = check(axiom, &anti_borda_scf(), &strict(2, 1)).unwrap();
            assert!(r.passed(), "{axiom}");
        }
    }

    #[test]
    fn copeland_fails_strong_monotonicity() {
        let scf = copeland_scf();
        let r = check_strong_monotonicity(&scf, &strict(3, 3)).unwrap();
        replays(&r, &scf);
    }

    #[test]
    fn constant_rule_passes_choice_set_axioms() {
        let scf = constant_scf();
        for axiom in [
            Axiom::Monotonicity,
            Axiom::StrongMonotonicity,
            Axiom::SetMonotonicity,
            Axiom::Iua,
            Axiom::Pairwiseness,
        ] {
            assert!(check(axiom, &scf, &strict(2, 3)).unwrap().passed(), "{axiom}");
        }
    }

    #[test]
    fn plurality_is_not_pairwise() {
        let scf = plurality_scf();
        let r = check_pairwiseness(&scf, &strict(3, 3)).unwrap();
        replays(&r, &scf);
        assert!(check_pairwiseness(&borda_scf(), &strict(3, 3)).unwrap().passed());
    }

    #[test]
    fn borda_is_not_a_condorcet_extension() {
        let scf = borda_scf();
        let r = check_condorcet_extension(&scf, &strict(3, 3)).unwrap();
        replays(&r, &scf);
        let w = r.witness.unwrap();
        assert!(w.tracked.is_some());
    }

    #[test]
    fn replay_rejects_tampered_witness() {
        let scf = copeland_scf();
        let r = check_strong_monotonicity(&scf, &strict(3, 3)).unwrap();
        let mut w = r.witness.unwrap();
        w.after = Some(w.before);
        assert!(w.replay(Axiom::StrongMonotonicity, &scf).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let scf = copeland_scf();
        let a = check_ssp(&scf, &strict(3, 3)).unwrap();
        let b = check_ssp(&scf, &strict(3, 3)).unwrap();
        assert_eq!(a, b);
    }
}
