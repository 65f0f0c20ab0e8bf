use choicelab_core::axioms::{check, Axiom};
use choicelab_core::manipulation::{
    check_group_strategyproofness, check_participation, indifferent_joiner_invariance,
    prop3_reduction, theorem1_attack, theorem3_attack, MisreportClass, ModeFlags,
};
use choicelab_core::prefcore::{condorcet_winner, margin_matrix};
use choicelab_core::solutions::tie_broken_scf;
use choicelab_core::{AltSet, DomainSpec, PreferenceRelation, Registry, RelationMode, Scf};

fn rule(key: &str) -> Scf {
    Registry::standard().get(key).unwrap().clone()
}

/// Weak Kelly comparison by brute force over all pairs.
fn kelly_weak_oracle(x: AltSet, y: AltSet, r: &PreferenceRelation) -> bool {
    x.iter().all(|a| y.iter().all(|b| r.weakly_prefers(a, b)))
}

fn kelly_strict_oracle(x: AltSet, y: AltSet, r: &PreferenceRelation) -> bool {
    kelly_weak_oracle(x, y, r)
        && x.iter().any(|a| y.iter().any(|b| r.prefers(a, b)))
}

fn keeps_ties(truth: &PreferenceRelation, report: &PreferenceRelation) -> bool {
    let m = truth.size();
    (0..m).all(|a| (0..m).all(|b| !truth.indifferent(a, b) || report.indifferent(a, b)))
}

#[test]
fn lift_attack_succeeds_for_every_set_monotone_rule() {
    for key in ["copeland", "topcycle", "uncovered", "mc", "bp"] {
        let scf = rule(key);
        for m in 3..=5 {
            let out = theorem1_attack(&scf, m).unwrap();
            let w = &out.witness;
            w.verify(&scf).unwrap();
            assert!(w.verified);
            let g = margin_matrix(&out.r_double_prime, out.r_double_prime.all());
            assert_eq!(condorcet_winner(&g), Some(out.lifted), "{key} m={m}");
            assert_eq!(w.group.len(), 1);
            assert_eq!(w.flags, ModeFlags::strict_single());
            let truth = w.truth.voter(w.group[0]);
            assert!(kelly_strict_oracle(w.after.set(), w.before.set(), truth));
        }
    }
}

#[test]
fn set_monotone_rules_resist_groups_on_small_domains() {
    for key in ["mc", "bp", "topcycle"] {
        let scf = rule(key);
        for (n, m, mode) in [(2, 3, RelationMode::Weak), (3, 3, RelationMode::Strict)] {
            let spec = DomainSpec::exhaustive(n, m, mode);
            let r = check_group_strategyproofness(&scf, &spec, &ModeFlags::strong(n)).unwrap();
            assert!(r.passed(), "{key} manipulable: {:?}", r.witness);
        }
    }
}

#[test]
fn unrestricted_misreport_witnesses_replay() {
    let scf = rule("topcycle");
    let spec = DomainSpec::exhaustive(2, 3, RelationMode::Weak);
    let flags = ModeFlags {
        misreport: MisreportClass::Any,
        ..ModeFlags::strong(1)
    };
    let r = check_group_strategyproofness(&scf, &spec, &flags).unwrap();
    if let Some(w) = r.witness {
        w.verify(&scf).unwrap();
    }
}

#[test]
fn set_monotonicity_failures_turn_into_attacks() {
    for key in ["copeland", "borda"] {
        let scf = rule(key);
        let spec = DomainSpec::exhaustive(2, 3, RelationMode::Strict);
        let report = check(Axiom::SetMonotonicity, &scf, &spec).unwrap();
        let violation = report.witness.expect("set-monotonicity should fail");
        violation.replay(Axiom::SetMonotonicity, &scf).unwrap();
        let out = theorem3_attack(&scf, &violation).unwrap();
        let w = &out.witness;
        w.verify(&scf).unwrap();
        assert_eq!(w.group, vec![w.truth.n() - 1]);
        assert_eq!(w.truth.n(), violation.profile.n() + 1);
        let joiner = w.group[0];
        assert!(kelly_weak_oracle(w.after.set(), w.before.set(), w.truth.voter(joiner)));
        assert!(keeps_ties(w.truth.voter(joiner), w.misreport.voter(joiner)));
    }
}

#[test]
fn participation_and_indifferent_joiners() {
    let spec = DomainSpec::exhaustive(2, 3, RelationMode::Strict);
    for key in ["mc", "bp", "topcycle"] {
        let scf = rule(key);
        assert!(check_participation(&scf, &spec).unwrap().passed(), "{key}");
        assert!(indifferent_joiner_invariance(&scf, &spec).unwrap().is_none());
    }
}

#[test]
fn tie_broken_wrapper_failure_reduces_to_manipulation() {
    let wrapped = tie_broken_scf(&rule("mc"));
    let spec = DomainSpec::exhaustive(3, 3, RelationMode::Strict);
    let report = check_participation(&wrapped, &spec).unwrap();
    let failure = report.witness.expect("wrapper should fail participation");
    failure.replay(&wrapped).unwrap();
    let w = prop3_reduction(&wrapped, &failure).unwrap();
    w.verify(&wrapped).unwrap();
}

#[test]
fn tampered_witness_is_rejected() {
    let scf = rule("mc");
    let mut w = theorem1_attack(&scf, 3).unwrap().witness;
    std::mem::swap(&mut w.before, &mut w.after);
    assert!(w.verify(&scf).is_err());
}
