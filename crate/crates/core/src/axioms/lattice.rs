use std::collections::BTreeMap;

use super::{check, Axiom, AxiomReport};
use crate::error::{Error, Result};
use crate::prefcore::DomainSpec;
use crate::solutions::Scf;

fn describe(r: &AxiomReport) -> String {
    format!("{} {} on {} ({})", r.scf, r.axiom, r.domain, r.verdict().key())
}

/// Checks the implications between observed verdicts for each rule and
/// domain: strong monotonicity with IUA implies set-monotonicity, and
/// set-monotonicity implies monotonicity and IUA.
pub fn check_lattice(reports: &[AxiomReport]) -> Result<()> {
    let mut groups: BTreeMap<(String, String), BTreeMap<Axiom, &AxiomReport>> = BTreeMap::new();
    for r in reports {
        groups
            .entry((r.scf.clone(), r.domain.to_string()))
            .or_default()
            .insert(r.axiom, r);
    }
    for by_axiom in groups.values() {
        let get = |a: Axiom| by_axiom.get(&a).copied();
        let passed = |a: Axiom| get(a).is_some_and(AxiomReport::passed);
        let failed = |a: Axiom| get(a).is_some_and(|r| !r.passed());
        if passed(Axiom::StrongMonotonicity)
            && passed(Axiom::Iua)
            && failed(Axiom::SetMonotonicity)
        {
            return Err(Error::Contradiction(format!(
                "{} and {} but {}",
                describe(get(Axiom::StrongMonotonicity).unwrap()),
                describe(get(Axiom::Iua).unwrap()),
                describe(get(Axiom::SetMonotonicity).unwrap()),
            )));
        }
        if passed(Axiom::SetMonotonicity) {
            for weaker in [Axiom::Monotonicity, Axiom::Iua] {
                if failed(weaker) {
                    return Err(Error::Contradiction(format!(
                        "{} but {}",
                        describe(get(Axiom::SetMonotonicity).unwrap()),
                        describe(get(weaker).unwrap()),
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Runs the four lattice axioms for every rule on `spec`, then
/// [`check_lattice`]. Returns the reports.
pub fn verify_implications(rules: &[Scf], spec: &DomainSpec) -> Result<Vec<AxiomReport>> {
    let mut reports = Vec::new();
    for scf in rules {
        for axiom in [
            Axiom::Monotonicity,
            Axiom::StrongMonotonicity,
            Axiom::SetMonotonicity,
            Axiom::Iua,
        ] {
            reports.push(check(axiom, scf, spec)?);
        }
    }
    check_lattice(&reports)?;
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefcore::RelationMode;
    use crate::solutions::{anti_borda_scf, top_cycle_scf};

    #[test]
    fn empty_registry_is_vacuous() {
        let spec = DomainSpec::exhaustive(2, 3, RelationMode::Strict);
        assert!(verify_implications(&[], &spec).unwrap().is_empty());
        assert!(check_lattice(&[]).is_ok());
    }

    #[test]
    fn fabricated_contradiction_is_flagged() {
        let spec = DomainSpec::exhaustive(2, 3, RelationMode::Strict);
        let pass = check(Axiom::SetMonotonicity, &top_cycle_scf(), &spec).unwrap();
        assert!(pass.passed());
        let mono_fail = AxiomReport {
            axiom: Axiom::Monotonicity,
            ..check(Axiom::Monotonicity, &anti_borda_scf(), &spec).unwrap()
        };
        assert!(!mono_fail.passed());
        let rigged = AxiomReport {
            scf: pass.scf.clone(),
            ..mono_fail
        };
        let err = check_lattice(&[pass, rigged]).unwrap_err();
        assert!(matches!(err, Error::Contradiction(_)), "{err}");
        assert!(err.to_string().contains("setmono"), "{err}");
        assert!(err.to_string().contains("mono on"), "{err}");
    }
}
