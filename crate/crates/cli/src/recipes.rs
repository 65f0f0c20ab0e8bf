//! `reproduce`: the theorem recipes and their golden files.
//!
//! Each recipe renders its findings as text blocks with sets in index
//! order and compares them with `golden/<recipe>/<name>`. `--bless`
//! rewrites the files instead.

use std::path::PathBuf;

use clap::ValueEnum;
use serde_json::{json, Value};

use choicelab_core::axioms::{check_set_monotonicity, Axiom, AxiomReport};
use choicelab_core::io::{
    axiom_report_json, axiom_report_text, format_set, manipulation_report_json,
    manipulation_report_text, manipulation_witness_json, manipulation_witness_text,
    participation_report_json, participation_report_text, render_golden, serialize_profile,
    GoldenRow, SetOrder,
};
use choicelab_core::manipulation::{
    check_group_strategyproofness, check_participation, indifferent_joiner_invariance,
    prop3_reduction, theorem1_attack, theorem3_attack, ManipulationWitness, MisreportClass,
    ModeFlags, PreferenceMode, Theorem1Branch, Theorem3Case,
};
use choicelab_core::prefcore::{condorcet_winner, margin_matrix, Universe};
use choicelab_core::solutions::tie_broken_scf;
use choicelab_core::{DomainSpec, FeasibleSet, MarginMatrix, RelationMode, Scf};

use super::{
    expect_strategyproof, resolve_rules, CliError, CliResult, MisreportArg, PrefArg, Session,
    GOLDEN_ENV,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    /// Condorcet-extension attack on the `3m`-voter profile.
    Thm1,
    /// Exhaustive strong-manipulation search for the set-monotone rules.
    Thm2,
    /// Set-monotonicity classification and the added-voter attack.
    Thm3,
    /// Participation, the indifferent joiner and the tie-broken wrappers.
    Prop3,
    /// Choice sets of the pairwise rules on every labeled tournament.
    Tables,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Options {
    pub scf: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub mode: Option<RelationMode>,
    pub group_size: Option<usize>,
    pub pref: Option<PrefArg>,
    pub misreport: Option<MisreportArg>,
    pub bless: bool,
}

impl Options {
    fn rules(&self, default: &str) -> CliResult<Vec<Scf>> {
        resolve_rules(self.scf.as_deref().unwrap_or(default))
    }

    fn explicit_domain(&self) -> bool {
        self.n.is_some() || self.m.is_some() || self.mode.is_some()
    }

    fn domain(&self, s: &Session<'_>, n: usize, m: usize, mode: RelationMode) -> CliResult<DomainSpec> {
        let spec = DomainSpec::exhaustive(
            self.n.unwrap_or(n),
            self.m.unwrap_or(m),
            self.mode.unwrap_or(mode),
        );
        let spec = match s.cap {
            Some(c) => spec.with_cap(c),
            None => spec,
        };
        if spec.voters == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        spec.check_cap()
            .map_err(|e| CliError::Usage(format!("{e}; raise {} to allow it", super::CAP_ENV)))?;
        Ok(spec)
    }
}

pub(crate) fn reproduce(s: &mut Session<'_>, recipe: Recipe, opts: &Options) -> CliResult<()> {
    match recipe {
        Recipe::Thm1 => thm1(s, opts),
        Recipe::Thm2 => thm2(s, opts),
        Recipe::Thm3 => thm3(s, opts),
        Recipe::Prop3 => prop3(s, opts),
        Recipe::Tables => tables(s, opts),
    }
}

fn golden_dir() -> PathBuf {
    std::env::var_os(GOLDEN_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/golden")))
}

/// Compares `content` with the golden file `name` (or writes it when
/// blessing) and returns the status word.
fn golden(s: &mut Session<'_>, name: &str, content: &str, bless: bool) -> CliResult<&'static str> {
    let path = golden_dir().join(name);
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if bless {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(io_err)?;
        }
        std::fs::write(&path, content).map_err(io_err)?;
        return Ok("blessed");
    }
    match std::fs::read_to_string(&path) {
        Ok(stored) if stored == content => Ok("match"),
        Ok(stored) => {
            let line = stored
                .lines()
                .zip(content.lines())
                .position(|(a, b)| a != b)
                .unwrap_or_else(|| stored.lines().count().min(content.lines().count()));
            s.mismatch(format!(
                "{} differs from this run from line {} on; rerun with --bless if the change is intended",
                path.display(),
                line + 1
            ));
            Ok("mismatch")
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            s.mismatch(format!("{} is missing; create it with --bless", path.display()));
            Ok("missing")
        }
        Err(e) => Err(io_err(e)),
    }
}

fn domain_tag(spec: &DomainSpec) -> String {
    format!("n{}-m{}-{}", spec.voters, spec.alternatives, spec.mode.key())
}

fn branch_key(b: Theorem1Branch) -> &'static str {
    match b {
        Theorem1Branch::FirstVoterAtR => "first-voter-at-R",
        Theorem1Branch::SecondVoterAtRPrime => "second-voter-at-R'",
    }
}

fn thm1(s: &mut Session<'_>, opts: &Options) -> CliResult<()> {
    let rules = opts.rules("copeland,topcycle,uncovered,mc,bp")?;
    let sizes = match opts.m {
        Some(m) => vec![m],
        None => vec![3, 4, 5],
    };
    for scf in &rules {
        for &m in &sizes {
            let out = match theorem1_attack(scf, m) {
                Ok(out) => out,
                Err(e) if e.is_precondition() => {
                    s.mismatch(format!("{} m={m}: {e}", scf.key()));
                    s.emit(
                        |_| format!("thm1 {} m={m}: not applicable ({e})\n", scf.key()),
                        || json!({ "recipe": "thm1", "scf": scf.key(), "m": m, "error": e.to_string() }),
                    )?;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            out.witness.verify(scf)?;
            let u = out.witness.truth.universe();
            let winner = condorcet_winner(&margin_matrix(&out.r_double_prime, out.r_double_prime.all()));
            if winner != Some(out.lifted) {
                s.mismatch(format!("{} m={m}: lifted alternative is not the Condorcet winner", scf.key()));
            }
            let winner_label = winner.map(|w| u.label(w)).unwrap_or_else(|| "none".into());
            let render = |o: SetOrder| {
                format!(
                    "begin thm1\nscf: {}\nm: {m}\nchosen: {}\nlifted: {}\n\
                     condorcet-winner-after-lift: {winner_label}\nbranch: {}\nend thm1\n{}",
                    scf.key(),
                    u.label(out.chosen),
                    u.label(out.lifted),
                    branch_key(out.branch),
                    manipulation_witness_text(&out.witness, o)
                )
            };
            let text = render(SetOrder::Index);
            let status = golden(s, &format!("thm1/{}-m{m}.txt", scf.key()), &text, opts.bless)?;
            s.emit(
                |o| format!("{}golden: {status}\n", render(o)),
                || {
                    json!({
                        "recipe": "thm1",
                        "scf": scf.key(),
                        "m": m,
                        "chosen": u.label(out.chosen),
                        "lifted": u.label(out.lifted),
                        "condorcet_winner_after_lift": winner_label,
                        "branch": branch_key(out.branch),
                        "witness": manipulation_witness_json(&out.witness),
                        "golden": status,
                    })
                },
            )?;
        }
    }
    Ok(())
}

fn thm2_flags(opts: &Options, spec: &DomainSpec) -> CliResult<ModeFlags> {
    let group = opts.group_size.unwrap_or(spec.voters);
    if group == 0 {
        return Err(CliError::Usage("--group-size must be at least 1".into()));
    }
    Ok(ModeFlags {
        preference: match opts.pref.unwrap_or(PrefArg::Weak) {
            PrefArg::Weak => PreferenceMode::Weak,
            PrefArg::Strict => PreferenceMode::Strict,
        },
        misreport: match opts.misreport.unwrap_or(MisreportArg::KeepTies) {
            MisreportArg::Any => MisreportClass::Any,
            MisreportArg::KeepTies => MisreportClass::KeepTies,
        },
        max_group_size: group,
        ..ModeFlags::default()
    })
}

fn thm2(s: &mut Session<'_>, opts: &Options) -> CliResult<()> {
    let rules = opts.rules("mc,bp,topcycle")?;
    let domains = if opts.explicit_domain() {
        vec![opts.domain(s, 3, 3, RelationMode::Strict)?]
    } else {
        vec![
            opts.domain(s, 3, 3, RelationMode::Strict)?,
            opts.domain(s, 2, 3, RelationMode::Weak)?,
        ]
    };
    for scf in &rules {
        for spec in &domains {
            let flags = thm2_flags(opts, spec)?;
            let r = check_group_strategyproofness(scf, spec, &flags)?;
            if !r.passed() && expect_strategyproof(scf, &flags) {
                s.mismatch(format!("{} admits a strong manipulation on {spec}", scf.key()));
            }
            let text = manipulation_report_text(&r, SetOrder::Index);
            let name = format!(
                "thm2/{}-{}-g{}-{}-{}.txt",
                scf.key(),
                domain_tag(spec),
                flags.max_group_size,
                flags.preference.key(),
                flags.misreport.key()
            );
            let status = golden(s, &name, &text, opts.bless)?;
            s.emit(
                |o| format!("{}golden: {status}\n", manipulation_report_text(&r, o)),
                || {
                    let mut v = manipulation_report_json(&r);
                    v["recipe"] = json!("thm2");
                    v["golden"] = json!(status);
                    v
                },
            )?;
        }
    }
    Ok(())
}

/// Domains scanned for a set-monotonicity failure, cheapest first, all
/// within `n <= 3` and `m <= 4`.
fn failure_ladder() -> Vec<(usize, usize, RelationMode)> {
    use RelationMode::{Strict, Weak};
    vec![
        (1, 3, Weak),
        (2, 3, Strict),
        (2, 3, Weak),
        (3, 3, Strict),
        (3, 3, Weak),
        (1, 4, Weak),
        (2, 4, Strict),
        (2, 4, Weak),
        (3, 4, Strict),
        (3, 4, Weak),
    ]
}

fn case_key(c: Theorem3Case) -> &'static str {
    match c {
        Theorem3Case::Strict => "strict",
        Theorem3Case::Indifferent => "indifferent",
    }
}

struct Attack {
    case: Theorem3Case,
    witness: ManipulationWitness,
    s: String,
    s_prime: String,
}

fn thm3(s: &mut Session<'_>, opts: &Options) -> CliResult<()> {
    let rules = opts.rules("copeland,uncovered,borda,mc,bp,topcycle")?;
    for scf in &rules {
        let positive = scf.descriptor().claimed_set_monotone;
        let domains: Vec<DomainSpec> = if opts.explicit_domain() {
            vec![opts.domain(s, 3, 3, RelationMode::Strict)?]
        } else if positive {
            vec![
                opts.domain(s, 3, 3, RelationMode::Strict)?,
                opts.domain(s, 2, 3, RelationMode::Weak)?,
            ]
        } else {
            failure_ladder()
                .into_iter()
                .map(|(n, m, mode)| opts.domain(s, n, m, mode))
                .collect::<CliResult<_>>()?
        };
        let mut reports: Vec<AxiomReport> = Vec::new();
        let mut attack = None;
        for spec in &domains {
            let r = check_set_monotonicity(scf, spec)?;
            let failed = !r.passed();
            if let Some(w) = &r.witness {
                w.replay(Axiom::SetMonotonicity, scf)?;
                if scf.is_pairwise() {
                    match theorem3_attack(scf, w) {
                        Ok(out) => {
                            out.witness.verify(scf)?;
                            attack = Some(Attack {
                                case: out.case,
                                witness: out.witness,
                                s: serialize_profile(&out.s),
                                s_prime: serialize_profile(&out.s_prime),
                            });
                        }
                        Err(e) => s.mismatch(format!("{}: attack failed: {e}", scf.key())),
                    }
                }
            }
            reports.push(r);
            if failed {
                break;
            }
        }
        let failure = reports.last().filter(|r| !r.passed());
        if positive && failure.is_some() {
            s.mismatch(format!("{} is registered as set-monotone but fails", scf.key()));
        }
        if !positive && !opts.explicit_domain() && failure.is_none() {
            s.mismatch(format!("{}: no set-monotonicity failure within n <= 3, m <= 4", scf.key()));
        }
        let render = |o: SetOrder| {
            let mut text: String = reports.iter().map(|r| axiom_report_text(r, o)).collect();
            if let Some(a) = &attack {
                text.push_str(&format!(
                    "begin thm3-attack\nscf: {}\ncase: {}\njoiner: {}\nbegin profile S\n{}end profile\n\
                     begin profile S'\n{}end profile\nend thm3-attack\n{}",
                    scf.key(),
                    case_key(a.case),
                    a.witness.truth.n(),
                    a.s,
                    a.s_prime,
                    manipulation_witness_text(&a.witness, o)
                ));
            }
            text
        };
        let name = if opts.explicit_domain() {
            format!("thm3/{}-{}.txt", scf.key(), domain_tag(&domains[0]))
        } else {
            format!("thm3/{}.txt", scf.key())
        };
        let text = render(SetOrder::Index);
        let status = golden(s, &name, &text, opts.bless)?;
        s.emit(
            |o| format!("{}golden: {status}\n", render(o)),
            || {
                json!({
                    "recipe": "thm3",
                    "scf": scf.key(),
                    "expected": if positive { "pass" } else { "fail" },
                    "reports": reports.iter().map(axiom_report_json).collect::<Vec<Value>>(),
                    "attack": attack.as_ref().map(|a| json!({
                        "case": case_key(a.case),
                        "joiner": a.witness.truth.n(),
                        "s": a.s,
                        "s_prime": a.s_prime,
                        "witness": manipulation_witness_json(&a.witness),
                    })),
                    "golden": status,
                })
            },
        )?;
    }
    Ok(())
}

fn prop3(s: &mut Session<'_>, opts: &Options) -> CliResult<()> {
    let rules = opts.rules("mc,bp,topcycle")?;
    let spec = opts.domain(s, 3, 3, RelationMode::Strict)?;
    for scf in &rules {
        let d = scf.descriptor();
        let report = check_participation(scf, &spec)?;
        if !report.passed() && d.claimed_set_monotone && d.pairwise {
            s.mismatch(format!("{} fails participation on {spec}", scf.key()));
        }
        let invariance = if scf.is_pairwise() {
            let found = indifferent_joiner_invariance(scf, &spec)?;
            if let Some((p, a)) = &found {
                s.mismatch(format!(
                    "{}: a fully indifferent voter changed the choice on {} for\n{}",
                    scf.key(),
                    format_set(p.universe(), a.set(), SetOrder::Index),
                    serialize_profile(p)
                ));
            }
            if found.is_none() { "invariant" } else { "changed" }
        } else {
            "not-pairwise"
        };
        let wrapper = tie_broken_scf(scf);
        let wrapped = check_participation(&wrapper, &spec)?;
        let reduction = match &wrapped.witness {
            Some(w) => match prop3_reduction(&wrapper, w) {
                Ok(m) => {
                    m.verify(&wrapper)?;
                    Some(m)
                }
                Err(e) => {
                    s.mismatch(format!("{}: reduction failed: {e}", wrapper.key()));
                    None
                }
            },
            None => None,
        };
        let render = |o: SetOrder| {
            let mut text = format!(
                "begin prop3\nscf: {}\ndomain: {spec}\nindifferent-joiner: {invariance}\nwrapper: {}\nend prop3\n",
                scf.key(),
                wrapper.key()
            );
            text.push_str(&participation_report_text(&report, o));
            text.push_str(&participation_report_text(&wrapped, o));
            if let Some(m) = &reduction {
                text.push_str(&manipulation_witness_text(m, o));
            }
            text
        };
        let name = format!("prop3/{}-{}.txt", scf.key(), domain_tag(&spec));
        let text = render(SetOrder::Index);
        let status = golden(s, &name, &text, opts.bless)?;
        s.emit(
            |o| format!("{}golden: {status}\n", render(o)),
            || {
                json!({
                    "recipe": "prop3",
                    "scf": scf.key(),
                    "participation": participation_report_json(&report),
                    "indifferent_joiner": invariance,
                    "wrapper": participation_report_json(&wrapped),
                    "reduction": reduction.as_ref().map(manipulation_witness_json),
                    "golden": status,
                })
            },
        )?;
    }
    Ok(())
}

fn tables(s: &mut Session<'_>, opts: &Options) -> CliResult<()> {
    let rules = opts.rules("copeland,borda,topcycle,uncovered,mc,bp")?;
    if let Some(r) = rules.iter().find(|r| !r.is_pairwise()) {
        return Err(CliError::Usage(format!(
            "{} needs whole profiles; tables cover pairwise rules only",
            r.key()
        )));
    }
    let sizes = match opts.m {
        Some(m) => vec![m],
        None => vec![3, 4, 5],
    };
    let pos = |key: &str| rules.iter().position(|r| r.key() == key);
    let chain: Vec<usize> = ["bp", "mc", "topcycle"].iter().filter_map(|k| pos(k)).collect();
    for &m in &sizes {
        if !(1..=6).contains(&m) {
            return Err(CliError::Usage("tables need 1 <= m <= 6".into()));
        }
        let u = Universe::unlabeled(m)?;
        let a = FeasibleSet::full(m);
        let pairs = m * (m - 1) / 2;
        let mut rows = Vec::new();
        for bits in 0..1u64 << pairs {
            let g = MarginMatrix::tournament(m, bits);
            let id = format!("t{m}-{bits:0width$}", width = ((1u64 << pairs) - 1).to_string().len());
            let sets = rules
                .iter()
                .map(|r| r.apply_margins(&g, a))
                .collect::<Result<Vec<_>, _>>()?;
            for (r, c) in rules.iter().zip(&sets) {
                rows.push(GoldenRow::new(&id, r.key(), &u, c.set()));
            }
            if chain.windows(2).any(|w| !sets[w[0]].set().is_subset(sets[w[1]].set())) {
                s.mismatch(format!("{id}: containment chain bp, mc, topcycle broken"));
            }
        }
        let text = render_golden(&rows);
        let status = golden(s, &format!("tables/m{m}.tsv"), &text, opts.bless)?;
        let keys: Vec<&str> = rules.iter().map(|r| r.key()).collect();
        s.emit(
            |_| {
                format!(
                    "tables m={m}: {} tournaments, rules {}, golden: {status}\n",
                    1u64 << pairs,
                    keys.join(",")
                )
            },
            || json!({ "recipe": "tables", "m": m, "instances": 1u64 << pairs, "rules": keys, "golden": status }),
        )?;
    }
    Ok(())
}
