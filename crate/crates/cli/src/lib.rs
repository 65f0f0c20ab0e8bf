//! Command-line front end for `choicelab-core`.
//!
//! Exit codes: 0 when every check came out as expected (expected failures
//! of negative exemplars included), 1 on a mismatch, 2 on usage or input
//! errors.

mod recipes;

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use choicelab_core::axioms::{check, check_lattice, Axiom};
use choicelab_core::io::{
    axiom_report_json, axiom_report_text, format_set, manipulation_report_json,
    manipulation_report_text, manipulation_witness_json, manipulation_witness_text,
    parse_profile, participation_report_json, participation_report_text, SetOrder,
};
use choicelab_core::manipulation::{
    check_group_strategyproofness, check_participation, find_manipulation, MisreportClass,
    ModeFlags, PreferenceMode,
};
use choicelab_core::prefcore::{condorcet_winner, enumerate_profiles, margin_matrix};
use choicelab_core::solutions::{tie_broken_scf, STANDARD_KEYS};
use choicelab_core::{DomainSpec, Profile, Registry, RelationMode, Scf};

pub use recipes::Recipe;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Overrides every enumeration cap.
pub const CAP_ENV: &str = "CHOICELAB_CAP";
/// Directory holding the golden files; defaults to the crate's `golden/`.
pub const GOLDEN_ENV: &str = "CHOICELAB_GOLDEN_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] choicelab_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "choicelab",
    version,
    about = "Irresolute social choice functions: choice sets, axiom checks, manipulation search"
)]
pub struct Cli {
    /// `human` sorts sets by label; `machine` prints JSON lines with sets in index order.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Weak,
    General,
}

impl From<ModeArg> for RelationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => RelationMode::Strict,
            ModeArg::Weak => RelationMode::Weak,
            ModeArg::General => RelationMode::General,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrefArg {
    Weak,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MisreportArg {
    Any,
    KeepTies,
}

#[derive(Args, Debug, Clone)]
pub struct DomainArgs {
    /// Number of voters.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Number of alternatives.
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    /// Draw this many profiles instead of enumerating all of them.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed for `--samples`.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl DomainArgs {
    fn spec(&self, cap: Option<u128>) -> CliResult<DomainSpec> {
        let mode = self.mode.into();
        let spec = match (self.samples, self.seed) {
            (None, None) => DomainSpec::exhaustive(self.n, self.m, mode),
            (Some(count), Some(seed)) => DomainSpec::sampled(self.n, self.m, mode, count, seed),
            (Some(_), None) => return Err(CliError::Usage("--samples needs an explicit --seed".into())),
            (None, Some(_)) => return Err(CliError::Usage("--seed only applies with --samples".into())),
        };
        let spec = match cap {
            Some(c) => spec.with_cap(c),
            None => spec,
        };
        if spec.voters == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        spec.check_cap().map_err(|e| {
            CliError::Usage(format!(
                "{e}; use --samples with --seed or raise {CAP_ENV}"
            ))
        })?;
        Ok(spec)
    }
}

#[derive(Args, Debug, Clone)]
pub struct FlagArgs {
    /// Largest manipulating group.
    #[arg(long = "group-size", default_value_t = 1)]
    pub group_size: usize,
    /// Set comparison the manipulators need: `weak` (R̂) or `strict` (P̂).
    #[arg(long, value_enum, default_value_t = PrefArg::Weak)]
    pub pref: PrefArg,
    /// `keep-ties` restricts misreports to those preserving every true indifference.
    #[arg(long, value_enum, default_value_t = MisreportArg::Any)]
    pub misreport: MisreportArg,
}

impl FlagArgs {
    fn flags(&self) -> CliResult<ModeFlags> {
        if self.group_size == 0 {
            return Err(CliError::Usage("--group-size must be at least 1".into()));
        }
        Ok(ModeFlags {
            preference: match self.pref {
                PrefArg::Weak => PreferenceMode::Weak,
                PrefArg::Strict => PreferenceMode::Strict,
            },
            misreport: match self.misreport {
                MisreportArg::Any => MisreportClass::Any,
                MisreportArg::KeepTies => MisreportClass::KeepTies,
            },
            max_group_size: self.group_size,
            ..ModeFlags::default()
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the choice set of each rule on a profile file.
    Compute {
        /// Comma-separated rule keys, or `all`.
        #[arg(long, default_value = "all")]
        scf: String,
        /// Profile file, `-` for standard input.
        #[arg(long = "in")]
        input: String,
    },
    /// Check axioms on a bounded domain.
    Axioms {
        #[arg(long, default_value = "all")]
        scf: String,
        /// Comma-separated axiom keys, or `all`.
        #[arg(long, default_value = "all")]
        axiom: String,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Search for manipulations on a domain, or on one profile with `--in`.
    Manipulate {
        #[arg(long, default_value = "all")]
        scf: String,
        #[arg(long = "in")]
        input: Option<String>,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        flags: FlagArgs,
    },
    /// Search for no-show paradoxes: base electorates of 1 to n voters plus one joiner.
    Participation {
        #[arg(long, default_value = "all")]
        scf: String,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Run a theorem reproduction and compare it with the golden files.
    Reproduce {
        #[arg(value_enum)]
        recipe: Recipe,
        #[arg(long)]
        scf: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long = "group-size")]
        group_size: Option<usize>,
        #[arg(long, value_enum)]
        pref: Option<PrefArg>,
        #[arg(long, value_enum)]
        misreport: Option<MisreportArg>,
        /// Rewrite the golden files instead of comparing.
        #[arg(long)]
        bless: bool,
    },
    /// Print statistics of a domain.
    Enumerate {
        #[command(flatten)]
        domain: DomainArgs,
    },
}

/// Output sink: human text or machine JSON lines, plus the list of
/// mismatches seen so far.
pub struct Session<'a> {
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    mismatches: usize,
    cap: Option<u128>,
}

impl Session<'_> {
    fn write(&mut self, text: &str) -> CliResult<()> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })
    }

    /// Writes `human()` or the JSON value, whichever the format asks for.
    fn emit(&mut self, human: impl FnOnce(SetOrder) -> String, machine: impl FnOnce() -> Value) -> CliResult<()> {
        match self.format {
            Format::Human => {
                let text = human(SetOrder::Label);
                self.write(&text)
            }
            Format::Machine => {
                let line = machine().to_string() + "\n";
                self.write(&line)
            }
        }
    }

    fn mismatch(&mut self, what: impl AsRef<str>) {
        self.mismatches += 1;
        let _ = writeln!(self.err, "mismatch: {}", what.as_ref());
    }
}

/// Resolves a comma-separated rule list. `all` means the standard registry;
/// a `-lex` suffix wraps a rule in lexicographic tie-breaking.
pub fn resolve_rules(keys: &str) -> CliResult<Vec<Scf>> {
    let reg = Registry::standard();
    let mut out = Vec::new();
    for key in keys.split(',').map(str::trim).filter(|k| !k.is_empty()) {
        if key == "all" {
            out.extend(reg.rules().iter().cloned());
            continue;
        }
        let scf = match key.strip_suffix("-lex") {
            Some(base) => reg.get(base).map(tie_broken_scf),
            None => reg.get(key).cloned(),
        };
        out.push(scf.ok_or_else(|| {
            CliError::Usage(format!(
                "unknown rule `{key}`; known: {} (optionally with a -lex suffix)",
                STANDARD_KEYS.join(", ")
            ))
        })?);
    }
    if out.is_empty() {
        return Err(CliError::Usage("no rule given".into()));
    }
    Ok(out)
}

fn resolve_axioms(keys: &str) -> CliResult<Vec<Axiom>> {
    let mut out = Vec::new();
    for key in keys.split(',').map(str::trim).filter(|k| !k.is_empty()) {
        if key == "all" {
            out.extend(Axiom::ALL);
            continue;
        }
        out.push(Axiom::parse(key).ok_or_else(|| {
            let known: Vec<&str> = Axiom::ALL.iter().map(|a| a.key()).collect();
            CliError::Usage(format!("unknown axiom `{key}`; known: {}", known.join(", ")))
        })?);
    }
    Ok(out)
}

fn read_profile(path: &str) -> CliResult<Profile> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    parse_profile(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn env_cap() -> CliResult<Option<u128>> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{CAP_ENV} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

/// Runs one command, writing the report stream to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cap = match env_cap() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut s = Session {
        format: cli.format,
        out,
        err,
        mismatches: 0,
        cap,
    };
    match dispatch(&cli.command, &mut s) {
        Ok(()) if s.mismatches == 0 => EXIT_OK,
        Ok(()) => EXIT_MISMATCH,
        Err(e) => {
            let _ = writeln!(s.err, "error: {e}");
            match e {
                CliError::Core(ref c) if !is_input_error(c) => EXIT_MISMATCH,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn is_input_error(e: &choicelab_core::Error) -> bool {
    use choicelab_core::Error::*;
    matches!(
        e,
        Validation(_) | Syntax { .. } | UnknownLabel { .. } | TierOverlap { .. } | CapExceeded { .. }
    ) || e.is_precondition()
}

fn dispatch(command: &Command, s: &mut Session<'_>) -> CliResult<()> {
    match command {
        Command::Compute { scf, input } => compute(s, &resolve_rules(scf)?, &read_profile(input)?),
        Command::Axioms { scf, axiom, domain } => {
            axioms(s, &resolve_rules(scf)?, &resolve_axioms(axiom)?, &domain.spec(s.cap)?)
        }
        Command::Manipulate {
            scf,
            input,
            domain,
            flags,
        } => {
            let rules = resolve_rules(scf)?;
            let flags = flags.flags()?;
            match input {
                Some(path) => manipulate_profile(s, &rules, &read_profile(path)?, &flags),
                None => manipulate_domain(s, &rules, &domain.spec(s.cap)?, &flags),
            }
        }
        Command::Participation { scf, domain } => {
            participation(s, &resolve_rules(scf)?, &domain.spec(s.cap)?)
        }
        Command::Reproduce {
            recipe,
            scf,
            n,
            m,
            mode,
            group_size,
            pref,
            misreport,
            bless,
        } => {
            let opts = recipes::Options {
                scf: scf.clone(),
                n: *n,
                m: *m,
                mode: mode.map(Into::into),
                group_size: *group_size,
                pref: *pref,
                misreport: *misreport,
                bless: *bless,
            };
            recipes::reproduce(s, *recipe, &opts)
        }
        Command::Enumerate { domain } => enumerate(s, &domain.spec(s.cap)?),
    }
}

fn compute(s: &mut Session<'_>, rules: &[Scf], profile: &Profile) -> CliResult<()> {
    let u = profile.universe();
    let mut undefined = None;
    for scf in rules {
        match scf.apply(profile, profile.all()) {
            Ok(c) => s.emit(
                |o| format!("{}: {}\n", scf.key(), format_set(u, c.set(), o)),
                || {
                    let labels: Vec<String> = c.iter().map(|a| u.label(a)).collect();
                    json!({ "scf": scf.key(), "choice": labels })
                },
            )?,
            Err(e) if e.is_precondition() => {
                s.emit(
                    |_| format!("{}: undefined ({e})\n", scf.key()),
                    || json!({ "scf": scf.key(), "error": e.to_string() }),
                )?;
                undefined = Some(e);
            }
            Err(e) => return Err(e.into()),
        }
    }
    match undefined {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn axioms(s: &mut Session<'_>, rules: &[Scf], axioms: &[Axiom], spec: &DomainSpec) -> CliResult<()> {
    let mut reports = Vec::new();
    for scf in rules {
        let d = scf.descriptor();
        for &axiom in axioms {
            let r = check(axiom, scf, spec)?;
            s.emit(|o| axiom_report_text(&r, o), || axiom_report_json(&r))?;
            let claimed = match axiom {
                Axiom::SetMonotonicity => d.claimed_set_monotone,
                Axiom::CondorcetExtension => d.claimed_condorcet_extension,
                Axiom::Pairwiseness => d.pairwise,
                _ => false,
            };
            if claimed && !r.passed() {
                s.mismatch(format!("{} is registered as satisfying {axiom} but fails it", scf.key()));
            }
            reports.push(r);
        }
    }
    if let Err(e) = check_lattice(&reports) {
        s.mismatch(e.to_string());
    }
    Ok(())
}

/// Set-monotone rules admit no strong manipulation.
fn expect_strategyproof(scf: &Scf, flags: &ModeFlags) -> bool {
    scf.descriptor().claimed_set_monotone && flags.misreport == MisreportClass::KeepTies
}

fn manipulate_profile(s: &mut Session<'_>, rules: &[Scf], profile: &Profile, flags: &ModeFlags) -> CliResult<()> {
    for scf in rules {
        let found = find_manipulation(scf, profile, profile.all(), flags)?;
        match &found {
            Some(w) => s.emit(
                |o| format!("{}: manipulable\n{}", scf.key(), manipulation_witness_text(w, o)),
                || json!({ "scf": scf.key(), "verdict": "fail", "witness": manipulation_witness_json(w) }),
            )?,
            None => s.emit(
                |_| format!("{}: pass ({flags})\n", scf.key()),
                || json!({ "scf": scf.key(), "verdict": "pass", "flags": flags.to_string() }),
            )?,
        }
        if found.is_some() && expect_strategyproof(scf, flags) {
            s.mismatch(format!("{} admits a strong manipulation", scf.key()));
        }
    }
    Ok(())
}

fn manipulate_domain(s: &mut Session<'_>, rules: &[Scf], spec: &DomainSpec, flags: &ModeFlags) -> CliResult<()> {
    for scf in rules {
        let r = check_group_strategyproofness(scf, spec, flags)?;
        s.emit(|o| manipulation_report_text(&r, o), || manipulation_report_json(&r))?;
        if !r.passed() && expect_strategyproof(scf, flags) {
            s.mismatch(format!("{} admits a strong manipulation on {spec}", scf.key()));
        }
    }
    Ok(())
}

fn participation(s: &mut Session<'_>, rules: &[Scf], spec: &DomainSpec) -> CliResult<()> {
    for scf in rules {
        let r = check_participation(scf, spec)?;
        s.emit(|o| participation_report_text(&r, o), || participation_report_json(&r))?;
        let d = scf.descriptor();
        if !r.passed() && d.claimed_set_monotone && d.pairwise {
            s.mismatch(format!("{} fails participation on {spec}", scf.key()));
        }
    }
    Ok(())
}

fn enumerate(s: &mut Session<'_>, spec: &DomainSpec) -> CliResult<()> {
    let relations = spec.relations()?.len();
    let mut profiles = 0u64;
    let mut with_winner = 0u64;
    let mut with_ties = 0u64;
    let mut margins = std::collections::BTreeSet::new();
    for p in enumerate_profiles(spec)? {
        profiles += 1;
        let g = margin_matrix(&p, p.all());
        if condorcet_winner(&g).is_some() {
            with_winner += 1;
        }
        if g.first_tie(p.all().set()).is_some() {
            with_ties += 1;
        }
        margins.insert(g.key_on(p.all().set()));
    }
    let distinct = margins.len();
    s.emit(
        |_| {
            format!(
                "begin domain\ndomain: {spec}\nrelations: {relations}\nprofiles: {profiles}\n\
                 condorcet-winner: {with_winner}\nmajority-ties: {with_ties}\n\
                 distinct-margins: {distinct}\nend domain\n"
            )
        },
        || {
            json!({
                "kind": "domain",
                "domain": spec.to_string(),
                "relations": relations,
                "profiles": profiles,
                "condorcet_winner": with_winner,
                "majority_ties": with_ties,
                "distinct_margins": distinct,
            })
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn exec(args: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("choicelab").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn rule_keys() {
        assert_eq!(resolve_rules("all").unwrap().len(), STANDARD_KEYS.len());
        let keys: Vec<String> = resolve_rules("mc, bp-lex").unwrap().iter().map(|s| s.key().to_string()).collect();
        assert_eq!(keys, ["mc", "bp-lex"]);
        assert!(matches!(resolve_rules("nope"), Err(CliError::Usage(_))));
        assert!(matches!(resolve_rules(" , "), Err(CliError::Usage(_))));
    }

    #[test]
    fn axiom_keys() {
        assert_eq!(resolve_axioms("all").unwrap().len(), Axiom::ALL.len());
        assert_eq!(resolve_axioms("ssp").unwrap(), [Axiom::Ssp]);
        assert!(resolve_axioms("bogus").is_err());
    }

    #[test]
    fn passing_axiom_report() {
        let (code, out, _) = exec(&["axioms", "--scf", "topcycle", "--axiom", "setmono", "--n", "3", "--m", "3"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verdict: pass"));
        assert!(out.contains("instances: 216"));
    }

    #[test]
    fn unclaimed_failures_are_not_mismatches() {
        let (code, out, err) = exec(&["axioms", "--scf", "plurality", "--axiom", "pairwise", "--n", "3", "--m", "3"]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.contains("verdict: fail"));
        assert!(out.contains("begin axiom-witness"));
    }

    #[test]
    fn sampling_needs_a_seed() {
        let (code, _, err) = exec(&["enumerate", "--n", "2", "--m", "3", "--samples", "5"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }
}
