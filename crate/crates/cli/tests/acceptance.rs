//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any of them fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use choicelab_core::io::parse_profile;
use choicelab_core::prefcore::condorcet_winner;
use choicelab_core::solutions::simplex::Rational;
use choicelab_core::solutions::{
    bipartisan, maximin_strategy, minimal_covering_set, tie_broken_scf, top_cycle, uncovered_set,
};
use choicelab_core::{
    AltSet, FeasibleSet, MarginMatrix, PreferenceRelation, Profile, Registry, Scf,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Run {
    code: i32,
    stdout: Vec<u8>,
    elapsed: Duration,
}

impl Run {
    fn lines(&self) -> Result<Vec<Value>, String> {
        String::from_utf8_lossy(&self.stdout)
            .lines()
            .map(|l| serde_json::from_str(l).map_err(|e| format!("bad JSON line {l:?}: {e}")))
            .collect()
    }
}

#[derive(Default)]
struct Harness {
    history: Vec<(Vec<String>, Vec<u8>)>,
}

impl Harness {
    fn run(&mut self, args: &[&str]) -> Result<Run, String> {
        let mut full = vec!["--format".to_string(), "machine".to_string()];
        full.extend(args.iter().map(|s| s.to_string()));
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_choicelab"))
            .args(&full)
            .output()
            .map_err(|e| format!("cannot spawn the binary: {e}"))?;
        let elapsed = start.elapsed();
        self.history.push((full, out.stdout.clone()));
        Ok(Run {
            code: out.status.code().unwrap_or(-1),
            stdout: out.stdout,
            elapsed,
        })
    }

    fn run_ok(&mut self, args: &[&str]) -> Result<(Vec<Value>, Duration), String> {
        let run = self.run(args)?;
        ensure!(run.code == 0, "`{}` exited with {}", args.join(" "), run.code);
        Ok((run.lines()?, run.elapsed))
    }
}

// ---------------------------------------------------------------- oracles

fn rule(key: &str) -> Scf {
    Registry::standard().get(key).unwrap().clone()
}

fn profile(v: &Value) -> Result<Profile, String> {
    let text = v.as_str().ok_or("profile is not a string")?;
    parse_profile(text).map_err(|e| e.to_string())
}

fn alt_set(p: &Profile, v: &Value) -> Result<AltSet, String> {
    let mut set = AltSet::EMPTY;
    for label in v.as_array().ok_or("set is not an array")? {
        let label = label.as_str().ok_or("label is not a string")?;
        set = set.insert(p.universe().index_of(label).ok_or(format!("unknown {label}"))?);
    }
    Ok(set)
}

fn alt(p: &Profile, v: &Value) -> Result<usize, String> {
    let label = v.as_str().ok_or("label is not a string")?;
    p.universe().index_of(label).ok_or(format!("unknown {label}"))
}

/// Majority margins counted voter by voter.
fn margins(p: &Profile) -> Vec<Vec<i32>> {
    let m = p.m();
    let mut g = vec![vec![0; m]; m];
    for r in p.voters() {
        for a in 0..m {
            for b in 0..m {
                if a != b && r.prefers(a, b) {
                    g[a][b] += 1;
                    g[b][a] -= 1;
                }
            }
        }
    }
    g
}

fn margins_from_tiers(ballots: &[Vec<Vec<usize>>], m: usize) -> Vec<Vec<i32>> {
    let mut g = vec![vec![0; m]; m];
    for tiers in ballots {
        let rank = |a: usize| tiers.iter().position(|t| t.contains(&a)).unwrap();
        for a in 0..m {
            for b in 0..m {
                g[a][b] += (rank(b) as i32 - rank(a) as i32).signum();
            }
        }
    }
    g
}

fn oracle_condorcet(g: &[Vec<i32>]) -> Option<usize> {
    (0..g.len()).find(|&a| (0..g.len()).all(|b| a == b || g[a][b] > 0))
}

fn matches_tiers(r: &PreferenceRelation, tiers: &[Vec<usize>]) -> bool {
    let rank = |a: usize| tiers.iter().position(|t| t.contains(&a)).unwrap();
    let m = r.size();
    (0..m).all(|a| (0..m).all(|b| r.weakly_prefers(a, b) == (rank(a) <= rank(b))))
}

fn table_ballots(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for k in 0..m {
        let rest: Vec<usize> = (0..m).filter(|&a| a != k).collect();
        out.push(vec![rest.clone(), vec![k]]);
        out.push(vec![rest, vec![k]]);
    }
    for k in 0..m {
        let next = (k + 1) % m;
        let rest: Vec<usize> = (0..m).filter(|&a| a != k && a != next).collect();
        out.push(vec![rest, vec![k], vec![next]]);
    }
    out
}

fn kelly_weak(x: AltSet, y: AltSet, r: &PreferenceRelation) -> bool {
    x.iter().all(|a| y.iter().all(|b| r.weakly_prefers(a, b)))
}

fn kelly_strict(x: AltSet, y: AltSet, r: &PreferenceRelation) -> bool {
    kelly_weak(x, y, r) && x.iter().any(|a| y.iter().any(|b| r.prefers(a, b)))
}

fn keeps_ties(truth: &PreferenceRelation, report: &PreferenceRelation) -> bool {
    let m = truth.size();
    (0..m).all(|a| (0..m).all(|b| !truth.indifferent(a, b) || report.indifferent(a, b)))
}

fn choice(scf: &Scf, p: &Profile, a: AltSet) -> Result<AltSet, String> {
    let fa = FeasibleSet::new(a).map_err(|e| e.to_string())?;
    scf.apply(p, fa).map(|c| c.set()).map_err(|e| e.to_string())
}

/// Checks a manipulation witness from its raw JSON: the group alone
/// changes its ballots, the recorded outcomes are reproduced and every
/// member gains under the stated comparison.
fn replay_manipulation(scf: &Scf, w: &Value) -> Result<(Profile, Profile), String> {
    ensure!(w["verified"] == true, "witness not marked verified");
    let truth = profile(&w["truth"])?;
    let lie = profile(&w["misreport"])?;
    ensure!(truth.n() == lie.n(), "profiles of different size");
    let a = alt_set(&truth, &w["feasible"])?;
    let before = alt_set(&truth, &w["before"])?;
    let after = alt_set(&truth, &w["after"])?;
    ensure!(choice(scf, &truth, a)? == before, "before does not replay");
    ensure!(choice(scf, &lie, a)? == after, "after does not replay");
    ensure!(before != after, "outcome unchanged");
    let group: Vec<usize> = w["group"]
        .as_array()
        .ok_or("group missing")?
        .iter()
        .map(|v| v.as_u64().unwrap() as usize - 1)
        .collect();
    for i in 0..truth.n() {
        let same = truth.voter(i) == lie.voter(i);
        ensure!(same != group.contains(&i), "voter {} does not match the group", i + 1);
    }
    let strict = w["flags"]["pref"] == "strict";
    let keep = w["flags"]["misreport"] == "keep-ties";
    for &i in &group {
        let r = truth.voter(i);
        let gains = if strict { kelly_strict(after, before, r) } else { kelly_weak(after, before, r) };
        ensure!(gains, "voter {} does not gain", i + 1);
        ensure!(!keep || keeps_ties(r, lie.voter(i)), "voter {} breaks a tie", i + 1);
    }
    Ok((truth, lie))
}

/// Replays a set-monotonicity failure from its JSON witness.
fn replay_setmono(scf: &Scf, w: &Value) -> Result<(Profile, Profile, AltSet), String> {
    let r = profile(&w["original"])?;
    let r2 = profile(&w["altered"])?;
    let a = alt_set(&r, &w["feasible"])?;
    let voter = w["voter"].as_u64().ok_or("voter missing")? as usize - 1;
    let pair = w["pair"].as_array().ok_or("pair missing")?;
    let (p, q) = (alt(&r, &pair[0])?, alt(&r, &pair[1])?);
    let before = choice(scf, &r, a)?;
    ensure!(before == alt_set(&r, &w["before"])?, "before does not replay");
    ensure!(choice(scf, &r2, a)? == alt_set(&r, &w["after"])?, "after does not replay");
    ensure!(before != choice(scf, &r2, a)?, "choice set unchanged");
    ensure!(a.contains(p) && a.contains(q) && !before.contains(q), "weakened alternative is chosen");
    ensure!(r2.voter(voter).weakly_prefers(p, q), "pair not weakened");
    for i in 0..r.n() {
        for x in 0..r.m() {
            for y in 0..r.m() {
                let on_pair = i == voter && ((x, y) == (p, q) || (x, y) == (q, p));
                let same = r.voter(i).verdict(x, y) == r2.voter(i).verdict(x, y);
                ensure!(x == y || on_pair || same, "altered outside the pair");
            }
        }
    }
    Ok((r, r2, a))
}

fn tournaments(m: usize) -> impl Iterator<Item = MarginMatrix> {
    (0..1u64 << (m * (m - 1) / 2)).map(move |bits| MarginMatrix::tournament(m, bits))
}

fn covered_in(g: &MarginMatrix, within: AltSet, y: usize) -> bool {
    within.iter().any(|x| {
        x != y
            && g.get(x, y) > 0
            && within
                .iter()
                .all(|z| z == x || z == y || g.get(y, z) <= 0 || g.get(x, z) > 0)
    })
}

fn mc_oracle(g: &MarginMatrix, a: AltSet) -> Result<AltSet, String> {
    let covering: Vec<AltSet> = a
        .subsets()
        .filter(|b| !b.is_empty())
        .filter(|&b| a.difference(b).iter().all(|y| covered_in(g, b.insert(y), y)))
        .collect();
    let minimal: Vec<AltSet> = covering
        .iter()
        .copied()
        .filter(|&b| !covering.iter().any(|&c| c != b && c.is_subset(b)))
        .collect();
    ensure!(minimal.len() == 1, "no unique minimal covering set");
    Ok(minimal[0])
}

fn exact_certificate(g: &MarginMatrix, m: usize) -> Result<Vec<Rational>, String> {
    let s = maximin_strategy(g, FeasibleSet::full(m));
    let p: Vec<Rational> = (0..m).map(|x| s.probability(x)).collect();
    ensure!(p.iter().all(|x| !x.is_negative()), "negative probability");
    let total = p.iter().fold(Rational::zero(), |acc, x| acc + x);
    ensure!(total == Rational::one(), "probabilities sum to {total}");
    for col in 0..m {
        let payoff = (0..m).fold(Rational::zero(), |acc, row| {
            acc + &p[row] * Rational::from_integer(g.get(row, col).into())
        });
        ensure!(!payoff.is_negative(), "column {col} pays {payoff}");
    }
    Ok(p)
}

// ---------------------------------------------------------------- criteria

const THM1_RULES: [&str; 5] = ["copeland", "topcycle", "uncovered", "mc", "bp"];
const POSITIVE: [&str; 3] = ["mc", "bp", "topcycle"];
const CRITERION2_DOMAINS: [(u64, u64, &str, u64); 2] = [(3, 3, "strict", 216), (2, 3, "weak", 169)];

fn domain_is(d: &Value, n: u64, m: u64, mode: &str) -> bool {
    d["n"] == n && d["m"] == m && d["mode"] == mode && d["style"]["kind"] == "exhaustive"
}

fn criterion1(h: &mut Harness) -> Check {
    let (lines, elapsed) = h.run_ok(&["reproduce", "thm1"])?;
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    let mut seen = BTreeSet::new();
    for l in &lines {
        let key = l["scf"].as_str().ok_or("scf missing")?.to_string();
        let m = l["m"].as_u64().ok_or("m missing")? as usize;
        let scf = rule(&key);
        let (truth, lie) = replay_manipulation(&scf, &l["witness"])?;
        ensure!(l["witness"]["flags"]["pref"] == "strict", "{key}: not a strict-Kelly witness");
        let chosen = alt(&truth, &l["chosen"])?;
        let lifted = alt(&truth, &l["lifted"])?;
        ensure!(lifted == (chosen + m - 1) % m, "{key} m={m}: wrong lifted alternative");
        ensure!(l["condorcet_winner_after_lift"] == l["lifted"], "{key} m={m}: winner mismatch");
        let r = table_ballots(m);
        let lift = {
            let middle: Vec<usize> = (0..m).filter(|&a| a != chosen && a != lifted).collect();
            vec![vec![lifted], middle, vec![chosen]]
        };
        let mut r1 = r.clone();
        r1[2 * chosen] = lift.clone();
        let mut r2 = r1.clone();
        r2[2 * chosen + 1] = lift;
        ensure!(
            oracle_condorcet(&margins_from_tiers(&r2, m)) == Some(lifted),
            "{key} m={m}: lifted alternative is not the Condorcet winner of R''"
        );
        let (want_truth, want_lie) = match l["branch"].as_str() {
            Some("first-voter-at-R") => (&r, &r1),
            Some("second-voter-at-R'") => (&r1, &r2),
            other => return Err(format!("unknown branch {other:?}")),
        };
        for i in 0..3 * m {
            ensure!(matches_tiers(truth.voter(i), &want_truth[i]), "{key} m={m}: truth voter {}", i + 1);
            ensure!(matches_tiers(lie.voter(i), &want_lie[i]), "{key} m={m}: misreport voter {}", i + 1);
        }
        ensure!(margins(&truth) == margins_from_tiers(want_truth, m), "{key} m={m}: margins");
        seen.insert((key, m));
    }
    let want: BTreeSet<_> = THM1_RULES
        .iter()
        .flat_map(|k| (3..=5).map(move |m| (k.to_string(), m)))
        .collect();
    ensure!(seen == want, "covered {seen:?}");
    Ok(format!("15 witnesses verified in {:.2}s", elapsed.as_secs_f64()))
}

fn criterion2(h: &mut Harness) -> Check {
    let (lines, elapsed) = h.run_ok(&["reproduce", "thm2"])?;
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    let mut seen = BTreeSet::new();
    for l in &lines {
        let key = l["scf"].as_str().ok_or("scf missing")?;
        ensure!(l["verdict"] == "pass" && l["witness"].is_null(), "{key} is manipulable");
        let d = &l["domain"];
        let &(n, _, mode, count) = CRITERION2_DOMAINS
            .iter()
            .find(|(n, m, mode, _)| domain_is(d, *n, *m, mode))
            .ok_or(format!("unexpected domain {d}"))?;
        ensure!(l["instances"] == count, "{key} {mode}: {} instances", l["instances"]);
        let flags = l["flags"].as_str().unwrap_or_default();
        ensure!(
            flags.contains("pref=weak")
                && flags.contains("misreport=keep-ties")
                && flags.contains(&format!("group<={n}")),
            "{key}: flags {flags}"
        );
        seen.insert((key.to_string(), mode));
    }
    ensure!(seen.len() == 6, "covered {seen:?}");
    Ok(format!("216 + 169 profiles, no manipulation, {:.2}s", elapsed.as_secs_f64()))
}

/// Failure witnesses per negative rule, shared with criterion 4.
type Thm3 = BTreeMap<String, Value>;

fn criterion3(h: &mut Harness, thm3: &mut Thm3) -> Check {
    let (lines, _) = h.run_ok(&["reproduce", "thm3"])?;
    let mut detail = Vec::new();
    for l in &lines {
        let key = l["scf"].as_str().ok_or("scf missing")?.to_string();
        let reports = l["reports"].as_array().ok_or("reports missing")?;
        let scf = rule(&key);
        if POSITIVE.contains(&key.as_str()) {
            for &(n, m, mode, count) in &CRITERION2_DOMAINS {
                let r = reports
                    .iter()
                    .find(|r| domain_is(&r["domain"], n, m, mode))
                    .ok_or(format!("{key}: no report for ({n},{m},{mode})"))?;
                ensure!(r["verdict"] == "pass" && r["instances"] == count, "{key} fails on {mode}");
            }
        } else {
            let r = reports
                .iter()
                .find(|r| r["verdict"] == "fail")
                .ok_or(format!("{key}: no failure witness"))?;
            let (n, m) = (r["domain"]["n"].as_u64().unwrap(), r["domain"]["m"].as_u64().unwrap());
            ensure!(n <= 3 && m <= 4, "{key}: witness needs n={n} m={m}");
            replay_setmono(&scf, &r["witness"]).map_err(|e| format!("{key}: {e}"))?;
            detail.push(format!("{key} n={n} m={m} {}", r["domain"]["mode"].as_str().unwrap()));
            thm3.insert(key, l.clone());
        }
    }
    for key in ["copeland", "uncovered", "borda"] {
        ensure!(thm3.contains_key(key), "{key} missing");
    }
    Ok(format!("positive rules pass; witnesses: {}", detail.join(", ")))
}

fn criterion4(thm3: &Thm3) -> Check {
    for key in ["copeland", "borda"] {
        let l = thm3.get(key).ok_or(format!("{key}: no thm3 line"))?;
        let scf = rule(key);
        let failure = l["reports"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["verdict"] == "fail")
            .unwrap();
        let (r, r2, a) = replay_setmono(&scf, &failure["witness"])?;
        let attack = &l["attack"];
        let w = &attack["witness"];
        let (truth, lie) = replay_manipulation(&scf, w).map_err(|e| format!("{key}: {e}"))?;
        ensure!(attack["joiner"] == r.n() as u64 + 1, "{key}: joiner is not voter n+1");
        ensure!(w["group"] == serde_json::json!([r.n() + 1]), "{key}: group {}", w["group"]);
        ensure!(w["flags"]["misreport"] == "keep-ties", "{key}: not a strong manipulation");
        let s = profile(&attack["s"])?;
        let s2 = profile(&attack["s_prime"])?;
        ensure!((truth == s && lie == s2) || (truth == s2 && lie == s), "{key}: S/S' mismatch");
        let fw = &failure["witness"];
        let voter = fw["voter"].as_u64().unwrap() as usize - 1;
        let (p, q) = (alt(&r, &fw["pair"][0])?, alt(&r, &fw["pair"][1])?);
        for i in 0..r.n() {
            ensure!(s.voter(i) == s2.voter(i), "{key}: S and S' differ on voter {}", i + 1);
            if i != voter {
                ensure!(s.voter(i) == r.voter(i), "{key}: voter {} changed", i + 1);
                continue;
            }
            ensure!(s.voter(i).indifferent(p, q), "{key}: voter {} keeps the pair", i + 1);
            for x in 0..r.m() {
                for y in 0..r.m() {
                    let on_pair = (x, y) == (p, q) || (x, y) == (q, p);
                    let same = s.voter(i).verdict(x, y) == r.voter(i).verdict(x, y);
                    ensure!(x == y || on_pair || same, "{key}: voter {} changed off the pair", i + 1);
                }
            }
        }
        ensure!(margins(&s) == margins(&r), "{key}: margins of S differ from R");
        ensure!(margins(&s2) == margins(&r2), "{key}: margins of S' differ from R'");
        ensure!(choice(&scf, &s, a)? == choice(&scf, &r, a)?, "{key}: f(S) != f(R)");
        ensure!(choice(&scf, &s2, a)? == choice(&scf, &r2, a)?, "{key}: f(S') != f(R')");
    }
    Ok("copeland and borda attacks verified by voter n+1".into())
}

fn criterion5() -> Check {
    let mut count = 0;
    for g in tournaments(5) {
        let p = exact_certificate(&g, 5)?;
        if let Some(w) = condorcet_winner(&g) {
            ensure!(p[w] == Rational::one(), "Condorcet winner not pure");
        }
        count += 1;
    }
    ensure!(count == 1024, "saw {count} tournaments");
    for m in 1..=5 {
        let g = MarginMatrix::tournament(m, (1u64 << (m * (m - 1) / 2)) - 1);
        let p = exact_certificate(&g, m)?;
        ensure!(p[0] == Rational::one(), "transitive m={m} not pure");
    }
    let cycle = MarginMatrix::tournament(3, 0b101);
    ensure!((0..3).all(|a| cycle.get(a, (a + 1) % 3) > 0), "not a 3-cycle");
    let third = Rational::new(1.into(), 3.into());
    ensure!(exact_certificate(&cycle, 3)? == vec![third.clone(), third.clone(), third], "3-cycle");
    Ok("1024 tournaments, 5 transitive, 3-cycle exact".into())
}

fn criterion6(h: &mut Harness) -> Check {
    let mut count = 0;
    for m in 1..=5 {
        for g in tournaments(m) {
            let a = FeasibleSet::full(m);
            let bp = bipartisan(&g, a).map_err(|e| e.to_string())?.set();
            let mc = minimal_covering_set(&g, a).map_err(|e| e.to_string())?.set();
            let uc = uncovered_set(&g, a).map_err(|e| e.to_string())?.set();
            let tc = top_cycle(&g, a).map_err(|e| e.to_string())?.set();
            ensure!(bp.is_subset(mc) && mc.is_subset(uc) && uc.is_subset(tc), "chain broken");
            ensure!(mc == mc_oracle(&g, a.set())?, "mc differs from the oracle");
            count += 1;
        }
    }
    for key in POSITIVE {
        for &(n, m, mode, _) in &CRITERION2_DOMAINS {
            let (lines, _) = h.run_ok(&[
                "axioms", "--scf", key, "--axiom", "ssp", "--n", &n.to_string(), "--m",
                &m.to_string(), "--mode", mode,
            ])?;
            ensure!(lines.len() == 1 && lines[0]["verdict"] == "pass", "{key} fails ssp on {mode}");
        }
    }
    let (lines, _) =
        h.run_ok(&["axioms", "--scf", "copeland", "--axiom", "ssp", "--n", "2", "--m", "3", "--mode", "weak"])?;
    let w = &lines[0]["witness"];
    ensure!(lines[0]["verdict"] == "fail", "copeland passes ssp");
    let scf = rule("copeland");
    let p = profile(&w["original"])?;
    let a = alt_set(&p, &w["feasible"])?;
    let b = alt_set(&p, &w["subset"])?;
    let fa = choice(&scf, &p, a)?;
    ensure!(fa.is_subset(b) && b.is_subset(a), "subset does not contain the choice set");
    ensure!(choice(&scf, &p, b)? != fa, "copeland ssp witness does not replay");
    Ok(format!("{count} tournaments; ssp passes for mc/bp/topcycle, copeland witness replays"))
}

fn criterion7(h: &mut Harness) -> Check {
    let all = "copeland,borda,topcycle,uncovered,mc,bp";
    let (lines, _) = h.run_ok(&["reproduce", "prop3", "--scf", all])?;
    ensure!(lines.len() == 6, "{} lines", lines.len());
    for l in &lines {
        let key = l["scf"].as_str().ok_or("scf missing")?;
        ensure!(l["indifferent_joiner"] == "invariant", "{key}: indifferent joiner matters");
        if !POSITIVE.contains(&key) {
            continue;
        }
        let part = &l["participation"];
        ensure!(part["verdict"] == "pass", "{key} fails participation");
        ensure!(domain_is(&part["domain"], 3, 3, "strict"), "{key}: domain {}", part["domain"]);
        let wrapper = &l["wrapper"];
        ensure!(wrapper["verdict"] == "fail", "{key}-lex passes participation");
        let lex = tie_broken_scf(&rule(key));
        let f = &wrapper["witness"];
        let base = profile(&f["base"])?;
        let joined = profile(&f["joined"])?;
        ensure!(joined.n() == base.n() + 1 && f["joiner"] == joined.n() as u64, "{key}: joiner");
        ensure!(base.voters() == &joined.voters()[..base.n()], "{key}: base voters changed");
        let a = alt_set(&base, &f["feasible"])?;
        let without = choice(&lex, &base, a)?;
        let with = choice(&lex, &joined, a)?;
        ensure!(without == alt_set(&base, &f["without"])?, "{key}: without does not replay");
        ensure!(with == alt_set(&base, &f["with"])?, "{key}: with does not replay");
        let joiner = joined.voter(base.n());
        ensure!(kelly_strict(without, with, joiner), "{key}: abstaining is not better");
        let (truth, lie) = replay_manipulation(&lex, &l["reduction"]).map_err(|e| format!("{key}: {e}"))?;
        ensure!(truth == joined, "{key}: reduction starts elsewhere");
        let blank = lie.voter(base.n());
        ensure!((0..3).all(|x| (0..3).all(|y| blank.indifferent(x, y))), "{key}: misreport not blank");
    }
    Ok("mc/bp/topcycle participate; indifferent joiners inert; lex wrappers reduce".into())
}

fn criterion8(h: &mut Harness) -> Check {
    let domains = [
        ("3", "3", "strict"),
        ("2", "3", "strict"),
        ("2", "3", "weak"),
        ("2", "3", "general"),
        ("1", "4", "weak"),
        ("2", "4", "strict"),
    ];
    let mut checked = 0;
    for (n, m, mode) in domains {
        let (lines, _) =
            h.run_ok(&["axioms", "--scf", "all", "--axiom", "all", "--n", n, "--m", m, "--mode", mode])?;
        let mut verdicts: BTreeMap<(String, String), bool> = BTreeMap::new();
        for l in &lines {
            let v = l["verdict"].as_str().unwrap_or_default();
            if v == "pass" || v == "fail" {
                let key = (l["scf"].as_str().unwrap().to_string(), l["axiom"].as_str().unwrap().to_string());
                verdicts.insert(key, v == "pass");
            }
        }
        let scfs: BTreeSet<String> = verdicts.keys().map(|(s, _)| s.clone()).collect();
        ensure!(scfs.len() >= 7, "only {} rules reported on ({n},{m},{mode})", scfs.len());
        for s in &scfs {
            let get = |ax: &str| verdicts.get(&(s.clone(), ax.to_string())).copied();
            if let (Some(true), Some(true), Some(setmono)) = (get("strongmono"), get("iua"), get("setmono")) {
                ensure!(setmono, "{s} on ({n},{m},{mode}): strongmono and iua without setmono");
            }
            if get("setmono") == Some(true) {
                ensure!(get("mono") != Some(false), "{s} on ({n},{m},{mode}): setmono without mono");
                ensure!(get("iua") != Some(false), "{s} on ({n},{m},{mode}): setmono without iua");
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} rule/domain combinations consistent"))
}

fn criterion9(h: &Harness) -> Check {
    let mut fresh = Harness::default();
    for (args, first) in &h.history {
        let args: Vec<&str> = args[2..].iter().map(String::as_str).collect();
        let again = fresh.run(&args)?;
        ensure!(&again.stdout == first, "`{}` is not deterministic", args.join(" "));
    }
    Ok(format!("{} commands byte-identical", h.history.len()))
}

fn main() -> ExitCode {
    let mut h = Harness::default();
    let mut thm3 = Thm3::new();
    let mut results = vec![
        (1, criterion1(&mut h)),
        (2, criterion2(&mut h)),
        (3, criterion3(&mut h, &mut thm3)),
    ];
    results.push((4, criterion4(&thm3)));
    results.push((5, criterion5()));
    results.push((6, criterion6(&mut h)));
    results.push((7, criterion7(&mut h)));
    results.push((8, criterion8(&mut h)));
    results.push((9, criterion9(&h)));
    let mut failed = false;
    for (n, r) in results {
        match r {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(why) => {
                failed = true;
                println!("criterion {n}: FAIL ({why})");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
