//! Key-value text blocks and JSON for reports and witnesses.
//!
//! A block opens with `begin <kind>` and closes with `end <kind>`. Inside
//! are `key: value` lines; embedded profiles sit between
//! `begin profile <role>` and `end profile` in the profile text format.
//! Voters are numbered from 1. Witness blocks end with
//! `checksum: <sha256>` over every preceding line of the block, newline
//! terminated, so a stored block can be compared with a fresh replay.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::profile_text::serialize_profile;
use crate::axioms::{AxiomReport, Witness};
use crate::error::{Error, Result};
use crate::manipulation::{
    ManipulationReport, ManipulationWitness, ParticipationReport, ParticipationWitness,
};
use crate::prefcore::{AltSet, DomainSpec, EnumerationStyle, Profile, Universe};

/// How choice sets are ordered in output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOrder {
    /// By label text.
    Label,
    /// By alternative index.
    Index,
}

/// `{a1,a3}` with members in the requested order.
pub fn format_set(universe: &Universe, set: AltSet, order: SetOrder) -> String {
    let text = match order {
        SetOrder::Label => universe.format_set_by_label(set),
        SetOrder::Index => universe.format_set(set),
    };
    format!("{{{}}}", text.replace(' ', ","))
}

fn set_labels(universe: &Universe, set: AltSet) -> Vec<String> {
    set.iter().map(|a| universe.label(a)).collect()
}

/// Lines of one block under construction.
struct Block {
    lines: Vec<String>,
}

impl Block {
    fn new(kind: &str) -> Self {
        Block {
            lines: vec![format!("begin {kind}")],
        }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    fn profile(&mut self, role: &str, p: &Profile) {
        self.lines.push(format!("begin profile {role}"));
        self.lines
            .extend(serialize_profile(p).lines().map(str::to_string));
        self.lines.push("end profile".into());
    }

    fn seal(mut self, kind: &str) -> String {
        let sum = checksum(&self.lines);
        self.kv("checksum", sum);
        self.finish(kind)
    }

    fn finish(mut self, kind: &str) -> String {
        self.lines.push(format!("end {kind}"));
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

fn checksum(lines: &[String]) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    format!("{:x}", h.finalize())
}

/// Recomputes the checksum of the first witness block in `text`.
pub fn verify_block_checksum(text: &str) -> Result<()> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| l.starts_with("begin ") && !l.starts_with("begin profile"))
        .ok_or_else(|| Error::MalformedWitness("no block found".into()))?;
    let at = lines[start..]
        .iter()
        .position(|l| l.starts_with("checksum: "))
        .map(|k| start + k)
        .ok_or_else(|| Error::MalformedWitness("block has no checksum".into()))?;
    let body: Vec<String> = lines[start..at].iter().map(|l| l.to_string()).collect();
    let stored = &lines[at]["checksum: ".len()..];
    if checksum(&body) != stored {
        return Err(Error::MalformedWitness("checksum mismatch".into()));
    }
    Ok(())
}

fn domain_json(d: &DomainSpec) -> Value {
    let style = match d.style {
        EnumerationStyle::Exhaustive => json!({ "kind": "exhaustive" }),
        EnumerationStyle::Sampled { count, seed } => {
            json!({ "kind": "sampled", "count": count, "seed": seed })
        }
    };
    json!({
        "n": d.voters,
        "m": d.alternatives,
        "mode": d.mode.key(),
        "style": style,
    })
}

/// Text block for an axiom violation.
pub fn axiom_witness_text(axiom: &str, w: &Witness, order: SetOrder) -> String {
    let u = w.profile.universe();
    let kind = format!("axiom-witness {axiom}");
    let mut b = Block::new(&kind);
    b.kv("feasible", format_set(u, w.feasible.set(), order));
    if let Some(i) = w.voter {
        b.kv("voter", i + 1);
    }
    if let Some((p, q)) = w.pair {
        b.kv("pair", format!("{} {}", u.label(p), u.label(q)));
    }
    if let Some(t) = w.tracked {
        b.kv("tracked", u.label(t));
    }
    if let Some(s) = w.subset {
        b.kv("subset", format_set(u, s.set(), order));
    }
    b.kv("before", format_set(u, w.before.set(), order));
    if let Some(after) = w.after {
        b.kv("after", format_set(u, after.set(), order));
    }
    b.profile("original", &w.profile);
    if let Some(alt) = &w.altered {
        b.profile("altered", alt);
    }
    b.seal(&kind)
}

pub fn axiom_report_text(r: &AxiomReport, order: SetOrder) -> String {
    let mut b = Block::new("axiom-report");
    b.kv("scf", &r.scf);
    b.kv("axiom", r.axiom);
    b.kv("domain", r.domain);
    b.kv("verdict", r.verdict().key());
    b.kv("instances", r.instances_checked);
    b.kv("skipped", r.skipped);
    let mut out = b.finish("axiom-report");
    if let Some(w) = &r.witness {
        out.push_str(&axiom_witness_text(r.axiom.key(), w, order));
    }
    out
}

pub fn axiom_witness_json(w: &Witness) -> Value {
    let u = w.profile.universe();
    json!({
        "feasible": set_labels(u, w.feasible.set()),
        "voter": w.voter.map(|i| i + 1),
        "pair": w.pair.map(|(p, q)| [u.label(p), u.label(q)]),
        "tracked": w.tracked.map(|t| u.label(t)),
        "subset": w.subset.map(|s| set_labels(u, s.set())),
        "before": set_labels(u, w.before.set()),
        "after": w.after.map(|a| set_labels(u, a.set())),
        "original": serialize_profile(&w.profile),
        "altered": w.altered.as_ref().map(serialize_profile),
    })
}

pub fn axiom_report_json(r: &AxiomReport) -> Value {
    json!({
        "kind": "axiom-report",
        "scf": r.scf,
        "axiom": r.axiom.key(),
        "domain": domain_json(&r.domain),
        "verdict": r.verdict().key(),
        "instances": r.instances_checked,
        "skipped": r.skipped,
        "witness": r.witness.as_ref().map(axiom_witness_json),
    })
}

fn group_text(group: &[usize]) -> String {
    group
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Text block for a manipulation: flags, group, both choice sets and both
/// profiles.
pub fn manipulation_witness_text(w: &ManipulationWitness, order: SetOrder) -> String {
    let u = w.truth.universe();
    let kind = "manipulation-witness";
    let mut b = Block::new(kind);
    b.kv("flags", w.flags);
    b.kv("feasible", format_set(u, w.feasible.set(), order));
    b.kv("group", group_text(&w.group));
    b.kv("before", format_set(u, w.before.set(), order));
    b.kv("after", format_set(u, w.after.set(), order));
    b.kv("verified", w.verified);
    b.profile("truth", &w.truth);
    b.profile("misreport", &w.misreport);
    b.seal(kind)
}

pub fn manipulation_witness_json(w: &ManipulationWitness) -> Value {
    let u = w.truth.universe();
    json!({
        "flags": {
            "pref": w.flags.preference.key(),
            "misreport": w.flags.misreport.key(),
            "require_change": w.flags.require_outcome_change,
            "max_group": w.flags.max_group_size,
            "reports": w.flags.misreport_mode.key(),
        },
        "feasible": set_labels(u, w.feasible.set()),
        "group": w.group.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "before": set_labels(u, w.before.set()),
        "after": set_labels(u, w.after.set()),
        "verified": w.verified,
        "truth": serialize_profile(&w.truth),
        "misreport": serialize_profile(&w.misreport),
    })
}

pub fn manipulation_report_text(r: &ManipulationReport, order: SetOrder) -> String {
    let mut b = Block::new("manipulation-report");
    b.kv("scf", &r.scf);
    b.kv("domain", r.domain);
    b.kv("flags", r.flags);
    b.kv("verdict", if r.passed() { "pass" } else { "fail" });
    b.kv("instances", r.instances_checked);
    b.kv("skipped", r.skipped);
    let mut out = b.finish("manipulation-report");
    if let Some(w) = &r.witness {
        out.push_str(&manipulation_witness_text(w, order));
    }
    out
}

pub fn manipulation_report_json(r: &ManipulationReport) -> Value {
    json!({
        "kind": "manipulation-report",
        "scf": r.scf,
        "domain": domain_json(&r.domain),
        "flags": r.flags.to_string(),
        "verdict": if r.passed() { "pass" } else { "fail" },
        "instances": r.instances_checked,
        "skipped": r.skipped,
        "witness": r.witness.as_ref().map(manipulation_witness_json),
    })
}

pub fn participation_witness_text(w: &ParticipationWitness, order: SetOrder) -> String {
    let u = w.base.universe();
    let kind = "participation-witness";
    let mut b = Block::new(kind);
    b.kv("feasible", format_set(u, w.feasible.set(), order));
    b.kv("joiner", w.base.n() + 1);
    b.kv("without", format_set(u, w.without.set(), order));
    b.kv("with", format_set(u, w.with.set(), order));
    b.profile("base", &w.base);
    b.profile("joined", &w.joined());
    b.seal(kind)
}

pub fn participation_witness_json(w: &ParticipationWitness) -> Value {
    let u = w.base.universe();
    json!({
        "feasible": set_labels(u, w.feasible.set()),
        "joiner": w.base.n() + 1,
        "without": set_labels(u, w.without.set()),
        "with": set_labels(u, w.with.set()),
        "base": serialize_profile(&w.base),
        "joined": serialize_profile(&w.joined()),
    })
}

pub fn participation_report_text(r: &ParticipationReport, order: SetOrder) -> String {
    let mut b = Block::new("participation-report");
    b.kv("scf", &r.scf);
    b.kv("domain", r.domain);
    b.kv("verdict", if r.passed() { "pass" } else { "fail" });
    b.kv("instances", r.instances_checked);
    b.kv("skipped", r.skipped);
    let mut out = b.finish("participation-report");
    if let Some(w) = &r.witness {
        out.push_str(&participation_witness_text(w, order));
    }
    out
}

pub fn participation_report_json(r: &ParticipationReport) -> Value {
    json!({
        "kind": "participation-report",
        "scf": r.scf,
        "domain": domain_json(&r.domain),
        "verdict": if r.passed() { "pass" } else { "fail" },
        "instances": r.instances_checked,
        "skipped": r.skipped,
        "witness": r.witness.as_ref().map(participation_witness_json),
    })
}
