//! The profile text format.
//!
//! ```text
//! # comment
//! 3 2
//! labels: a b c
//! 1: a>b>c
//! 2: a=b>c
//! 1: ~ a>b, c>a, b=c
//! ```
//!
//! Line 1 is `m n`, then an optional `labels:` line, then voter lines
//! `k: body` with an optional multiplicity `k`. A weak-order body lists tiers
//! best first, members of a tier joined by `=`. A body starting with `~`
//! lists every unordered pair once as `x>y` or `x=y`, which also admits
//! intransitive relations. `n` may count either voter lines or voters after
//! expanding multiplicities. Without a `labels:` line the alternatives are
//! called `a1 .. am`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::prefcore::{PreferenceRelation, Profile, Universe, Verdict};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_graphic() && !matches!(c, '>' | '=' | ':' | '#' | ',' | '~')
}

/// One significant line: its 1-based number, the byte offset of the kept
/// text within the raw line, and the text without comment or edge spaces.
struct Line<'a> {
    number: usize,
    offset: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, at: usize, message: impl Into<String>) -> Error {
        syntax(self.number, self.offset + at + 1, message)
    }
}

fn significant_lines(text: &str) -> Result<Vec<Line<'_>>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        if let Some(pos) = raw.find(|c: char| !(c.is_ascii_graphic() || c == ' ' || c == '\t')) {
            return Err(syntax(k + 1, pos + 1, "only printable 7-bit characters are allowed"));
        }
        let kept = raw.split('#').next().unwrap_or("");
        let trimmed = kept.trim_start();
        let offset = kept.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if !trimmed.is_empty() {
            out.push(Line {
                number: k + 1,
                offset,
                text: trimmed,
            });
        }
    }
    Ok(out)
}

/// Tokens separated by whitespace, with their offsets.
fn words(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_ascii_whitespace(), start) {
            (true, Some(st)) => {
                out.push((st, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

fn parse_count(line: &Line<'_>, at: usize, word: &str, what: &str) -> Result<usize> {
    match word.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(line.err(at, format!("expected a positive {what}, found `{word}`"))),
    }
}

struct Parser<'a> {
    universe: &'a Universe,
    line: &'a Line<'a>,
}

impl Parser<'_> {
    fn label(&self, at: usize, raw: &str) -> Result<usize> {
        let label = raw.trim();
        let at = at + (raw.len() - raw.trim_start().len());
        if label.is_empty() {
            return Err(self.line.err(at, "expected a label"));
        }
        if let Some(bad) = label.find(|c: char| !is_label_char(c)) {
            return Err(self.line.err(at + bad, format!("unexpected character in `{label}`")));
        }
        self.universe.index_of(label).ok_or_else(|| Error::UnknownLabel {
            line: self.line.number,
            label: label.to_string(),
        })
    }

    fn tiers(&self, body: &str, at: usize) -> Result<PreferenceRelation> {
        let m = self.universe.len();
        let mut seen = vec![false; m];
        let mut tiers = Vec::new();
        let mut pos = at;
        for tier_text in body.split('>') {
            let mut tier = Vec::new();
            let mut p = pos;
            for member in tier_text.split('=') {
                let a = self.label(p, member)?;
                if seen[a] {
                    return Err(Error::TierOverlap {
                        line: self.line.number,
                        label: self.universe.label(a),
                    });
                }
                seen[a] = true;
                tier.push(a);
                p += member.len() + 1;
            }
            tiers.push(tier);
            pos += tier_text.len() + 1;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(self.line.err(
                at + body.len(),
                format!("tiers do not mention `{}`", self.universe.label(missing)),
            ));
        }
        PreferenceRelation::from_tiers(m, &tiers)
    }

    fn pairs(&self, body: &str, at: usize) -> Result<PreferenceRelation> {
        let m = self.universe.len();
        let mut verdicts: Vec<Option<Verdict>> = vec![None; m * m];
        let mut pos = at;
        for item in body.split(',') {
            let (sep, strict) = match (item.find('>'), item.find('=')) {
                (Some(i), None) => (i, true),
                (None, Some(i)) => (i, false),
                _ => {
                    return Err(self.line.err(pos, format!("expected `x>y` or `x=y`, found `{}`", item.trim())))
                }
            };
            let x = self.label(pos, &item[..sep])?;
            let y = self.label(pos + sep + 1, &item[sep + 1..])?;
            if x == y {
                return Err(self.line.err(pos, "a pair needs two distinct alternatives"));
            }
            let (lo, hi) = (x.min(y), x.max(y));
            if verdicts[lo * m + hi].is_some() {
                return Err(self.line.err(
                    pos,
                    format!(
                        "pair {} {} listed twice",
                        self.universe.label(lo),
                        self.universe.label(hi)
                    ),
                ));
            }
            verdicts[lo * m + hi] = Some(match (strict, x < y) {
                (false, _) => Verdict::Tied,
                (true, true) => Verdict::Above,
                (true, false) => Verdict::Below,
            });
            pos += item.len() + 1;
        }
        let mut list = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for a in 0..m {
            for b in a + 1..m {
                let Some(v) = verdicts[a * m + b] else {
                    return Err(self.line.err(
                        at + body.len(),
                        format!(
                            "pair {} {} is missing",
                            self.universe.label(a),
                            self.universe.label(b)
                        ),
                    ));
                };
                list.push(v);
            }
        }
        PreferenceRelation::from_verdicts(m, list)
    }

    fn voter_line(&self) -> Result<(usize, PreferenceRelation)> {
        let text = self.line.text;
        let (count, body, at) = match text.find(':') {
            Some(colon) => {
                let k = text[..colon].trim();
                let count = parse_count(self.line, 0, k, "multiplicity")?;
                (count, &text[colon + 1..], colon + 1)
            }
            None => (1, text, 0),
        };
        let lead = body.len() - body.trim_start().len();
        let body = body.trim();
        let at = at + lead;
        if body.is_empty() {
            return Err(self.line.err(at, "empty ballot"));
        }
        let rel = match body.strip_prefix('~') {
            Some(rest) => self.pairs(rest, at + 1)?,
            None => self.tiers(body, at)?,
        };
        Ok((count, rel))
    }
}

/// Parses a profile; see the module docs for the grammar.
pub fn parse_profile(text: &str) -> Result<Profile> {
    let lines = significant_lines(text)?;
    let Some(header) = lines.first() else {
        return Err(syntax(1, 1, "missing `m n` header"));
    };
    let head = words(header.text);
    if head.len() != 2 {
        return Err(header.err(0, "header must be `m n`"));
    }
    let m = parse_count(header, head[0].0, head[0].1, "alternative count")?;
    let n = parse_count(header, head[1].0, head[1].1, "voter count")?;
    let mut rest = &lines[1..];
    let universe = match rest.first() {
        Some(line) if line.text.starts_with("labels:") => {
            rest = &rest[1..];
            let tokens = words(&line.text["labels:".len()..]);
            if tokens.len() != m {
                return Err(line.err(
                    0,
                    format!("expected {m} labels, found {}", tokens.len()),
                ));
            }
            for &(at, t) in &tokens {
                if let Some(bad) = t.find(|c: char| !is_label_char(c)) {
                    return Err(line.err("labels:".len() + at + bad, format!("bad label `{t}`")));
                }
                if t.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(line.err("labels:".len() + at, format!("label `{t}` starts with a digit")));
                }
            }
            let labels: Vec<&str> = tokens.iter().map(|&(_, t)| t).collect();
            Universe::labeled(&labels).map_err(|e| line.err(0, e.to_string()))?
        }
        _ => Universe::unlabeled(m).map_err(|e| header.err(head[0].0, e.to_string()))?,
    };
    let universe = Arc::new(universe);
    let mut voters = Vec::new();
    for line in rest {
        let (count, rel) = Parser {
            universe: &universe,
            line,
        }
        .voter_line()?;
        voters.extend(std::iter::repeat_n(rel, count));
    }
    if n != rest.len() && n != voters.len() {
        return Err(header.err(
            head[1].0,
            format!(
                "header announces {n} voters but the file has {} voter lines and {} voters",
                rest.len(),
                voters.len()
            ),
        ));
    }
    Profile::new(universe, voters)
}

fn relation_body(universe: &Universe, rel: &PreferenceRelation) -> String {
    let label = |a: usize| universe.label(a);
    match rel.tiers() {
        Some(tiers) => tiers
            .iter()
            .map(|t| t.iter().map(|&a| label(a)).collect::<Vec<_>>().join("="))
            .collect::<Vec<_>>()
            .join(">"),
        None => {
            let m = rel.size();
            let mut items = Vec::new();
            for a in 0..m {
                for b in a + 1..m {
                    items.push(match rel.verdict(a, b) {
                        Verdict::Above => format!("{}>{}", label(a), label(b)),
                        Verdict::Tied => format!("{}={}", label(a), label(b)),
                        Verdict::Below => format!("{}>{}", label(b), label(a)),
                    });
                }
            }
            format!("~ {}", items.join(", "))
        }
    }
}

/// Canonical text of a profile: consecutive identical voters share a line,
/// the header counts lines, `labels:` appears iff the universe has labels,
/// tier members and pairs are listed by index.
pub fn serialize_profile(profile: &Profile) -> String {
    let universe = profile.universe();
    let mut groups: Vec<(usize, &PreferenceRelation)> = Vec::new();
    for r in profile.voters() {
        match groups.last_mut() {
            Some((k, last)) if *last == r => *k += 1,
            _ => groups.push((1, r)),
        }
    }
    let mut out = format!("{} {}\n", profile.m(), groups.len());
    if universe.has_explicit_labels() {
        out.push_str("labels: ");
        out.push_str(&universe.format_set(universe.all()));
        out.push('\n');
    }
    for (k, r) in groups {
        out.push_str(&format!("{k}: {}\n", relation_body(universe, r)));
    }
    out
}
