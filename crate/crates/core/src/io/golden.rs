//! Tab-separated tables of choice sets: `instance-id TAB scf TAB labels`,
//! labels sorted and space separated.

use crate::error::{Error, Result};
use crate::prefcore::{AltSet, Universe};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub instance: String,
    pub scf: String,
    pub members: Vec<String>,
}

impl GoldenRow {
    pub fn new(instance: &str, scf: &str, universe: &Universe, set: AltSet) -> Self {
        let mut members: Vec<String> = set.iter().map(|a| universe.label(a)).collect();
        members.sort();
        GoldenRow {
            instance: instance.to_string(),
            scf: scf.to_string(),
            members,
        }
    }

    pub fn line(&self) -> String {
        format!("{}\t{}\t{}", self.instance, self.scf, self.members.join(" "))
    }
}

pub fn render_golden(rows: &[GoldenRow]) -> String {
    rows.iter().map(|r| r.line() + "\n").collect()
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            let fields: Vec<&str> = l.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::Syntax {
                    line: k + 1,
                    column: 1,
                    message: format!("expected 3 tab-separated fields, found {}", fields.len()),
                });
            }
            Ok(GoldenRow {
                instance: fields[0].to_string(),
                scf: fields[1].to_string(),
                members: fields[2].split(' ').filter(|s| !s.is_empty()).map(str::to_string).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let u = Universe::unlabeled(3).unwrap();
        let rows = vec![
            GoldenRow::new("t3-0", "mc", &u, AltSet::full(3)),
            GoldenRow::new("t3-1", "bp", &u, AltSet::singleton(2)),
        ];
        let text = render_golden(&rows);
        assert_eq!(text, "t3-0\tmc\ta1 a2 a3\nt3-1\tbp\ta3\n");
        assert_eq!(parse_golden(&text).unwrap(), rows);
        assert!(parse_golden("x\ty\n").is_err());
    }
}
