//! The profile text format, report blocks, JSON and golden tables.

mod golden;
mod profile_text;
mod report;

pub use golden::{parse_golden, render_golden, GoldenRow};
pub use profile_text::{parse_profile, serialize_profile};
pub use report::{
    axiom_report_json, axiom_report_text, axiom_witness_json, axiom_witness_text, format_set,
    manipulation_report_json, manipulation_report_text, manipulation_witness_json,
    manipulation_witness_text, participation_report_json, participation_report_text,
    participation_witness_json, participation_witness_text, verify_block_checksum, SetOrder,
};
