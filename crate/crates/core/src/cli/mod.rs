//! Script parsing, command dispatch and report output.

mod report;
mod run;
mod script;
mod svg;

pub use report::{emit_json, emit_text, CommandResult, ComponentJson, FindingJson, LedgerJson, LocusJson, RunReport};
pub use run::{run, Args, OrderArg, Verb, EXIT_OK, EXIT_TIMEOUT, EXIT_UNPROVED, EXIT_USAGE};
pub use script::{parse_pair, parse_script, pretty_print, Command, Script, ScriptError};
pub use svg::{auto_bbox, emit_construction_svg, emit_svg};

#[cfg(test)]
mod tests;
