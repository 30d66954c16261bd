//! Text formats, DOT output, random machines and corpora for `omega-core`.

pub mod dot;
pub mod format;
pub mod gen;
pub mod show;

pub use format::{load_machine, parse_machine, print_machine, FormatError, Machine};
