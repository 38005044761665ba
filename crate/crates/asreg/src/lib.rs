//! Text formats, reports and the command line for `asreg-core`.

pub mod cli;
pub mod format;
pub mod report;
