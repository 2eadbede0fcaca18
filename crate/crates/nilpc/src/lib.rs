//! File formats, reports and the command-line front end for `nilpc-core`.

pub mod cli;
pub mod format;
pub mod report;
