//! Library side of the stoprule command-line harness; `main` is a thin
//! wrapper so the parsing and output layers stay testable.

pub mod cli;
pub mod commands;
pub mod error;
pub mod load;
pub mod output;
pub mod spec;
