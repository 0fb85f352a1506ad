//! File formats and rendering for the `lapent` command-line tool.

pub mod matrix_file;
pub mod report;
pub mod sweep;
