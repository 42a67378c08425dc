//! Report types and rendering for the `qlogic` binary.

pub mod report;
