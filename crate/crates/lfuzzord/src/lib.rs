//! IO, file formats, claim suites and the `lfuzz` command line on top of
//! `lfuzzord-core`.

pub mod claims;
pub mod cli;
pub mod error;
pub mod format;
pub mod hunt;
pub mod report;

pub use lfuzzord_core as core;
