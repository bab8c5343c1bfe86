//! Command line, checksummed catalog and report formats on top of
//! [`optcurve_core`].

pub use optcurve_core as core;

pub mod catalog;
pub mod cli;
pub mod report;
pub mod run;
pub mod schema;
