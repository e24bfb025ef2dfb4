//! Manifest files, check reports and the batch runner built on `mgeo-core`.

pub mod manifest;
pub mod report;
pub mod run;

pub use mgeo_core;
pub use manifest::{load_manifest, read_manifest, LoadError};
pub use report::ReportEntry;
pub use run::{execute, list_examples, run, Format, Input, RunConfig, RunError, RunOutcome};
