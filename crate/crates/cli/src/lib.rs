//! Command-line front end: manifests in, JSON and CSV result files out.

pub mod emit;
pub mod manifest;
pub mod run;

pub use manifest::{parse_manifest, Experiment, ExperimentConfig, Format, ManifestError, RunManifest};
