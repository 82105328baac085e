//! Dispatch from a resolved manifest to the experiment runners.

use modvar::experiments::{
    run_conservation_suite, run_flatness, run_gedanken, run_grating_flux, run_mach_zehnder, run_theorem1_suite,
    run_zn, suite, ExperimentResult,
};

use crate::manifest::{ExperimentConfig, RunManifest};

pub fn run(manifest: &RunManifest) -> modvar::Result<ExperimentResult> {
    match &manifest.config {
        ExperimentConfig::Gedanken(c) => run_gedanken(c),
        ExperimentConfig::Mz(c) => run_mach_zehnder(c),
        ExperimentConfig::Theorem1(c) => run_theorem1_suite(c),
        ExperimentConfig::Flatness(c) => run_flatness(c),
        ExperimentConfig::Grating(c) => run_grating_flux(c),
        ExperimentConfig::Ellipse(c) => run_conservation_suite(c),
        ExperimentConfig::Zn(c) => run_zn(c),
        ExperimentConfig::Suite {} => suite::run_suite(manifest.seed),
    }
}

/// Re-judges verdicts named in the manifest's `[tolerances]`; returns names that matched nothing.
pub fn apply_tolerances(manifest: &RunManifest, result: &mut ExperimentResult) -> Vec<String> {
    let mut unmatched = Vec::new();
    for (name, tol) in &manifest.tolerances {
        let mut hit = false;
        for v in result.verdicts.iter_mut().filter(|v| &v.name == name) {
            *v = v.clone().with_tolerance(*tol);
            hit = true;
        }
        if !hit {
            unmatched.push(name.clone());
        }
    }
    if !manifest.tolerances.is_empty() {
        result.convention(format!(
            "tolerance overrides: {}",
            manifest.tolerances.iter().map(|(k, v)| format!("{k}={v:e}")).collect::<Vec<_>>().join(", ")
        ));
    }
    unmatched
}
