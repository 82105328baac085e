//! End-to-end scenarios. Each runner takes a config record and returns an
//! [`ExperimentResult`] with metrics, named verdicts and provenance.

mod conservation;
mod flatness;
mod gedanken;
mod grating;
mod mach_zehnder;
mod result;
mod stats;
pub mod suite;
mod theorem1;
mod zn;

pub use conservation::{run_conservation_suite, ConservationConfig};
pub use flatness::{run_flatness, FlatnessConfig, FLAT_TOL};
pub use gedanken::{
    binomial_pointer_amplitude, gedanken_outcome, run_gedanken, BoundaryModel, RunMode, TwoSlitConfig, FEW,
};
pub use grating::{comb_state, run_grating_flux, GratingConfig};
pub use mach_zehnder::{beam_splitter, mirrors, run_mach_zehnder, MZConfig, MzChain};
pub use result::{DensityTable, ExperimentResult, Metrics, Provenance, Relation, Verdict, WeakValueEstimate};
pub use stats::{batch_means, batch_sizes, BatchMeans, BATCHES, MIN_BATCHES};
pub use theorem1::{
    moment_deltas, run_theorem1_suite, MomentRow, NegativeControl, Theorem1Config, CONTROL_THRESHOLD, MOMENT_TOL,
    OVERLAP_TOL,
};
pub use zn::{run_zn, ZnConfig};
