//! File formats, experiment presets and the multi-seed runner behind the
//! `prcurve` binary.

pub mod experiment;
pub mod io;
pub mod presets;

pub use experiment::{aggregate, ground_truth, run_experiment, sample, Aggregate, GroundTruthSource, MethodResult, RunResult};
pub use presets::{ExperimentConfig, Preset};
