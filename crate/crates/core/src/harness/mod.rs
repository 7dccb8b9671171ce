//! Report plumbing for the command line: loading inputs, generated instance
//! families, and experiment sweeps with CSV/JSON output.

mod experiment;
mod families;
mod io;

pub use experiment::{
    certified_distance, certify, run_experiment, run_tester, trial_seed, EpsilonGrid, ExperimentResult,
    ExperimentRow, ExperimentSpec, OutputFormat, TesterId, CSV_HEADER,
};
pub use families::{disk_point, generate, Family, Instance};
pub use io::{fourier_blocks, irrep_table, load_any, load_group, load_matrix, load_scalar, FourierBlock, IrrepSummary, IrrepTable};
