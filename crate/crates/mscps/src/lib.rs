//! Instance files, synthetic instance generation, batch experiments and the
//! oracle suite on top of `mscps-core`.

pub mod experiment;
pub mod generate;
pub mod io;
pub mod verify;

pub use experiment::{run_experiment, sensitivity_sweep, ExperimentConfig, ExperimentOutput};
pub use generate::{full_factorial, generate, GenParams, Grid};
pub use io::{load_instance, save_instance};
