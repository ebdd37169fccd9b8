//! Configuration, initial conditions, the run loop, CSV output and fitting
//! of finished runs.

pub mod analyze;
pub mod config;
pub mod plot;
pub mod presets;
pub mod record;
pub mod run;

pub use analyze::{analyze, analyze_records, AnalysisReport};
pub use config::{Preset, SimConfig};
pub use presets::{sample_case1, sample_case2, sample_gaussian};
pub use record::{read_csv, write_csv, RunRecord, CSV_HEADER};
pub use run::{run, run_with, RunOutput, Simulation, Snapshot};
