//! Experiment driver: shift generation, method fan-out, reference values and
//! report output.

pub mod config;
pub mod experiment;
pub mod report;
pub mod shifts;

pub use config::{ExperimentConfig, ReferenceMode, VectorSpec};
pub use experiment::{run_experiment, run_problem, MethodReport, Problem, Reference, Report};
pub use report::{parse_history_csv, write_history_csv, write_report, ConvergenceRecord};
pub use shifts::{generate_unit_circle_shifts, LambdaChoice, ShiftSpec};
