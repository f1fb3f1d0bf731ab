//! Convergence experiments: sweeps, slope fits, error fields and their configuration.

pub mod config;
pub mod field;
pub mod rate;
pub mod sweep;

pub use config::{ObservableKind, SweepConfig};
pub use field::{error_field, write_field_csv, FieldNode, GridSpec};
pub use rate::{theoretical_rate, SmoothnessParams};
pub use sweep::{
    fit_loglog_slope, run_convergence_sweep, sup_error, ConvergenceRecord, ErrorKind, FailedCell,
    FittedCell, RateReport, SweepOutcome, SweepProblem,
};
