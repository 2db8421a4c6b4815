//! δ-sweeps over all metrics and bounds, exponent fits and reporting.

mod config;
mod emit;
mod fit;
mod invariants;
mod record;
mod run;

pub use config::{log_grid, steps_for_range, SweepConfig, DEFAULT_STEPS_PER_DECADE, MIN_SWEEP_STEPS};
pub use emit::{emit, parse_json, to_csv, to_json, write_csv, OutputFormat, SweepDocument, CSV_HEADER};
pub use fit::{
    fit_all, fit_exponent, fit_tolerance, theoretical_slope, ExponentFit, CLOSED_FORM_TOLERANCE, DISC_SEARCH_TOLERANCE,
    MIN_FIT_POINTS,
};
pub use invariants::{check_ordering, separation, sibony_crossover, OrderingViolation, Separation, ORDERING_SLACK};
pub use record::{sort_records, SweepRecord};
pub use run::{bounds_at_point, run_sweep};
