//! Sweeps, scaling fits and table reproduction for the binary-tree walk.
//!
//! Everything here is plumbing around `dtqw`: it runs the quantum and classical
//! routes over ranges of starting levels, extracts peaks and run-time
//! estimates, fits scaling laws, and writes CSV or JSON.

mod demo;
mod error;
mod fit;
mod output;
mod sweep;
mod table;

pub use demo::{line_demo, memchain_demo};
pub use error::{CliError, Result};
pub use fit::{
    compare_scaling, fit_line, scaling_report, fit_peak_times, fit_scaling, runtime_estimate, FitReport,
    LineFit, PeakTimeFit, ScalingFit, DEFAULT_WINDOW_FRAC,
};
pub use output::{emit_results, Emit, Format, SiteSeries};
pub use sweep::{
    default_t_max, moving_average, run_sweep, run_sweeps, ClassicalMethod, Peak, QuantumMethod,
    SweepConfig, SweepPoint, SweepResult,
};
pub use table::{table1, Table1, Table1Row, TABLE1_LEVELS};
