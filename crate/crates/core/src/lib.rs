//! Two-state occupancy statistics: exact counting, probability mass
//! functions, least-squares parameter estimation, BIC model selection,
//! Monte Carlo sampling, dataset analysis and reporting, and a web
//! hit-count pipeline for building occupancy datasets from phrase counts.
//!
//! The numeric core is generic over the scalar type through [`real::Real`]
//! (`f32` or `f64`); the type aliases at the crate root pin the `f64`
//! surface used by the reporting layers and the command-line tool. The
//! counting functions are exact and return big integers.

pub mod dataset;
pub mod estimation;
pub mod montecarlo;
pub mod occupancy;
mod optimize;
pub mod real;
pub mod report;
pub mod selection;
pub mod synthetic;
pub mod webcount;

pub use dataset::{
    analyze, analyze_record, load_dataset, record_by_id, save_dataset, AnalysisOptions,
    AnalysisRow, AnalysisRun, ConceptSpec, DatasetError, DatasetRecord, RecordFailure,
};
pub use estimation::{fit, fit_with, r_squared, FitError, FitOptions};
pub use montecarlo::{sample_mb_process, sample_pmf, total_variation, SampleError, SampleHistogram};
pub use occupancy::{
    be_pmf, be_pmf_vector, count_be, count_fd, count_mb, mb_pmf, mb_pmf_vector, multiplicity,
    DomainError, OccupancyConfig, StatsKind,
};
pub use report::{emit_plotdata, emit_report, parse_report_json, report_rows, ReportFormat, ReportRow};
pub use selection::{bic, bic_from, classify, compare, verdict, SelectionError, Strength, Winner};

/// [`occupancy::ModelParams`] over `f64`.
pub type ModelParams = occupancy::ModelParams<f64>;
/// [`estimation::CountVector`] over `f64`.
pub type CountVector = estimation::CountVector<f64>;
/// [`estimation::FitResult`] over `f64`.
pub type FitResult = estimation::FitResult<f64>;
/// [`selection::Thresholds`] over `f64`.
pub type Thresholds = selection::Thresholds<f64>;
/// [`selection::ModelComparison`] over `f64`.
pub type ModelComparison = selection::ModelComparison<f64>;
