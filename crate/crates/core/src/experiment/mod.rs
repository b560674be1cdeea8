//! Experiment harness: JSON configs in, JSON reports and CSV traces out.
//!
//! An experiment names one computation (algebra suite, adjoint check, layer
//! convergence, boundary pairing, or a Stokes check), the measure and fixtures
//! it runs on, and how to integrate. [`runner::execute`] produces a
//! [`report::Report`] whose `criteria` list drives the process exit code, and
//! whose serialized form is byte-reproducible for a fixed seed once the
//! timestamp is removed.

pub mod config;
pub mod report;
pub mod runner;
pub mod suite;

pub use config::{ExperimentConfig, ExperimentKind, LoadedConfig, MeasureSpec, MethodOverride, OutputSpec};
pub use report::{trace_to_csv, write_trace_csv, CriterionResult, Report};
pub use runner::{execute, run_to_files, summarize, RunOutcome, RunPaths};
pub use suite::{algebra_suite, AlgebraSuiteReport};
