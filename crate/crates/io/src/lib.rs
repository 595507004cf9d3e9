//! File formats, streaming harness, and CLI for the miqodd solver.
//!
//! The algorithmic core lives in `miqodd-core`; this crate adds everything
//! that needs an operating system: the matrix JSON format, the `DDQ1`
//! diagram container and its JSON debug twin, signal CSV ingestion,
//! solution and hull documents, run reports, and the `miqodd` binary.

pub mod cli;
pub mod ddq;
pub mod error;
pub mod hull_out;
pub mod matrix_json;
pub mod report;
pub mod signal;
pub mod solution;

pub use error::{IoError, Result};
