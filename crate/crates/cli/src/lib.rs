//! Command-line front end: CSV ingestion, selection runs, and JSON, DOT and
//! TSV output.

pub mod edges;
pub mod emit;
pub mod error;
pub mod ingest;
pub mod manifest;

pub use emit::{emit, Format};
pub use error::{CliError, Result};
pub use ingest::{ingest, ingest_reader};
pub use manifest::{select, RunManifest};
