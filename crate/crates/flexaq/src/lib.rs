//! Std companion to `flexaq-core`: CSV ingestion, knowledge-base files, the
//! synthetic fixture, timed query execution, the benchmark harness and the
//! `flexaq` command line.

pub mod bench;
pub mod engine;
pub mod fixture;
pub mod ingest;
pub mod kbfile;

pub use engine::{run_sql, EngineError, Mode, ResultTable, RunConfig};
