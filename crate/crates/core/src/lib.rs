//! Approximate evaluation of flexible (fuzzy-predicate) aggregate queries.
//!
//! The pipeline is split into small, allocation-only building blocks:
//!
//! - [`kb`]: trapezoidal linguistic terms and the knowledge base built from
//!   column values by 1-D clustering.
//! - [`query`]: lexer, parser, printer, validation and binding for the
//!   flexible SQL dialect.
//! - [`sampler`]: seeded simple random sampling and driving-table join samples.
//! - [`fca`]: formal contexts, Close-by-One lattice construction and the
//!   lattice traversal that yields per-group tuple sets.
//! - [`estimator`]: sigma-count aggregates, Hoeffding and CLT intervals.
//! - [`exec`]: the exact-scan and sampled pipelines built from the above.
//!
//! The crate is `no_std` and only needs `alloc`; file IO, timing and the CLI
//! live in the `flexaq` crate.

#![no_std]

extern crate alloc;

pub mod estimator;
pub mod exec;
pub mod fca;
pub mod kb;
pub mod query;
pub mod sampler;
pub mod table;
pub mod value;

pub use table::{Column, ColumnType, Table, TableError};
pub use value::Value;
