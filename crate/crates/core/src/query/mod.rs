//! The flexible SQL dialect.
//!
//! ```text
//! query := SELECT agg {, agg} FROM ident {, ident} [WHERE pred {AND pred}] [GROUP BY col {, col}]
//! agg   := (COUNT | SUM | AVG) '(' (col | '*') ')'
//! pred  := col IS (ident | 'string') | col op literal | col '=' col
//! col   := ident ['.' ident]
//! ```
//!
//! Keywords are case-insensitive. Name resolution (tables, columns, KB terms)
//! is case-insensitive as well; the AST keeps identifiers as written.

mod ast;
mod lexer;
mod parser;
mod rewrite;
mod validate;

pub use ast::{
    Aggregate, AggregateArg, AggregateKind, ColumnRef, Comparator, CrispPredicate, FlexibleQuery, FuzzyPredicate, Ident,
    JoinPredicate, Literal, Span,
};
pub use lexer::is_keyword;
pub use parser::{parse, ParseError};
pub use rewrite::{rewrite_to_approximate, ApproximateQuery, IntervalKind, RewriteError, DEFAULT_CONFIDENCE};
pub use validate::{
    bind, validate, BoundAggregate, BoundColumn, BoundCrisp, BoundFuzzy, BoundJoin, BoundQuery, Diagnostic,
    DiagnosticCode, Level, Schema, TableSchema,
};
