//! Fuzzy knowledge base: linguistic terms attached to relaxable attributes.

mod format;
mod partition;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use format::{parse_kb, render_kb};
pub use partition::{build_partition, default_term_names, fingerprint, kmeans_1d, Cluster};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum KbError {
    #[error("term {name}: {reason}")]
    InvalidTerm { name: String, reason: &'static str },
    #[error("attribute {attribute}: {message}")]
    InvariantViolation { attribute: String, message: String },
    #[error("duplicate attribute {0}")]
    DuplicateAttribute(String),
    #[error("need at least {k} distinct values, found {distinct}")]
    InsufficientDistinctValues { distinct: usize, k: usize },
    #[error("cannot partition an empty value set")]
    EmptyValues,
    #[error("k must be at least 1")]
    ZeroTerms,
    #[error("non-finite value {0} in column data")]
    NonFinite(f64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A trapezoidal fuzzy set `(a, b, c, d)`: zero outside `[a, d]`, one on
/// `[b, c]`, linear on both ramps.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapezoidalTerm {
    name: String,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TrapezoidalTerm {
    pub fn new(name: impl Into<String>, a: f64, b: f64, c: f64, d: f64) -> Result<Self, KbError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|ch| ch.is_whitespace() || ch == '#') {
            return Err(KbError::InvalidTerm { name, reason: "name must be a non-empty word" });
        }
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(KbError::InvalidTerm { name, reason: "breakpoints must be finite" });
        }
        if !(a <= b && b <= c && c <= d) {
            return Err(KbError::InvalidTerm { name, reason: "breakpoints must satisfy a <= b <= c <= d" });
        }
        Ok(Self { name, a, b, c, d })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn breakpoints(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Result<Self, KbError> {
        let [a, b, c, d] = self.breakpoints();
        self = Self::new(name, a, b, c, d)?;
        Ok(self)
    }

    /// Degree of `x` in `[0, 1]`. NaN maps to 0.
    pub fn membership(&self, x: f64) -> f64 {
        if x.is_nan() || x < self.a || x > self.d {
            0.0
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else if x <= self.c {
            1.0
        } else {
            (self.d - x) / (self.d - self.c)
        }
    }
}

/// A column that may carry linguistic predicates, with its terms sorted by
/// plateau start.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxableAttribute {
    table: String,
    column: String,
    terms: Vec<TrapezoidalTerm>,
}

impl RelaxableAttribute {
    pub fn new(table: impl Into<String>, column: impl Into<String>, terms: Vec<TrapezoidalTerm>) -> Result<Self, KbError> {
        let attr = Self { table: table.into(), column: column.into(), terms };
        let violation = |message: &str| KbError::InvariantViolation {
            attribute: attr.qualified_name(),
            message: message.into(),
        };
        if attr.terms.is_empty() {
            return Err(violation("no terms"));
        }
        for (i, t) in attr.terms.iter().enumerate() {
            if attr.terms[..i].iter().any(|p| p.name == t.name) {
                return Err(violation(&alloc::format!("duplicate term {}", t.name)));
            }
        }
        if attr.terms.windows(2).any(|w| w[0].b > w[1].b) {
            return Err(violation("terms not sorted by plateau start"));
        }
        Ok(attr)
    }

    pub fn table(&self) -> &str {
        &self.table
    }

    pub fn column(&self) -> &str {
        &self.column
    }

    pub fn qualified_name(&self) -> String {
        alloc::format!("{}.{}", self.table, self.column)
    }

    pub fn terms(&self) -> &[TrapezoidalTerm] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Option<&TrapezoidalTerm> {
        self.terms.iter().find(|t| t.name == name)
    }

    /// True when every value has positive membership in at least one term.
    pub fn covers(&self, values: impl IntoIterator<Item = f64>) -> bool {
        values
            .into_iter()
            .all(|v| self.terms.iter().any(|t| t.membership(v) > 0.0))
    }

    fn matches(&self, table: &str, column: &str) -> bool {
        self.table.eq_ignore_ascii_case(table) && self.column.eq_ignore_ascii_case(column)
    }
}

/// The set of relaxable attributes, at most one per `(table, column)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeBase {
    attributes: Vec<RelaxableAttribute>,
    fingerprint: Option<String>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_fingerprint(mut self, fingerprint: impl Into<String>) -> Self {
        self.fingerprint = Some(fingerprint.into());
        self
    }

    pub fn fingerprint(&self) -> Option<&str> {
        self.fingerprint.as_deref()
    }

    pub fn set_fingerprint(&mut self, fingerprint: Option<String>) {
        self.fingerprint = fingerprint;
    }

    pub fn insert(&mut self, attribute: RelaxableAttribute) -> Result<(), KbError> {
        if self.attribute(&attribute.table, &attribute.column).is_some() {
            return Err(KbError::DuplicateAttribute(attribute.qualified_name()));
        }
        self.attributes.push(attribute);
        Ok(())
    }

    pub fn attributes(&self) -> &[RelaxableAttribute] {
        &self.attributes
    }

    /// Case-insensitive lookup.
    pub fn attribute(&self, table: &str, column: &str) -> Option<&RelaxableAttribute> {
        self.attributes.iter().find(|a| a.matches(table, column))
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }
}

impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_kb(self))
    }
}
