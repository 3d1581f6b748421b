use alloc::string::String;
use alloc::vec::Vec;

use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    Numeric,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub ty: ColumnType,
}

impl Column {
    pub fn new(name: impl Into<String>, ty: ColumnType) -> Self {
        Self { name: name.into(), ty }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TableError {
    #[error("table {table}: duplicate column {column}")]
    DuplicateColumn { table: String, column: String },
    #[error("table {table}: row {row} has {found} cells, expected {expected}")]
    Arity { table: String, row: usize, found: usize, expected: usize },
    #[error("table {table}: column {column} is numeric but row {row} holds text")]
    TypeMismatch { table: String, column: String, row: usize },
}

/// An in-memory relation. Rows are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    name: String,
    columns: Vec<Column>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<Column>, rows: Vec<Vec<Value>>) -> Result<Self, TableError> {
        let name = name.into();
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].iter().any(|p| p.name.eq_ignore_ascii_case(&c.name)) {
                return Err(TableError::DuplicateColumn { table: name, column: c.name.clone() });
            }
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(TableError::Arity { table: name, row: r, found: row.len(), expected: columns.len() });
            }
            for (c, cell) in columns.iter().zip(row) {
                if c.ty == ColumnType::Numeric && matches!(cell, Value::Text(_)) {
                    return Err(TableError::TypeMismatch { table: name, column: c.name.clone(), row: r });
                }
            }
        }
        Ok(Self { name, columns, rows })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Case-insensitive column lookup.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name.eq_ignore_ascii_case(name))
    }

    pub fn value(&self, row: usize, column: usize) -> &Value {
        &self.rows[row][column]
    }

    /// Numeric cells of one column, nulls and text skipped.
    pub fn numeric_column(&self, column: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().filter_map(move |r| r[column].as_f64())
    }

    /// A copy holding only the first `n` rows.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            name: self.name.clone(),
            columns: self.columns.clone(),
            rows: self.rows.iter().take(n).cloned().collect(),
        }
    }
}
