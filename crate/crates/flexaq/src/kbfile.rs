//! Building knowledge bases from data and moving them to and from disk.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use flexaq_core::kb::{build_partition, default_term_names, fingerprint, parse_kb, render_kb, KbError, KnowledgeBase, RelaxableAttribute};
use flexaq_core::{ColumnType, Table};

#[derive(Debug, thiserror::Error)]
pub enum KbFileError {
    #[error("cannot access {path}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid knowledge base {path}")]
    Format { path: PathBuf, source: KbError },
    #[error("cannot partition {attribute}")]
    Partition { attribute: String, source: KbError },
    #[error("unknown column {0}")]
    UnknownColumn(String),
    #[error("{0} is not numeric")]
    NotNumeric(String),
    #[error("bad attribute spec {0:?}: expected table.column[:term,term,...]")]
    BadSpec(String),
    #[error("no numeric column has at least {0} distinct values")]
    NothingToBuild(usize),
}

pub fn load_kb(path: impl AsRef<Path>) -> Result<KnowledgeBase, KbFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| KbFileError::Io { path: path.to_path_buf(), source })?;
    parse_kb(&text).map_err(|source| KbFileError::Format { path: path.to_path_buf(), source })
}

pub fn save_kb(kb: &KnowledgeBase, path: impl AsRef<Path>) -> Result<(), KbFileError> {
    let path = path.as_ref();
    fs::write(path, render_kb(kb)).map_err(|source| KbFileError::Io { path: path.to_path_buf(), source })
}

/// `table.column` with optional term names, e.g.
/// `Patient.alcohol_units_per_week:rarely,occasionally,regularly`. Named
/// terms fix k for that attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct AttrSpec {
    pub table: String,
    pub column: String,
    pub terms: Option<Vec<String>>,
}

impl FromStr for AttrSpec {
    type Err = KbFileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KbFileError::BadSpec(s.to_string());
        let (target, terms) = match s.split_once(':') {
            Some((t, names)) => {
                let names: Vec<String> = names.split(',').map(|n| n.trim().to_string()).collect();
                if names.iter().any(String::is_empty) {
                    return Err(bad());
                }
                (t, Some(names))
            }
            None => (s, None),
        };
        let (table, column) = target.split_once('.').ok_or_else(bad)?;
        if table.is_empty() || column.is_empty() {
            return Err(bad());
        }
        Ok(Self { table: table.to_string(), column: column.to_string(), terms })
    }
}

fn numeric_values(table: &Table, col: usize) -> Vec<f64> {
    table.numeric_column(col).collect()
}

fn distinct(values: &[f64]) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// Partitions each requested column into `k` (or as many as named) terms.
/// Without specs, every numeric column with at least `k` distinct values is
/// used. The KB is stamped with a digest of the clustered data.
pub fn build_kb(tables: &[Table], specs: &[AttrSpec], k: usize, seed: u64) -> Result<KnowledgeBase, KbFileError> {
    let mut targets: Vec<(&Table, usize, Option<&[String]>)> = Vec::new();
    if specs.is_empty() {
        for t in tables {
            for (c, col) in t.columns().iter().enumerate() {
                if col.ty == ColumnType::Numeric && distinct(&numeric_values(t, c)) >= k.max(1) {
                    targets.push((t, c, None));
                }
            }
        }
        if targets.is_empty() {
            return Err(KbFileError::NothingToBuild(k));
        }
    } else {
        for spec in specs {
            let qualified = format!("{}.{}", spec.table, spec.column);
            let table = tables
                .iter()
                .find(|t| t.name().eq_ignore_ascii_case(&spec.table))
                .ok_or_else(|| KbFileError::UnknownColumn(qualified.clone()))?;
            let c = table.column_index(&spec.column).ok_or_else(|| KbFileError::UnknownColumn(qualified.clone()))?;
            if table.columns()[c].ty != ColumnType::Numeric {
                return Err(KbFileError::NotNumeric(qualified));
            }
            targets.push((table, c, spec.terms.as_deref()));
        }
    }

    let mut kb = KnowledgeBase::new();
    let mut digest_input: Vec<(String, Vec<f64>)> = Vec::new();
    for (table, c, names) in targets {
        let column = &table.columns()[c].name;
        let qualified = format!("{}.{}", table.name(), column);
        let names = names.map_or_else(|| default_term_names(k), <[String]>::to_vec);
        let values = numeric_values(table, c);
        let partition_err = |source| KbFileError::Partition { attribute: qualified.clone(), source };
        let terms = build_partition(&values, names.len(), seed)
            .and_then(|terms| terms.into_iter().zip(&names).map(|(t, n)| t.renamed(n.as_str())).collect())
            .map_err(partition_err)?;
        let attr = RelaxableAttribute::new(table.name(), column.as_str(), terms).map_err(partition_err)?;
        kb.insert(attr).map_err(partition_err)?;
        digest_input.push((qualified, values));
    }
    kb.set_fingerprint(Some(fingerprint(digest_input.iter().map(|(n, v)| (n.as_str(), v.as_slice())))));
    Ok(kb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attr_specs() {
        let s: AttrSpec = "Patient.age".parse().unwrap();
        assert_eq!(s, AttrSpec { table: "Patient".into(), column: "age".into(), terms: None });
        let s: AttrSpec = "P.x:lo, hi".parse().unwrap();
        assert_eq!(s.terms.unwrap(), ["lo", "hi"]);
        for bad in ["age", ".age", "P.", "P.x:", "P.x:a,,b"] {
            assert!(bad.parse::<AttrSpec>().is_err(), "{bad}");
        }
    }
}
