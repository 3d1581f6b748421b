//! CSV files to typed in-memory tables.

use std::fs;
use std::path::{Path, PathBuf};

use flexaq_core::{Column, ColumnType, Table, TableError, Value};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed CSV in {path}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: empty file")]
    EmptyFile { path: PathBuf },
    #[error("{path}: line {line} has {found} cells, header has {expected}")]
    RaggedRow { path: PathBuf, line: u64, expected: usize, found: usize },
    #[error("invalid table in {path}")]
    Table { path: PathBuf, source: TableError },
    #[error("{0}: no .csv files")]
    NoTables(PathBuf),
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Reads one CSV file. The first line is the header; a column is numeric when
/// every non-empty cell parses as a decimal, text otherwise. Empty cells are
/// NULL. The table is named after the file stem.
pub fn ingest_csv(path: impl AsRef<Path>) -> Result<Table, IngestError> {
    let path = path.as_ref();
    let csv_err = |source| IngestError::Csv { path: path.to_path_buf(), source };
    let file = fs::File::open(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(file);

    let mut records = reader.records();
    let header = match records.next() {
        None => return Err(IngestError::EmptyFile { path: path.to_path_buf() }),
        Some(r) => r.map_err(csv_err)?,
    };
    let names: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    if names.len() == 1 && names[0].is_empty() {
        return Err(IngestError::EmptyFile { path: path.to_path_buf() });
    }

    let mut cells: Vec<Vec<String>> = Vec::new();
    for record in records {
        let record = record.map_err(csv_err)?;
        if record.len() != names.len() {
            let line = record.position().map_or(0, |p| p.line());
            return Err(IngestError::RaggedRow { path: path.to_path_buf(), line, expected: names.len(), found: record.len() });
        }
        cells.push(record.iter().map(str::to_string).collect());
    }

    let types: Vec<ColumnType> = (0..names.len())
        .map(|c| {
            let numeric = cells.iter().all(|row| {
                let cell = row[c].trim();
                cell.is_empty() || parse_number(cell).is_some()
            });
            if numeric { ColumnType::Numeric } else { ColumnType::Text }
        })
        .collect();

    let rows = cells
        .into_iter()
        .map(|row| {
            row.into_iter()
                .zip(&types)
                .map(|(cell, ty)| match (cell.trim(), ty) {
                    ("", _) => Value::Null,
                    (s, ColumnType::Numeric) => Value::Num(parse_number(s).expect("checked numeric")),
                    (_, ColumnType::Text) => Value::Text(cell),
                })
                .collect()
        })
        .collect();

    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let columns = names.into_iter().zip(types).map(|(n, t)| Column::new(n, t)).collect();
    Table::new(name, columns, rows).map_err(|source| IngestError::Table { path: path.to_path_buf(), source })
}

/// Every `*.csv` in `dir`, sorted by file name.
pub fn load_dir(dir: impl AsRef<Path>) -> Result<Vec<Table>, IngestError> {
    let dir = dir.as_ref();
    let io_err = |source| IngestError::Io { path: dir.to_path_buf(), source };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io_err)?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    paths.sort();
    if paths.is_empty() {
        return Err(IngestError::NoTables(dir.to_path_buf()));
    }
    paths.iter().map(ingest_csv).collect()
}
