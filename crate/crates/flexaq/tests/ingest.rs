use std::fs;

use flexaq::ingest::{ingest_csv, load_dir, IngestError};
use flexaq_core::{ColumnType, Value};

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn header_plus_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let t = ingest_csv(write(&dir, "people.csv", "id,name\n1,ann\n2,bob\n")).unwrap();
    assert_eq!(t.name(), "people");
    assert_eq!(t.len(), 2);
    assert_eq!(t.columns()[0].ty, ColumnType::Numeric);
    assert_eq!(t.columns()[1].ty, ColumnType::Text);
    assert_eq!(t.value(1, 0), &Value::Num(2.0));
    assert_eq!(t.value(1, 1), &Value::from("bob"));
}

#[test]
fn one_unparsable_cell_makes_a_text_column() {
    let dir = tempfile::tempdir().unwrap();
    let t = ingest_csv(write(&dir, "m.csv", "v\n1\n2\nx\n")).unwrap();
    assert_eq!(t.columns()[0].ty, ColumnType::Text);
    assert_eq!(t.value(0, 0), &Value::from("1"));
}

#[test]
fn empty_cells_are_null_and_keep_numeric_type() {
    let dir = tempfile::tempdir().unwrap();
    let t = ingest_csv(write(&dir, "n.csv", "a,b\n1,\n,2.5\n")).unwrap();
    assert!(t.columns().iter().all(|c| c.ty == ColumnType::Numeric));
    assert!(t.value(0, 1).is_null());
    assert!(t.value(1, 0).is_null());
    assert_eq!(t.value(1, 1), &Value::Num(2.5));
}

#[test]
fn quoted_fields() {
    let dir = tempfile::tempdir().unwrap();
    let t = ingest_csv(write(&dir, "q.csv", "k,note\n1,\"a, b\"\n")).unwrap();
    assert_eq!(t.value(0, 1), &Value::from("a, b"));
}

#[test]
fn ragged_row_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let err = ingest_csv(write(&dir, "r.csv", "a,b\n1,2\n3\n")).unwrap_err();
    assert!(matches!(err, IngestError::RaggedRow { line: 3, expected: 2, found: 1, .. }), "{err:?}");
}

#[test]
fn empty_file() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(ingest_csv(write(&dir, "e.csv", "")).unwrap_err(), IngestError::EmptyFile { .. }));
}

#[test]
fn header_only_gives_an_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let t = ingest_csv(write(&dir, "h.csv", "a,b\n")).unwrap();
    assert!(t.is_empty());
    assert_eq!(t.columns().len(), 2);
}

#[test]
fn missing_file() {
    assert!(matches!(ingest_csv("/nonexistent/x.csv").unwrap_err(), IngestError::Io { .. }));
}

#[test]
fn directory_load_is_sorted_and_csv_only() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir, "b.csv", "x\n1\n");
    write(&dir, "a.CSV", "y\n2\n");
    write(&dir, "notes.txt", "ignored");
    let names: Vec<String> = load_dir(dir.path()).unwrap().iter().map(|t| t.name().to_string()).collect();
    assert_eq!(names, ["a", "b"]);
    let empty = tempfile::tempdir().unwrap();
    assert!(matches!(load_dir(empty.path()).unwrap_err(), IngestError::NoTables(_)));
}
