use flexaq::kbfile::{build_kb, load_kb, AttrSpec, KbFileError};
use flexaq_core::{Column, ColumnType, Table, Value};

fn table() -> Table {
    let rows = (0..60)
        .map(|i| vec![Value::Num(i as f64), Value::Num((i % 3) as f64), Value::from(if i % 2 == 0 { "a" } else { "b" })])
        .collect();
    Table::new(
        "t",
        vec![
            Column::new("x", ColumnType::Numeric),
            Column::new("flag", ColumnType::Numeric),
            Column::new("s", ColumnType::Text),
        ],
        rows,
    )
    .unwrap()
}

#[test]
fn defaults_cover_numeric_columns_with_enough_values() {
    let tables = [table()];
    let kb = build_kb(&tables, &[], 3, 0).unwrap();
    let names: Vec<String> = kb.attributes().iter().map(|a| a.qualified_name()).collect();
    assert_eq!(names, ["t.x", "t.flag"]);
    let kb4 = build_kb(&tables, &[], 4, 0).unwrap();
    assert_eq!(kb4.attributes().len(), 1, "flag has only 3 distinct values");
    assert!(kb.fingerprint().unwrap().starts_with("sha256:"));
    assert_ne!(kb.fingerprint(), kb4.fingerprint());
    let x = kb.attribute("t", "x").unwrap();
    assert!(x.covers((0..60).map(f64::from)));
    assert_eq!(x.terms().iter().map(|t| t.name()).collect::<Vec<_>>(), ["low", "medium", "high"]);
}

#[test]
fn named_terms_fix_k() {
    let tables = [table()];
    let spec: AttrSpec = "T.X:small,big".parse().unwrap();
    let kb = build_kb(&tables, &[spec], 5, 0).unwrap();
    let x = kb.attribute("t", "x").unwrap();
    assert_eq!(x.terms().iter().map(|t| t.name()).collect::<Vec<_>>(), ["small", "big"]);
}

#[test]
fn spec_errors() {
    let tables = [table()];
    let run = |s: &str| build_kb(&tables, &[s.parse().unwrap()], 3, 0).unwrap_err();
    assert!(matches!(run("t.nope"), KbFileError::UnknownColumn(_)));
    assert!(matches!(run("u.x"), KbFileError::UnknownColumn(_)));
    assert!(matches!(run("t.s"), KbFileError::NotNumeric(_)));
    assert!(matches!(run("t.flag:a,b,c,d"), KbFileError::Partition { .. }));
}

#[test]
fn malformed_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.kb");
    std::fs::write(&path, "kb v1\nterm x 1 2 3 4\n").unwrap();
    assert!(matches!(load_kb(&path).unwrap_err(), KbFileError::Format { .. }));
}
