use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;
use crate::kb::{KnowledgeBase, TrapezoidalTerm};
use crate::table::{Column, ColumnType, Table};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSchema {
    pub name: String,
    pub columns: Vec<Column>,
}

/// Table names and column types the validator resolves against.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Schema {
    pub tables: Vec<TableSchema>,
}

impl Schema {
    pub fn from_tables<'a>(tables: impl IntoIterator<Item = &'a Table>) -> Self {
        Self {
            tables: tables
                .into_iter()
                .map(|t| TableSchema { name: t.name().into(), columns: t.columns().to_vec() })
                .collect(),
        }
    }

    pub fn table_index(&self, name: &str) -> Option<usize> {
        self.tables.iter().position(|t| t.name.eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticCode {
    UnknownTable,
    DuplicateTable,
    UnknownColumn,
    AmbiguousColumn,
    NotRelaxable,
    UnknownTerm,
    TypeMismatch,
    InvalidJoin,
    DisconnectedJoinGraph,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub level: Level,
    pub code: DiagnosticCode,
    pub message: String,
    pub span: Span,
}

impl fmt::Display for Diagnostic {
    /// `LEVEL code message @line:col`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            Level::Error => "ERROR",
            Level::Warning => "WARNING",
        };
        write!(f, "{level} {:?} {} @{}", self.code, self.message, self.span)
    }
}

/// A column resolved to `(position in FROM, column index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundColumn {
    pub table: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundAggregate {
    pub kind: AggregateKind,
    /// `None` for `COUNT(*)`.
    pub column: Option<BoundColumn>,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundFuzzy {
    pub column: BoundColumn,
    pub term: TrapezoidalTerm,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCrisp {
    pub column: BoundColumn,
    pub op: Comparator,
    pub value: Literal,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundJoin {
    pub left: BoundColumn,
    pub right: BoundColumn,
}

/// A validated query with every name resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundQuery {
    /// Schema index of each FROM table, in FROM order.
    pub tables: Vec<usize>,
    pub aggregates: Vec<BoundAggregate>,
    pub fuzzy: Vec<BoundFuzzy>,
    pub crisp: Vec<BoundCrisp>,
    pub joins: Vec<BoundJoin>,
    pub group_by: Vec<BoundColumn>,
    pub group_labels: Vec<String>,
}

struct Binder<'a> {
    q: &'a FlexibleQuery,
    schema: &'a Schema,
    from: Vec<Option<usize>>,
    diags: Vec<Diagnostic>,
}

impl Binder<'_> {
    fn push(&mut self, code: DiagnosticCode, span: Span, message: String) {
        self.diags.push(Diagnostic { level: Level::Error, code, message, span });
    }

    fn table_schema(&self, pos: usize) -> &TableSchema {
        &self.schema.tables[self.from[pos].expect("resolved table")]
    }

    fn column(&mut self, c: &ColumnRef) -> Option<(BoundColumn, ColumnType)> {
        let find = |schema: &TableSchema| schema.columns.iter().position(|col| col.name.eq_ignore_ascii_case(&c.column.value));
        let candidates: Vec<usize> = match &c.table {
            Some(t) => {
                let pos = self.q.tables.iter().position(|ft| ft.value.eq_ignore_ascii_case(&t.value));
                match pos {
                    Some(p) => alloc::vec![p],
                    None => {
                        self.push(DiagnosticCode::UnknownTable, t.span, alloc::format!("table {} is not in FROM", t.value));
                        return None;
                    }
                }
            }
            None => (0..self.q.tables.len()).collect(),
        };
        let mut hits = Vec::new();
        for p in candidates {
            if self.from[p].is_none() {
                // Already reported as an unknown table.
                if c.table.is_some() {
                    return None;
                }
                continue;
            }
            if let Some(ci) = find(self.table_schema(p)) {
                hits.push((p, ci));
            }
        }
        match hits[..] {
            [(table, column)] => {
                let ty = self.table_schema(table).columns[column].ty;
                Some((BoundColumn { table, column }, ty))
            }
            [] => {
                self.push(DiagnosticCode::UnknownColumn, c.span(), alloc::format!("unknown column {c}"));
                None
            }
            _ => {
                self.push(DiagnosticCode::AmbiguousColumn, c.span(), alloc::format!("column {c} is ambiguous"));
                None
            }
        }
    }

    fn qualified(&self, b: BoundColumn) -> String {
        let t = self.table_schema(b.table);
        alloc::format!("{}.{}", t.name, t.columns[b.column].name)
    }
}

/// Resolves every name in `q`. Returns all diagnostics when anything fails.
pub fn bind(q: &FlexibleQuery, kb: &KnowledgeBase, schema: &Schema) -> Result<BoundQuery, Vec<Diagnostic>> {
    use DiagnosticCode::*;

    let mut b = Binder { q, schema, from: Vec::new(), diags: Vec::new() };
    for (i, t) in q.tables.iter().enumerate() {
        let idx = schema.table_index(&t.value);
        if idx.is_none() {
            b.push(UnknownTable, t.span, alloc::format!("unknown table {}", t.value));
        } else if q.tables[..i].iter().any(|p| p.value.eq_ignore_ascii_case(&t.value)) {
            b.push(DuplicateTable, t.span, alloc::format!("table {} listed twice", t.value));
        }
        b.from.push(idx);
    }

    let mut aggregates = Vec::new();
    for a in &q.aggregates {
        let label = alloc::format!("{a}");
        match &a.arg {
            AggregateArg::Star if a.kind != AggregateKind::Count => {
                b.push(TypeMismatch, Span::default(), alloc::format!("{} requires a column argument", a.kind.name()));
            }
            AggregateArg::Star => aggregates.push(BoundAggregate { kind: a.kind, column: None, label }),
            AggregateArg::Column(c) => {
                if let Some((col, ty)) = b.column(c) {
                    if a.kind != AggregateKind::Count && ty != ColumnType::Numeric {
                        b.push(TypeMismatch, c.span(), alloc::format!("{} over non-numeric column {c}", a.kind.name()));
                    }
                    aggregates.push(BoundAggregate { kind: a.kind, column: Some(col), label });
                }
            }
        }
    }

    let mut fuzzy = Vec::new();
    for p in &q.fuzzy {
        let Some((col, ty)) = b.column(&p.column) else { continue };
        if ty != ColumnType::Numeric {
            b.push(TypeMismatch, p.column.span(), alloc::format!("linguistic term on non-numeric column {}", p.column));
            continue;
        }
        let ts = b.table_schema(col.table);
        let (tname, cname) = (ts.name.clone(), ts.columns[col.column].name.clone());
        match kb.attribute(&tname, &cname) {
            None => b.push(NotRelaxable, p.column.span(), alloc::format!("{tname}.{cname} has no linguistic terms")),
            Some(attr) => match attr.term(&p.term.value) {
                Some(term) => fuzzy.push(BoundFuzzy { column: col, term: term.clone(), label: alloc::format!("{p}") }),
                None => b.push(
                    UnknownTerm,
                    p.term.span,
                    alloc::format!("({}, {}): no such term for {tname}.{cname}", p.column, p.term.value),
                ),
            },
        }
    }

    let mut crisp = Vec::new();
    for p in &q.crisp {
        let Some((col, ty)) = b.column(&p.column) else { continue };
        let ok = matches!(
            (ty, &p.value),
            (ColumnType::Numeric, Literal::Number(_)) | (ColumnType::Text, Literal::String(_))
        );
        if ok {
            crisp.push(BoundCrisp { column: col, op: p.op, value: p.value.clone(), label: alloc::format!("{p}") });
        } else {
            b.push(TypeMismatch, p.column.span(), alloc::format!("literal type does not match column {}", p.column));
        }
    }

    let mut joins = Vec::new();
    for j in &q.joins {
        let (l, r) = (b.column(&j.left), b.column(&j.right));
        let (Some((left, lt)), Some((right, rt))) = (l, r) else { continue };
        if left.table == right.table {
            b.push(InvalidJoin, j.left.span(), alloc::format!("{j} compares columns of one table"));
        } else if lt != rt {
            b.push(TypeMismatch, j.left.span(), alloc::format!("{j} joins columns of different types"));
        } else {
            joins.push(BoundJoin { left, right });
        }
    }

    let mut group_by = Vec::new();
    let mut group_labels = Vec::new();
    for g in &q.group_by {
        if let Some((col, _)) = b.column(g) {
            group_labels.push(b.qualified(col));
            group_by.push(col);
        }
    }

    if b.diags.is_empty() && q.tables.len() > 1 {
        let n = q.tables.len();
        let mut reached = alloc::vec![false; n];
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for j in &joins {
                let (l, r) = (j.left.table, j.right.table);
                if reached[l] != reached[r] {
                    reached[l] = true;
                    reached[r] = true;
                    changed = true;
                }
            }
        }
        if let Some(p) = reached.iter().position(|r| !r) {
            b.push(
                DisconnectedJoinGraph,
                q.tables[p].span,
                alloc::format!("table {} is not joined to {}", q.tables[p].value, q.tables[0].value),
            );
        }
    }

    if b.diags.is_empty() {
        Ok(BoundQuery {
            tables: b.from.into_iter().map(|t| t.expect("resolved")).collect(),
            aggregates,
            fuzzy,
            crisp,
            joins,
            group_by,
            group_labels,
        })
    } else {
        Err(b.diags)
    }
}

/// Empty iff the query binds cleanly against `kb` and `schema`.
pub fn validate(q: &FlexibleQuery, kb: &KnowledgeBase, schema: &Schema) -> Vec<Diagnostic> {
    bind(q, kb, schema).err().unwrap_or_default()
}
