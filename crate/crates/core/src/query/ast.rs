use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::lexer::is_keyword;

/// 1-based source position. Ignored by AST equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ident {
    pub value: String,
    pub span: Span,
}

impl Ident {
    pub fn new(value: impl Into<String>) -> Self {
        Self { value: value.into(), span: Span::default() }
    }

    pub fn is_bare(s: &str) -> bool {
        let mut chars = s.chars();
        matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            && !is_keyword(s)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregateKind {
    Count,
    Sum,
    Avg,
}

impl AggregateKind {
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "COUNT" => Some(Self::Count),
            "SUM" => Some(Self::Sum),
            "AVG" => Some(Self::Avg),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Count => "COUNT",
            Self::Sum => "SUM",
            Self::Avg => "AVG",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnRef {
    pub table: Option<Ident>,
    pub column: Ident,
}

impl ColumnRef {
    pub fn new(table: Option<&str>, column: &str) -> Self {
        Self { table: table.map(Ident::new), column: Ident::new(column) }
    }

    pub fn span(&self) -> Span {
        self.table.as_ref().map_or(self.column.span, |t| t.span)
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.table {
            Some(t) => write!(f, "{t}.{}", self.column),
            None => write!(f, "{}", self.column),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AggregateArg {
    Star,
    Column(ColumnRef),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub kind: AggregateKind,
    pub arg: AggregateArg,
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.arg {
            AggregateArg::Star => write!(f, "{}(*)", self.kind.name()),
            AggregateArg::Column(c) => write!(f, "{}({c})", self.kind.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Eq,
    NotEq,
    Lt,
    LtEq,
    Gt,
    GtEq,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Eq => "=",
            Self::NotEq => "<>",
            Self::Lt => "<",
            Self::LtEq => "<=",
            Self::Gt => ">",
            Self::GtEq => ">=",
        }
    }

    pub fn holds(self, ord: core::cmp::Ordering) -> bool {
        use core::cmp::Ordering::*;
        match self {
            Self::Eq => ord == Equal,
            Self::NotEq => ord != Equal,
            Self::Lt => ord == Less,
            Self::LtEq => ord != Greater,
            Self::Gt => ord == Greater,
            Self::GtEq => ord != Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Number(f64),
    String(String),
}

fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("'")?;
    for ch in s.chars() {
        if ch == '\'' {
            f.write_str("''")?;
        } else {
            write!(f, "{ch}")?;
        }
    }
    f.write_str("'")
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(x) => write!(f, "{x}"),
            Literal::String(s) => write_quoted(f, s),
        }
    }
}

/// `column IS term`
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPredicate {
    pub column: ColumnRef,
    pub term: Ident,
}

impl fmt::Display for FuzzyPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} IS ", self.column)?;
        if Ident::is_bare(&self.term.value) {
            write!(f, "{}", self.term)
        } else {
            write_quoted(f, &self.term.value)
        }
    }
}

/// `column op literal`
#[derive(Debug, Clone, PartialEq)]
pub struct CrispPredicate {
    pub column: ColumnRef,
    pub op: Comparator,
    pub value: Literal,
}

impl fmt::Display for CrispPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.column, self.op.symbol(), self.value)
    }
}

/// `left = right` between two columns.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinPredicate {
    pub left: ColumnRef,
    pub right: ColumnRef,
}

impl fmt::Display for JoinPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlexibleQuery {
    pub aggregates: Vec<Aggregate>,
    pub tables: Vec<Ident>,
    pub fuzzy: Vec<FuzzyPredicate>,
    pub crisp: Vec<CrispPredicate>,
    pub joins: Vec<JoinPredicate>,
    pub group_by: Vec<ColumnRef>,
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl FlexibleQuery {
    pub(crate) fn fmt_select_list(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.aggregates, ", ")
    }

    pub(crate) fn fmt_from_onwards(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(" FROM ")?;
        write_list(f, &self.tables, ", ")?;
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let s = if first { " WHERE " } else { " AND " };
            first = false;
            f.write_str(s)
        };
        for p in &self.fuzzy {
            sep(f)?;
            write!(f, "{p}")?;
        }
        for p in &self.crisp {
            sep(f)?;
            write!(f, "{p}")?;
        }
        for p in &self.joins {
            sep(f)?;
            write!(f, "{p}")?;
        }
        if !self.group_by.is_empty() {
            f.write_str(" GROUP BY ")?;
            write_list(f, &self.group_by, ", ")?;
        }
        Ok(())
    }
}

impl fmt::Display for FlexibleQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        self.fmt_select_list(f)?;
        self.fmt_from_onwards(f)
    }
}
