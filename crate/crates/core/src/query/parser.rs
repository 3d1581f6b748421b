use alloc::string::String;
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("unknown aggregate function {name} at {span}")]
    UnknownAggregate { name: String, span: Span },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::UnknownAggregate { span, .. } => *span,
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Keyword(k) => alloc::format!("keyword {k}"),
        Tok::Ident(s) => alloc::format!("identifier `{s}`"),
        Tok::Number(x) => alloc::format!("number {x}"),
        Tok::Str(s) => alloc::format!("string '{s}'"),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Star => "`*`".into(),
        Tok::Semicolon => "`;`".into(),
        Tok::Op(op) => alloc::format!("`{}`", op.symbol()),
        Tok::Eof => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax { span: t.span, message: alloc::format!("expected {expected}, found {}", describe(&t.tok)) })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let ident = Ident { value: s.clone(), span: self.peek().span };
                self.bump();
                Ok(ident)
            }
            _ => self.error(what),
        }
    }

    fn column(&mut self) -> Result<ColumnRef, ParseError> {
        let first = self.ident("column name")?;
        if self.eat(&Tok::Dot) {
            let column = self.ident("column name after `.`")?;
            Ok(ColumnRef { table: Some(first), column })
        } else {
            Ok(ColumnRef { table: None, column: first })
        }
    }

    fn aggregate(&mut self) -> Result<Aggregate, ParseError> {
        let span = self.peek().span;
        let name = match &self.peek().tok {
            Tok::Ident(s) if self.peek_at(1) == &Tok::LParen => s.clone(),
            _ => return self.error("aggregate function"),
        };
        let kind = AggregateKind::from_name(&name).ok_or(ParseError::UnknownAggregate { name, span })?;
        self.bump();
        self.expect(Tok::LParen, "`(`")?;
        let arg = if self.eat(&Tok::Star) {
            AggregateArg::Star
        } else {
            AggregateArg::Column(self.column()?)
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(Aggregate { kind, arg })
    }

    fn predicate(&mut self, q: &mut FlexibleQuery) -> Result<(), ParseError> {
        let column = self.column()?;
        if self.eat(&Tok::Keyword("IS")) {
            let span = self.peek().span;
            let term = match self.bump().tok {
                Tok::Ident(s) | Tok::Str(s) => Ident { value: s, span },
                _ => {
                    self.pos -= 1;
                    return self.error("linguistic term");
                }
            };
            q.fuzzy.push(FuzzyPredicate { column, term });
            return Ok(());
        }
        let op = match self.peek().tok {
            Tok::Op(op) => op,
            _ => return self.error("`IS` or a comparison operator"),
        };
        let op_span = self.bump().span;
        match self.peek().tok.clone() {
            Tok::Number(x) => {
                self.bump();
                q.crisp.push(CrispPredicate { column, op, value: Literal::Number(x) });
            }
            Tok::Str(s) => {
                self.bump();
                q.crisp.push(CrispPredicate { column, op, value: Literal::String(s) });
            }
            Tok::Ident(_) => {
                if op != Comparator::Eq {
                    return Err(ParseError::Syntax {
                        span: op_span,
                        message: "only `=` is supported between two columns".into(),
                    });
                }
                let right = self.column()?;
                q.joins.push(JoinPredicate { left: column, right });
            }
            _ => return self.error("literal or column"),
        }
        Ok(())
    }

    fn query(&mut self) -> Result<FlexibleQuery, ParseError> {
        let mut q = FlexibleQuery {
            aggregates: Vec::new(),
            tables: Vec::new(),
            fuzzy: Vec::new(),
            crisp: Vec::new(),
            joins: Vec::new(),
            group_by: Vec::new(),
        };
        self.expect(Tok::Keyword("SELECT"), "SELECT")?;
        loop {
            q.aggregates.push(self.aggregate()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Keyword("FROM"), "FROM")?;
        loop {
            q.tables.push(self.ident("table name")?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        if self.eat(&Tok::Keyword("WHERE")) {
            loop {
                self.predicate(&mut q)?;
                if !self.eat(&Tok::Keyword("AND")) {
                    break;
                }
            }
        }
        if self.eat(&Tok::Keyword("GROUP")) {
            self.expect(Tok::Keyword("BY"), "BY")?;
            loop {
                q.group_by.push(self.column()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.eat(&Tok::Semicolon);
        if self.peek().tok != Tok::Eof {
            return self.error("end of query");
        }
        Ok(q)
    }
}

/// Parses one flexible query. A trailing `;` is accepted.
pub fn parse(text: &str) -> Result<FlexibleQuery, ParseError> {
    let tokens = tokenize(text)?;
    Parser { tokens, pos: 0 }.query()
}
