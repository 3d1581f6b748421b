use alloc::string::String;
use alloc::vec::Vec;

use super::ast::Span;
use super::parser::ParseError;

const KEYWORDS: &[&str] = &["SELECT", "FROM", "WHERE", "GROUP", "BY", "AND", "IS", "OR", "NOT"];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(word))
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// Upper-cased keyword.
    Keyword(&'static str),
    Ident(String),
    Number(f64),
    Str(String),
    Comma,
    Dot,
    LParen,
    RParen,
    Star,
    Semicolon,
    Op(super::ast::Comparator),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    use super::ast::Comparator as C;

    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);

    while i < chars.len() {
        let ch = chars[i];
        let span = Span { line, col };
        let start = i;
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if ch.is_ascii_alphabetic() || ch == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match KEYWORDS.iter().find(|k| k.eq_ignore_ascii_case(&word)) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(word),
            }
        } else if ch.is_ascii_digit() || (ch == '-' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit() || *c == '.'))
            || (ch == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit))
        {
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let word: String = chars[start..i].iter().collect();
            match word.parse::<f64>() {
                Ok(x) if x.is_finite() => Tok::Number(x),
                _ => return Err(ParseError::Syntax { span, message: alloc::format!("invalid number `{word}`") }),
            }
        } else if ch == '\'' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(ParseError::Syntax { span, message: "unterminated string".into() }),
                    Some('\'') if chars.get(i + 1) == Some(&'\'') => {
                        s.push('\'');
                        i += 2;
                    }
                    Some('\'') => {
                        i += 1;
                        break;
                    }
                    Some('\n') => return Err(ParseError::Syntax { span, message: "newline in string".into() }),
                    Some(&c) => {
                        s.push(c);
                        i += 1;
                    }
                }
            }
            Tok::Str(s)
        } else {
            i += 1;
            match ch {
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '*' => Tok::Star,
                ';' => Tok::Semicolon,
                '=' => Tok::Op(C::Eq),
                '<' => match chars.get(i) {
                    Some('=') => {
                        i += 1;
                        Tok::Op(C::LtEq)
                    }
                    Some('>') => {
                        i += 1;
                        Tok::Op(C::NotEq)
                    }
                    _ => Tok::Op(C::Lt),
                },
                '>' => {
                    if chars.get(i) == Some(&'=') {
                        i += 1;
                        Tok::Op(C::GtEq)
                    } else {
                        Tok::Op(C::Gt)
                    }
                }
                '!' if chars.get(i) == Some(&'=') => {
                    i += 1;
                    Tok::Op(C::NotEq)
                }
                other => {
                    return Err(ParseError::Syntax { span, message: alloc::format!("unexpected character `{other}`") })
                }
            }
        };
        col += (i - start) as u32;
        out.push(Token { tok, span });
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn kinds(text: &str) -> Vec<Tok> {
        tokenize(text).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn keywords_are_case_insensitive() {
        assert_eq!(kinds("select From x"), vec![Tok::Keyword("SELECT"), Tok::Keyword("FROM"), Tok::Ident("x".into()), Tok::Eof]);
    }

    #[test]
    fn numbers_strings_and_operators() {
        assert_eq!(
            kinds("-1.5 'it''s' <= <> != >= 2e3 .5"),
            vec![
                Tok::Number(-1.5),
                Tok::Str("it's".into()),
                Tok::Op(super::super::ast::Comparator::LtEq),
                Tok::Op(super::super::ast::Comparator::NotEq),
                Tok::Op(super::super::ast::Comparator::NotEq),
                Tok::Op(super::super::ast::Comparator::GtEq),
                Tok::Number(2000.0),
                Tok::Number(0.5),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("SELECT\n  x").unwrap();
        assert_eq!((toks[1].span.line, toks[1].span.col), (2, 3));
    }

    #[test]
    fn unterminated_string_is_an_error() {
        assert!(matches!(tokenize("'abc"), Err(ParseError::Syntax { .. })));
    }
}
