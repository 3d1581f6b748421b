//! Line-oriented KB text format.
//!
//! ```text
//! kb v1
//! source sha256:...          # optional
//! attr Patient.age
//! term young 18 18 30 45
//! ```

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{KbError, KnowledgeBase, RelaxableAttribute, TrapezoidalTerm};

const HEADER: &str = "kb v1";

struct PendingAttribute {
    table: String,
    column: String,
    line: usize,
    terms: Vec<TrapezoidalTerm>,
}

fn parse_err(line: usize, message: impl Into<String>) -> KbError {
    KbError::Parse { line, message: message.into() }
}

fn finish(kb: &mut KnowledgeBase, pending: Option<PendingAttribute>) -> Result<(), KbError> {
    if let Some(p) = pending {
        let attr = RelaxableAttribute::new(p.table, p.column, p.terms)?;
        kb.insert(attr).map_err(|e| match e {
            KbError::DuplicateAttribute(name) => parse_err(p.line, alloc::format!("duplicate attribute {name}")),
            other => other,
        })?;
    }
    Ok(())
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, KbError> {
    let mut kb = KnowledgeBase::new();
    let mut seen_header = false;
    let mut pending: Option<PendingAttribute> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();

        if !seen_header {
            if keyword != "kb" || rest != ["v1"] {
                return Err(parse_err(line_no, alloc::format!("expected header `{HEADER}`")));
            }
            seen_header = true;
            continue;
        }

        match keyword {
            "source" => {
                let [digest] = rest[..] else {
                    return Err(parse_err(line_no, "expected `source <digest>`"));
                };
                if kb.fingerprint().is_some() {
                    return Err(parse_err(line_no, "duplicate source line"));
                }
                kb.set_fingerprint(Some(digest.into()));
            }
            "attr" => {
                let [qualified] = rest[..] else {
                    return Err(parse_err(line_no, "expected `attr <table>.<column>`"));
                };
                let Some((table, column)) = qualified.split_once('.').filter(|(t, c)| !t.is_empty() && !c.is_empty())
                else {
                    return Err(parse_err(line_no, "attribute must be written <table>.<column>"));
                };
                finish(&mut kb, pending.take())?;
                pending = Some(PendingAttribute {
                    table: table.into(),
                    column: column.into(),
                    line: line_no,
                    terms: Vec::new(),
                });
            }
            "term" => {
                let Some(attr) = pending.as_mut() else {
                    return Err(parse_err(line_no, "term before any attr line"));
                };
                let [name, a, b, c, d] = rest[..] else {
                    return Err(parse_err(line_no, "expected `term <name> <a> <b> <c> <d>`"));
                };
                let mut xs = [0.0; 4];
                for (slot, word) in xs.iter_mut().zip([a, b, c, d]) {
                    *slot = word
                        .parse::<f64>()
                        .map_err(|_| parse_err(line_no, alloc::format!("invalid number `{word}`")))?;
                }
                let term = TrapezoidalTerm::new(name, xs[0], xs[1], xs[2], xs[3]).map_err(|e| {
                    KbError::InvariantViolation {
                        attribute: alloc::format!("{}.{}", attr.table, attr.column),
                        message: alloc::format!("line {line_no}: {e}"),
                    }
                })?;
                attr.terms.push(term);
            }
            other => return Err(parse_err(line_no, alloc::format!("unknown directive `{other}`"))),
        }
    }
    finish(&mut kb, pending)?;
    Ok(kb)
}

pub fn render_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if let Some(fp) = kb.fingerprint() {
        let _ = writeln!(out, "source {fp}");
    }
    for attr in kb.attributes() {
        let _ = writeln!(out, "attr {}.{}", attr.table(), attr.column());
        for t in attr.terms() {
            let [a, b, c, d] = t.breakpoints();
            let _ = writeln!(out, "term {} {a} {b} {c} {d}", t.name());
        }
    }
    out
}
