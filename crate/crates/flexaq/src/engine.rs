//! Query orchestration: parse, bind, execute exactly or over a sample, and
//! render one row per group.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use flexaq_core::exec::{self, ExecError, ExecOptions, Execution, SamplingOptions};
use flexaq_core::fca::{to_dot, DEFAULT_MAX_CELLS};
use flexaq_core::kb::KnowledgeBase;
use flexaq_core::query::{
    bind, parse, rewrite_to_approximate, ApproximateQuery, BoundQuery, Diagnostic, FlexibleQuery, IntervalKind, ParseError,
    RewriteError, Schema, DEFAULT_CONFIDENCE,
};
use flexaq_core::{Table, Value};

use crate::ingest::IngestError;
use crate::kbfile::KbFileError;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid query:\n{}", render_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    KbFile(#[from] KbFileError),
}

impl EngineError {
    /// Problems with the query or its parameters, as opposed to failures
    /// while loading or executing.
    pub fn is_validation(&self) -> bool {
        matches!(self, Self::Parse(_) | Self::Invalid(_) | Self::Rewrite(_) | Self::Config(_))
    }
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Exact,
    #[default]
    Approximate,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "EXACT",
            Mode::Approximate => "APPROXIMATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub kb_path: PathBuf,
    pub sample_fraction: f64,
    pub confidence: f64,
    pub interval: IntervalKind,
    pub alpha: f64,
    pub seed: u64,
    pub mode: Mode,
    /// FROM position of the sampled table.
    pub driving: usize,
    pub max_cells: usize,
    /// Keep a DOT rendering of the lattice of approximate runs.
    pub export_lattice: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_dir: PathBuf::from("."),
            kb_path: PathBuf::from("kb.txt"),
            sample_fraction: 0.1,
            confidence: DEFAULT_CONFIDENCE,
            interval: IntervalKind::LargeSample,
            alpha: exec::DEFAULT_ALPHA,
            seed: 0,
            mode: Mode::Approximate,
            driving: 0,
            max_cells: DEFAULT_MAX_CELLS,
            export_lattice: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(EngineError::Config(format!("sample fraction {} is outside (0, 1]", self.sample_fraction)));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(EngineError::Config(format!("confidence {} is outside (0, 1)", self.confidence)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(EngineError::Config(format!("alpha {} is outside (0, 1]", self.alpha)));
        }
        Ok(())
    }

    fn exec_options(&self) -> ExecOptions {
        ExecOptions { alpha: self.alpha, driving: self.driving, max_cells: self.max_cells }
    }
}

/// Parses and binds `sql` against the loaded tables and knowledge base.
pub fn prepare(sql: &str, tables: &[Table], kb: &KnowledgeBase) -> Result<(FlexibleQuery, BoundQuery), EngineError> {
    let query = parse(sql)?;
    let bound = bind(&query, kb, &Schema::from_tables(tables)).map_err(EngineError::Invalid)?;
    Ok((query, bound))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub group: Vec<Value>,
    /// One per SELECT aggregate.
    pub estimates: Vec<f64>,
    /// `None` in exact mode; `+inf` when no interval could be formed.
    pub half_widths: Vec<Option<f64>>,
    pub satisfaction: f64,
    /// Statistical confidence level; `None` in exact mode.
    pub confidence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub header: Vec<String>,
    pub rows: Vec<ResultRow>,
    pub mode: Mode,
    pub elapsed_ms: f64,
    pub n: usize,
    pub population: usize,
    pub seed: Option<u64>,
    pub lattice_dot: Option<String>,
}

impl ResultTable {
    pub fn row(&self, group: &[Value]) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.group == group)
    }
}

fn header(query: &BoundQuery) -> Vec<String> {
    let labels: Vec<&str> = query.aggregates.iter().map(|a| a.label.as_str()).collect();
    let mut h = vec!["group".to_string()];
    if let [_] = labels[..] {
        h.extend(["estimate", "satisfaction", "confidence", "estimate ± halfwidth"].map(String::from));
    } else {
        h.extend(labels.iter().map(|l| l.to_string()));
        h.extend(["satisfaction", "confidence"].map(String::from));
        h.extend(labels.iter().map(|l| format!("{l} ± halfwidth")));
    }
    h
}

fn result_table(query: &BoundQuery, run: Execution, mode: Mode, elapsed_ms: f64, seed: Option<u64>) -> ResultTable {
    let rows = run
        .rows
        .into_iter()
        .map(|r| ResultRow {
            estimates: r.estimates.iter().map(|e| e.estimate).collect(),
            half_widths: r.estimates.iter().map(|e| (mode == Mode::Approximate).then_some(e.half_width)).collect(),
            confidence: r.estimates.first().filter(|_| mode == Mode::Approximate).map(|e| e.confidence),
            satisfaction: r.satisfaction,
            group: r.key,
        })
        .collect();
    let lattice_dot = run.lattice.as_ref().map(|(lattice, scaled)| to_dot(lattice, scaled));
    ResultTable {
        header: header(query),
        rows,
        mode,
        elapsed_ms,
        n: run.sample_size,
        population: run.population,
        seed,
        lattice_dot,
    }
}

/// Full join and scan. The elapsed time covers execution only.
pub fn run_exact(query: &BoundQuery, tables: &[Table], config: &RunConfig) -> Result<ResultTable, EngineError> {
    let from = exec::from_tables(query, tables);
    let start = Instant::now();
    let run = exec::run_exact(query, &from, &config.exec_options())?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(result_table(query, run, Mode::Exact, elapsed_ms, None))
}

/// Evaluates over a seeded join sample of `aq.sample_fraction()` of the
/// driving table. The elapsed time covers execution only.
pub fn run_approximate(
    aq: &ApproximateQuery,
    query: &BoundQuery,
    tables: &[Table],
    config: &RunConfig,
) -> Result<ResultTable, EngineError> {
    let from = exec::from_tables(query, tables);
    let sampling = SamplingOptions {
        fraction: aq.sample_fraction(),
        confidence: aq.confidence(),
        interval: aq.interval(),
        seed: config.seed,
    };
    let start = Instant::now();
    let mut run = exec::run_approximate(query, &from, &sampling, &config.exec_options())?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if !config.export_lattice {
        run.lattice = None;
    }
    Ok(result_table(query, run, Mode::Approximate, elapsed_ms, Some(config.seed)))
}

/// Parses, binds and runs `sql` in the configured mode.
pub fn run_sql(sql: &str, tables: &[Table], kb: &KnowledgeBase, config: &RunConfig) -> Result<ResultTable, EngineError> {
    config.validate()?;
    let (query, bound) = prepare(sql, tables, kb)?;
    match config.mode {
        Mode::Exact => run_exact(&bound, tables, config),
        Mode::Approximate => {
            let aq = rewrite_to_approximate(query, config.confidence, config.interval, config.sample_fraction)?;
            run_approximate(&aq, &bound, tables, config)
        }
    }
}

/// `|approx - exact| / |exact|` for every group and aggregate of the exact
/// result. A group missing from the approximation counts as error 1.
pub fn relative_errors(exact: &ResultTable, approx: &ResultTable) -> Vec<f64> {
    let mut errors = Vec::new();
    for row in &exact.rows {
        let other = approx.row(&row.group);
        for (i, &truth) in row.estimates.iter().enumerate() {
            if truth == 0.0 || !truth.is_finite() {
                continue;
            }
            errors.push(match other {
                Some(o) => ((o.estimates[i] - truth) / truth).abs(),
                None => 1.0,
            });
        }
    }
    errors
}

fn fmt_num(x: f64) -> String {
    if x.is_infinite() {
        "n/a".to_string()
    } else if x.is_nan() {
        "NULL".to_string()
    } else if x == x.trunc() && x.abs() < 1e15 {
        format!("{x:.0}")
    } else {
        format!("{x:.4}")
    }
}

fn fmt_group(group: &[Value]) -> String {
    if group.is_empty() {
        return "(all)".to_string();
    }
    group.iter().map(Value::to_string).collect::<Vec<_>>().join(", ")
}

impl ResultRow {
    /// Cells in header order.
    pub fn cells(&self) -> Vec<String> {
        let mut cells = vec![fmt_group(&self.group)];
        cells.extend(self.estimates.iter().map(|&e| fmt_num(e)));
        cells.push(format!("{:.4}", self.satisfaction));
        cells.push(self.confidence.map_or_else(|| "-".to_string(), |p| format!("{p}")));
        for (&e, hw) in self.estimates.iter().zip(&self.half_widths) {
            cells.push(match *hw {
                None => "-".to_string(),
                Some(hw) if hw.is_infinite() => "n/a".to_string(),
                Some(hw) => format!("{} ± {}", fmt_num(e), fmt_num(hw)),
            });
        }
        cells
    }
}

impl fmt::Display for ResultTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<Vec<String>> = self.rows.iter().map(ResultRow::cells).collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| body.iter().map(|r| r[c].chars().count()).chain([self.header[c].chars().count()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect::<Vec<_>>().join(" | ").trim_end().to_string()
        };
        writeln!(f, "{}", line(&self.header))?;
        for row in &body {
            writeln!(f, "{}", line(row))?;
        }
        write!(f, "{} n={} N={}", self.mode, self.n, self.population)?;
        if let Some(seed) = self.seed {
            write!(f, " seed={seed}")?;
        }
        write!(f, " elapsed={:.3} ms", self.elapsed_ms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_cells() {
        assert_eq!(fmt_num(12.0), "12");
        assert_eq!(fmt_num(2.5), "2.5000");
        assert_eq!(fmt_num(f64::INFINITY), "n/a");
        assert_eq!(fmt_group(&[]), "(all)");
        assert_eq!(fmt_group(&[Value::Num(2016.0), Value::from("x")]), "2016, x");
    }

    #[test]
    fn config_ranges() {
        assert!(RunConfig::default().validate().is_ok());
        for bad in [
            RunConfig { sample_fraction: 0.0, ..RunConfig::default() },
            RunConfig { sample_fraction: 1.5, ..RunConfig::default() },
            RunConfig { confidence: 1.0, ..RunConfig::default() },
            RunConfig { alpha: 0.0, ..RunConfig::default() },
        ] {
            assert!(bad.validate().unwrap_err().is_validation());
        }
    }
}
