//! Timed exact vs sampled runs over growing prefixes of the driving table.

use std::io;

use flexaq_core::query::{rewrite_to_approximate, BoundQuery, FlexibleQuery};
use flexaq_core::Table;

use crate::engine::{relative_errors, run_approximate, run_exact, EngineError, Mode, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub fractions: Vec<f64>,
    pub repetitions: usize,
    /// Confidence, interval, alpha, driving table and base seed. Repetition
    /// `i` uses seed `run.seed + i`.
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    /// Driving-table rows actually used.
    pub rows: usize,
    pub mode: Mode,
    /// 1 for exact runs.
    pub fraction: f64,
    pub median_ms: f64,
    pub max_rel_error: f64,
    pub median_rel_error: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Tables with the driving table cut to its first `size` rows.
pub fn with_driving_prefix(tables: &[Table], query: &BoundQuery, driving: usize, size: usize) -> Vec<Table> {
    let target = query.tables[driving];
    tables.iter().enumerate().map(|(i, t)| if i == target { t.truncated(size) } else { t.clone() }).collect()
}

/// One exact row and one row per fraction for every size, in that order.
/// Repetitions run sequentially.
pub fn benchmark(
    query: &FlexibleQuery,
    bound: &BoundQuery,
    tables: &[Table],
    config: &BenchConfig,
) -> Result<Vec<BenchRow>, EngineError> {
    if config.sizes.is_empty() || config.fractions.is_empty() || config.repetitions == 0 {
        return Err(EngineError::Config("need at least one size, one fraction and one repetition".into()));
    }
    config.run.validate()?;
    let approximations = config
        .fractions
        .iter()
        .map(|&f| rewrite_to_approximate(query.clone(), config.run.confidence, config.run.interval, f))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = Vec::new();
    for &size in &config.sizes {
        let data = with_driving_prefix(tables, bound, config.run.driving, size);
        let rows = data[bound.tables[config.run.driving]].len();

        let mut oracle = None;
        let mut times = Vec::with_capacity(config.repetitions);
        for _ in 0..config.repetitions {
            let result = run_exact(bound, &data, &config.run)?;
            times.push(result.elapsed_ms);
            oracle = Some(result);
        }
        let oracle = oracle.expect("at least one repetition");
        report.push(BenchRow {
            rows,
            mode: Mode::Exact,
            fraction: 1.0,
            median_ms: median(&mut times),
            max_rel_error: 0.0,
            median_rel_error: 0.0,
        });

        for aq in &approximations {
            let mut times = Vec::with_capacity(config.repetitions);
            let mut errors = Vec::new();
            for i in 0..config.repetitions {
                let run = RunConfig { seed: config.run.seed.wrapping_add(i as u64), export_lattice: false, ..config.run.clone() };
                let result = run_approximate(aq, bound, &data, &run)?;
                times.push(result.elapsed_ms);
                errors.extend(relative_errors(&oracle, &result));
            }
            report.push(BenchRow {
                rows,
                mode: Mode::Approximate,
                fraction: aq.sample_fraction(),
                median_ms: median(&mut times),
                max_rel_error: errors.iter().copied().fold(0.0, f64::max),
                median_rel_error: if errors.is_empty() { 0.0 } else { median(&mut errors) },
            });
        }
    }
    Ok(report)
}

pub fn write_report(rows: &[BenchRow], out: impl io::Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rows", "mode", "fraction", "median_ms", "max_rel_error", "median_rel_error"])?;
    for r in rows {
        w.write_record([
            r.rows.to_string(),
            r.mode.to_string(),
            r.fraction.to_string(),
            format!("{:.3}", r.median_ms),
            format!("{:.6}", r.max_rel_error),
            format!("{:.6}", r.median_rel_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&mut []).is_nan());
    }
}
