//! Exact-scan and sampled evaluation of a bound query.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::estimator::{estimate_aggregate, tuple_degree, Contribution, EstimateError, GroupEstimate, IntervalBounds};
use crate::fca::{self, build_lattice, group_extents, scale, ConceptLattice, FcaError, GroupKey, ScaledContext};
use crate::query::{BoundAggregate, BoundQuery, IntervalKind};
use crate::sampler::{full_join, join_sample, max_fan_out, JoinSample, SampleError};
use crate::table::Table;

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExecError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Fca(#[from] FcaError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error("driving table #{0} is not in FROM")]
    InvalidDriving(usize),
    #[error("expected {expected} tables in FROM order, got {got}")]
    TableCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecOptions {
    /// Alpha-cut for fuzzy predicates (inclusive).
    pub alpha: f64,
    /// FROM position of the sampled table.
    pub driving: usize,
    /// Incidence-cell guard for the lattice.
    pub max_cells: usize,
}

impl Default for ExecOptions {
    fn default() -> Self {
        Self { alpha: DEFAULT_ALPHA, driving: 0, max_cells: fca::DEFAULT_MAX_CELLS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    pub fraction: f64,
    pub confidence: f64,
    pub interval: IntervalKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupRow {
    pub key: GroupKey,
    /// Mean WHERE-clause degree over the group's tuples.
    pub satisfaction: f64,
    /// One per SELECT aggregate.
    pub estimates: Vec<GroupEstimate>,
}

#[derive(Debug, Clone)]
pub struct Execution {
    pub rows: Vec<GroupRow>,
    pub sample_size: usize,
    pub population: usize,
    /// Present for sampled runs.
    pub lattice: Option<(ConceptLattice, ScaledContext)>,
}

/// The FROM tables of `query`, in FROM order.
pub fn from_tables<'t>(query: &BoundQuery, all: &'t [Table]) -> Vec<&'t Table> {
    query.tables.iter().map(|&i| &all[i]).collect()
}

/// Number of driving rows a fraction selects: `round(f * N)`, at least one
/// row of a non-empty table.
pub fn sample_size_for(fraction: f64, population: usize) -> usize {
    if population == 0 {
        return 0;
    }
    (libm::round(fraction * population as f64) as usize).clamp(1, population)
}

fn check(query: &BoundQuery, tables: &[&Table], options: &ExecOptions) -> Result<(), ExecError> {
    if tables.len() != query.tables.len() {
        return Err(ExecError::TableCount { expected: query.tables.len(), got: tables.len() });
    }
    if options.driving >= tables.len() {
        return Err(ExecError::InvalidDriving(options.driving));
    }
    if !(options.alpha > 0.0 && options.alpha <= 1.0) {
        return Err(FcaError::InvalidAlpha(options.alpha).into());
    }
    Ok(())
}

fn contributions(
    agg: &BoundAggregate,
    objects: &[usize],
    sample: &JoinSample,
    tables: &[&Table],
    degree: impl Fn(usize) -> f64,
) -> Vec<Contribution> {
    objects
        .iter()
        .filter_map(|&o| {
            let value = match agg.column {
                None => 0.0,
                Some(col) => match sample.value(tables, o, col) {
                    v if v.is_null() => return None,
                    v => v.as_f64().unwrap_or(0.0),
                },
            };
            Some(Contribution { origin: sample.tuples[o].origin, degree: degree(o), value })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn estimate_groups(
    query: &BoundQuery,
    tables: &[&Table],
    sample: &JoinSample,
    groups: BTreeMap<GroupKey, Vec<usize>>,
    degree: impl Fn(usize) -> f64 + Copy,
    confidence: f64,
    interval: IntervalKind,
    options: &ExecOptions,
) -> Result<Vec<GroupRow>, ExecError> {
    let fan_out = match interval {
        IntervalKind::Conservative => max_fan_out(tables, &query.joins, options.driving)? as f64,
        IntervalKind::LargeSample => 1.0,
    };
    let bounds: Vec<IntervalBounds> = query
        .aggregates
        .iter()
        .map(|agg| {
            let value_range = match (interval, agg.column) {
                (IntervalKind::Conservative, Some(col)) => {
                    let mut it = tables[col.table].numeric_column(col.column);
                    it.next().map(|first| it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
                }
                _ => None,
            };
            IntervalBounds { fan_out, value_range }
        })
        .collect();

    let mut rows = Vec::new();
    for (key, objects) in groups {
        if objects.is_empty() {
            continue;
        }
        let satisfaction = objects.iter().map(|&o| degree(o)).sum::<f64>() / objects.len() as f64;
        let mut estimates = Vec::with_capacity(query.aggregates.len());
        for (agg, b) in query.aggregates.iter().zip(&bounds) {
            let cs = contributions(agg, &objects, sample, tables, degree);
            if cs.is_empty() {
                // Every tuple of the group had NULL in the aggregated column.
                estimates.push(GroupEstimate {
                    kind: agg.kind,
                    estimate: if agg.kind == crate::query::AggregateKind::Avg { f64::NAN } else { 0.0 },
                    satisfaction: 0.0,
                    confidence,
                    half_width: f64::INFINITY,
                    contributing: 0,
                    sample_size: sample.sample_size,
                    population: sample.population,
                });
                continue;
            }
            estimates.push(estimate_aggregate(
                agg.kind,
                &cs,
                sample.sample_size,
                sample.population,
                confidence,
                interval,
                *b,
            )?);
        }
        rows.push(GroupRow { key, satisfaction: satisfaction.clamp(0.0, 1.0), estimates });
    }
    Ok(rows)
}

/// Full join and full scan: every tuple whose predicates pass the alpha-cut
/// contributes its exact degree. Serves as the oracle for sampled runs.
pub fn run_exact(query: &BoundQuery, tables: &[&Table], options: &ExecOptions) -> Result<Execution, ExecError> {
    check(query, tables, options)?;
    let joined = full_join(tables, &query.joins, options.driving)?;
    let mut degrees = Vec::with_capacity(joined.len());
    let mut groups: BTreeMap<GroupKey, Vec<usize>> = BTreeMap::new();
    let mut fuzzy = Vec::with_capacity(query.fuzzy.len());
    for t in 0..joined.len() {
        fuzzy.clear();
        let mut qualifies = true;
        for f in &query.fuzzy {
            let d = fca::fuzzy_degree(joined.value(tables, t, f.column), &f.term);
            qualifies &= d >= options.alpha;
            fuzzy.push(d);
        }
        let holds = query.crisp.iter().all(|c| fca::crisp_holds(joined.value(tables, t, c.column), c));
        qualifies &= holds;
        degrees.push(tuple_degree(&fuzzy, holds));
        let key: GroupKey = query.group_by.iter().map(|&g| joined.value(tables, t, g).clone()).collect();
        let members = groups.entry(key).or_default();
        if qualifies {
            members.push(t);
        }
    }
    if query.group_by.is_empty() && groups.is_empty() {
        groups.insert(Vec::new(), Vec::new());
    }
    let rows = if joined.sample_size == 0 {
        Vec::new()
    } else {
        // n = N: estimates are exact and the interval collapses to zero.
        let degree = |o: usize| degrees[o];
        estimate_groups(query, tables, &joined, groups, degree, 0.5, IntervalKind::LargeSample, options)?
    };
    Ok(Execution { rows, sample_size: joined.sample_size, population: joined.population, lattice: None })
}

/// Sample, scale, build the lattice, read group extents off it, estimate.
pub fn run_approximate(
    query: &BoundQuery,
    tables: &[&Table],
    sampling: &SamplingOptions,
    options: &ExecOptions,
) -> Result<Execution, ExecError> {
    check(query, tables, options)?;
    let population = tables[options.driving].len();
    let n = sample_size_for(sampling.fraction, population);
    let sample = join_sample(tables, &query.joins, options.driving, n, sampling.seed)?;
    let scaled = scale(&sample, tables, query, options.alpha)?;
    let lattice = build_lattice(&scaled.context, options.max_cells)?;
    let groups: BTreeMap<GroupKey, Vec<usize>> = group_extents(&lattice, &scaled)
        .into_iter()
        .map(|(k, extent)| (k, extent.iter().collect()))
        .collect();
    let rows = if n == 0 {
        Vec::new()
    } else {
        let degree = |o: usize| scaled.tuple_degree(o);
        estimate_groups(query, tables, &sample, groups, degree, sampling.confidence, sampling.interval, options)?
    };
    Ok(Execution { rows, sample_size: n, population, lattice: Some((lattice, scaled)) })
}
