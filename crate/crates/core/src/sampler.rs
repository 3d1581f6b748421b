//! Seeded simple random sampling and driving-table join samples.
//!
//! Only the driving table is sampled; every other table is joined in full,
//! so each sampled driving row carries all of its join partners and
//! `(N / n) * sum` stays an unbiased scale-up.

use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::query::{BoundColumn, BoundJoin};
use crate::table::Table;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("sample of {requested} rows requested from {available}")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("table #{table} is not connected to the driving table by any join")]
    DisconnectedJoinGraph { table: usize },
    #[error("driving table #{0} is not in the table list")]
    UnknownDriving(usize),
}

/// `n` distinct indices from `0..population` by partial Fisher–Yates, in
/// shuffle order.
pub fn sample_indices(population: usize, n: usize, seed: u64) -> Result<Vec<usize>, SampleError> {
    if n > population {
        return Err(SampleError::SampleTooLarge { requested: n, available: population });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..population).collect();
    for i in 0..n {
        let j = rng.random_range(i..population);
        idx.swap(i, j);
    }
    idx.truncate(n);
    Ok(idx)
}

/// Simple random sample without replacement of `n` rows.
pub fn uniform_sample(table: &Table, n: usize, seed: u64) -> Result<Vec<&[Value]>, SampleError> {
    Ok(sample_indices(table.len(), n, seed)?
        .into_iter()
        .map(|i| table.rows()[i].as_slice())
        .collect())
}

/// One joined row: a row index per table, plus the sample position of the
/// driving row it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinedTuple {
    pub origin: usize,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinSample {
    pub tuples: Vec<JoinedTuple>,
    /// Driving rows drawn (`n`), including those that joined nothing.
    pub sample_size: usize,
    /// Driving-table population (`N`).
    pub population: usize,
    pub seed: u64,
    pub driving: usize,
}

impl JoinSample {
    /// Cell of `column` within the joined tuple.
    pub fn value<'t>(&self, tables: &[&'t Table], tuple: usize, column: BoundColumn) -> &'t Value {
        let row = self.tuples[tuple].rows[column.table];
        tables[column.table].value(row, column.column)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

struct Step {
    table: usize,
    key_column: usize,
    probe: BoundColumn,
    filters: Vec<(BoundColumn, BoundColumn)>,
}

fn plan(table_count: usize, joins: &[BoundJoin], driving: usize) -> Result<Vec<Step>, SampleError> {
    if driving >= table_count {
        return Err(SampleError::UnknownDriving(driving));
    }
    let mut placed = alloc::vec![false; table_count];
    placed[driving] = true;
    let mut used = alloc::vec![false; joins.len()];
    let mut steps = Vec::new();
    for _ in 1..table_count {
        let next = joins.iter().enumerate().find_map(|(i, j)| match (placed[j.left.table], placed[j.right.table]) {
            (true, false) => Some((i, j.left, j.right)),
            (false, true) => Some((i, j.right, j.left)),
            _ => None,
        });
        let Some((edge, probe, key)) = next else {
            let missing = placed.iter().position(|p| !p).expect("unplaced table");
            return Err(SampleError::DisconnectedJoinGraph { table: missing });
        };
        used[edge] = true;
        placed[key.table] = true;
        let mut filters = Vec::new();
        for (i, j) in joins.iter().enumerate() {
            if !used[i] && placed[j.left.table] && placed[j.right.table] {
                used[i] = true;
                filters.push((j.left, j.right));
            }
        }
        steps.push(Step { table: key.table, key_column: key.column, probe, filters });
    }
    Ok(steps)
}

fn join_rows(
    tables: &[&Table],
    joins: &[BoundJoin],
    driving: usize,
    driving_rows: &[usize],
) -> Result<Vec<JoinedTuple>, SampleError> {
    let steps = plan(tables.len(), joins, driving)?;
    let mut tuples: Vec<JoinedTuple> = driving_rows
        .iter()
        .enumerate()
        .map(|(origin, &row)| {
            let mut rows = alloc::vec![usize::MAX; tables.len()];
            rows[driving] = row;
            JoinedTuple { origin, rows }
        })
        .collect();

    for step in steps {
        let cell = |t: &JoinedTuple, c: BoundColumn| tables[c.table].value(t.rows[c.table], c.column);
        let needed: HashSet<&Value> = tuples.iter().map(|t| cell(t, step.probe)).filter(|v| !v.is_null()).collect();
        let dim = tables[step.table];
        let mut index: HashMap<&Value, Vec<usize>> = HashMap::with_capacity(needed.len());
        for (r, row) in dim.rows().iter().enumerate() {
            let key = &row[step.key_column];
            if needed.contains(key) {
                index.entry(key).or_default().push(r);
            }
        }
        let mut next = Vec::with_capacity(tuples.len());
        for t in tuples {
            let Some(matches) = index.get(cell(&t, step.probe)) else { continue };
            for &r in matches {
                let mut joined = t.clone();
                joined.rows[step.table] = r;
                let keep = step.filters.iter().all(|&(l, rr)| {
                    let (a, b) = (cell(&joined, l), cell(&joined, rr));
                    !a.is_null() && a == b
                });
                if keep {
                    next.push(joined);
                }
            }
        }
        tuples = next;
    }
    Ok(tuples)
}

/// Samples `n` driving rows uniformly and equi-joins each with the other
/// tables in full. Sampled rows are processed in table order.
pub fn join_sample(
    tables: &[&Table],
    joins: &[BoundJoin],
    driving: usize,
    n: usize,
    seed: u64,
) -> Result<JoinSample, SampleError> {
    if driving >= tables.len() {
        return Err(SampleError::UnknownDriving(driving));
    }
    let population = tables[driving].len();
    let mut rows = sample_indices(population, n, seed)?;
    rows.sort_unstable();
    let tuples = join_rows(tables, joins, driving, &rows)?;
    Ok(JoinSample { tuples, sample_size: n, population, seed, driving })
}

/// The complete join, laid out exactly like a sample with `n = N`.
pub fn full_join(tables: &[&Table], joins: &[BoundJoin], driving: usize) -> Result<JoinSample, SampleError> {
    if driving >= tables.len() {
        return Err(SampleError::UnknownDriving(driving));
    }
    let population = tables[driving].len();
    let rows: Vec<usize> = (0..population).collect();
    let tuples = join_rows(tables, joins, driving, &rows)?;
    Ok(JoinSample { tuples, sample_size: population, population, seed: 0, driving })
}

/// Upper bound on the number of joined tuples a single driving row can yield:
/// the product over joined tables of the largest key multiplicity.
pub fn max_fan_out(tables: &[&Table], joins: &[BoundJoin], driving: usize) -> Result<usize, SampleError> {
    let steps = plan(tables.len(), joins, driving)?;
    let mut bound = 1usize;
    for step in steps {
        let mut counts: HashMap<&Value, usize> = HashMap::new();
        for row in tables[step.table].rows() {
            let key = &row[step.key_column];
            if !key.is_null() {
                *counts.entry(key).or_default() += 1;
            }
        }
        bound = bound.saturating_mul(counts.values().copied().max().unwrap_or(0));
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{Column, ColumnType};
    use alloc::vec;

    fn numbers(name: &str, cols: &[&str], rows: &[&[f64]]) -> Table {
        Table::new(
            name,
            cols.iter().map(|c| Column::new(*c, ColumnType::Numeric)).collect(),
            rows.iter().map(|r| r.iter().map(|&x| Value::Num(x)).collect()).collect(),
        )
        .unwrap()
    }

    fn join(lt: usize, lc: usize, rt: usize, rc: usize) -> BoundJoin {
        BoundJoin { left: BoundColumn { table: lt, column: lc }, right: BoundColumn { table: rt, column: rc } }
    }

    #[test]
    fn exhaustive_sample_is_a_permutation() {
        let mut idx = sample_indices(10, 10, 3).unwrap();
        idx.sort_unstable();
        assert_eq!(idx, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn empty_and_oversized_samples() {
        assert!(sample_indices(10, 0, 3).unwrap().is_empty());
        assert_eq!(sample_indices(3, 4, 0), Err(SampleError::SampleTooLarge { requested: 4, available: 3 }));
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(sample_indices(100, 10, 42).unwrap(), sample_indices(100, 10, 42).unwrap());
        assert_ne!(sample_indices(100, 10, 42).unwrap(), sample_indices(100, 10, 43).unwrap());
    }

    #[test]
    fn inclusion_probability_is_n_over_population() {
        let mut hits = [0usize; 10];
        let seeds = 10_000;
        for seed in 0..seeds {
            for i in sample_indices(10, 3, seed).unwrap() {
                hits[i] += 1;
            }
        }
        for h in hits {
            let freq = h as f64 / seeds as f64;
            assert!((freq - 0.3).abs() <= 0.02, "{freq}");
        }
    }

    #[test]
    fn key_foreign_key_join() {
        let facts: Vec<Vec<f64>> = (0..1000).map(|i| vec![i as f64, (i % 50) as f64]).collect();
        let fact_refs: Vec<&[f64]> = facts.iter().map(|r| r.as_slice()).collect();
        let fact = numbers("f", &["id", "dim"], &fact_refs);
        let dims: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let dim_refs: Vec<&[f64]> = dims.iter().map(|r| r.as_slice()).collect();
        let dim = numbers("d", &["id", "w"], &dim_refs);
        let tables = [&fact, &dim];
        let s = join_sample(&tables, &[join(0, 1, 1, 0)], 0, 100, 9).unwrap();
        assert_eq!((s.len(), s.sample_size, s.population), (100, 100, 1000));
        for t in &s.tuples {
            assert_eq!(fact.value(t.rows[0], 1), dim.value(t.rows[1], 0));
        }
        assert_eq!(s, join_sample(&tables, &[join(1, 0, 0, 1)], 0, 100, 9).unwrap());
    }

    #[test]
    fn unmatched_driving_rows_still_count() {
        let fact = numbers("f", &["k"], &[&[1.0], &[2.0], &[99.0]]);
        let dim = numbers("d", &["k"], &[&[1.0], &[2.0]]);
        let s = full_join(&[&fact, &dim], &[join(0, 0, 1, 0)], 0).unwrap();
        assert_eq!(s.sample_size, 3);
        assert_eq!(s.len(), 2);
        assert_eq!(s.tuples.iter().map(|t| t.origin).collect::<Vec<_>>(), [0, 1]);
    }

    #[test]
    fn one_to_many_and_cyclic_filters() {
        // a(x, y) -> b(x) twice, c(y); extra edge b.x = c.z filters.
        let a = numbers("a", &["x", "y"], &[&[1.0, 10.0]]);
        let b = numbers("b", &["x"], &[&[1.0], &[1.0], &[2.0]]);
        let c = numbers("c", &["y", "z"], &[&[10.0, 1.0], &[10.0, 5.0]]);
        let joins = [join(0, 0, 1, 0), join(0, 1, 2, 0)];
        let s = full_join(&[&a, &b, &c], &joins, 0).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(max_fan_out(&[&a, &b, &c], &joins, 0).unwrap(), 4);
        let with_cycle = [join(0, 0, 1, 0), join(0, 1, 2, 0), join(1, 0, 2, 1)];
        assert_eq!(full_join(&[&a, &b, &c], &with_cycle, 0).unwrap().len(), 2);
    }

    #[test]
    fn disconnected_graph() {
        let a = numbers("a", &["x"], &[&[1.0]]);
        let b = numbers("b", &["x"], &[&[1.0]]);
        assert_eq!(
            join_sample(&[&a, &b], &[], 0, 1, 0),
            Err(SampleError::DisconnectedJoinGraph { table: 1 })
        );
    }

    #[test]
    fn null_keys_never_match() {
        let a = Table::new("a", vec![Column::new("k", ColumnType::Numeric)], vec![vec![Value::Null]]).unwrap();
        let b = Table::new("b", vec![Column::new("k", ColumnType::Numeric)], vec![vec![Value::Null]]).unwrap();
        assert!(full_join(&[&a, &b], &[join(0, 0, 1, 0)], 0).unwrap().is_empty());
    }
}
