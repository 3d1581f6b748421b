use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{FcaError, FormalContext};
use crate::estimator::tuple_degree;
use crate::query::{BoundCrisp, BoundQuery, Literal};
use crate::sampler::JoinSample;
use crate::table::Table;
use crate::value::Value;

/// Values of the GROUP BY columns, in GROUP BY order.
pub type GroupKey = Vec<Value>;

/// A sample turned into a binary context, plus the exact fuzzy degrees the
/// binarisation threw away.
///
/// Attribute layout: one per fuzzy predicate (incident iff degree >= alpha),
/// one per crisp predicate (incident iff it holds), then one per observed
/// value of each GROUP BY column.
#[derive(Debug, Clone)]
pub struct ScaledContext {
    pub context: FormalContext,
    fuzzy_count: usize,
    crisp_count: usize,
    degrees: Vec<f64>,
    crisp_holds: Vec<bool>,
    group_values: Vec<(usize, Value)>,
    group_columns: usize,
    object_groups: Vec<Vec<usize>>,
}

impl ScaledContext {
    pub fn object_count(&self) -> usize {
        self.context.object_count()
    }

    /// Exact membership of `object` for each fuzzy predicate.
    pub fn degrees(&self, object: usize) -> &[f64] {
        &self.degrees[object * self.fuzzy_count..(object + 1) * self.fuzzy_count]
    }

    pub fn crisp_holds(&self, object: usize) -> bool {
        self.crisp_holds[object]
    }

    /// Conjunctive degree of the whole WHERE clause for one object.
    pub fn tuple_degree(&self, object: usize) -> f64 {
        tuple_degree(self.degrees(object), self.crisp_holds(object))
    }

    /// Attribute ids of every predicate.
    pub fn predicate_attributes(&self) -> core::ops::Range<usize> {
        0..self.fuzzy_count + self.crisp_count
    }

    /// Group-value attribute ids of `object`, one per GROUP BY column.
    pub fn object_group_attributes(&self, object: usize) -> &[usize] {
        &self.object_groups[object]
    }

    pub fn group_columns(&self) -> usize {
        self.group_columns
    }

    pub fn group_key(&self, attributes: &[usize]) -> GroupKey {
        let offset = self.fuzzy_count + self.crisp_count;
        attributes.iter().map(|&a| self.group_values[a - offset].1.clone()).collect()
    }
}

pub(crate) fn crisp_holds(value: &Value, p: &BoundCrisp) -> bool {
    let ord = match (value, &p.value) {
        (Value::Num(x), Literal::Number(y)) => x.total_cmp(y),
        (Value::Text(x), Literal::String(y)) => x.as_str().cmp(y.as_str()),
        _ => return false,
    };
    p.op.holds(ord)
}

pub(crate) fn fuzzy_degree(value: &Value, term: &crate::kb::TrapezoidalTerm) -> f64 {
    value.as_f64().map_or(0.0, |x| term.membership(x))
}

/// Conceptual scaling of a join sample for `query`.
pub fn scale(sample: &JoinSample, tables: &[&Table], query: &BoundQuery, alpha: f64) -> Result<ScaledContext, FcaError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(FcaError::InvalidAlpha(alpha));
    }
    let n = sample.len();
    let fuzzy_count = query.fuzzy.len();
    let crisp_count = query.crisp.len();

    let mut per_column: Vec<BTreeMap<&Value, usize>> = alloc::vec![BTreeMap::new(); query.group_by.len()];
    for t in 0..n {
        for (gi, &col) in query.group_by.iter().enumerate() {
            per_column[gi].entry(sample.value(tables, t, col)).or_insert(0);
        }
    }
    let mut names: Vec<String> = query.fuzzy.iter().map(|f| f.label.clone()).collect();
    names.extend(query.crisp.iter().map(|c| c.label.clone()));
    let mut group_values = Vec::new();
    for (gi, values) in per_column.iter_mut().enumerate() {
        for (v, id) in values.iter_mut() {
            *id = names.len();
            names.push(alloc::format!("{}={}", query.group_labels[gi], v));
            group_values.push((gi, (*v).clone()));
        }
    }

    let mut context = FormalContext::new(n, names);
    let mut degrees = Vec::with_capacity(n * fuzzy_count);
    let mut holds = Vec::with_capacity(n);
    let mut object_groups = Vec::with_capacity(n);
    for t in 0..n {
        for (i, f) in query.fuzzy.iter().enumerate() {
            let d = fuzzy_degree(sample.value(tables, t, f.column), &f.term);
            degrees.push(d);
            if d >= alpha {
                context.set(t, i)?;
            }
        }
        let mut all = true;
        for (i, c) in query.crisp.iter().enumerate() {
            if crisp_holds(sample.value(tables, t, c.column), c) {
                context.set(t, fuzzy_count + i)?;
            } else {
                all = false;
            }
        }
        holds.push(all);
        let mut groups = Vec::with_capacity(query.group_by.len());
        for (gi, &col) in query.group_by.iter().enumerate() {
            let id = per_column[gi][sample.value(tables, t, col)];
            context.set(t, id)?;
            groups.push(id);
        }
        object_groups.push(groups);
    }
    Ok(ScaledContext {
        context,
        fuzzy_count,
        crisp_count,
        degrees,
        crisp_holds: holds,
        group_values,
        group_columns: query.group_by.len(),
        object_groups,
    })
}
