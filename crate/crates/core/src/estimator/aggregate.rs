use alloc::vec::Vec;

use super::interval::{hoeffding_half_width, large_sample_interval};
use super::EstimateError;
use crate::query::{AggregateKind, IntervalKind};

/// Min t-norm over the fuzzy degrees, zeroed when a crisp predicate fails.
pub fn tuple_degree(fuzzy_degrees: &[f64], crisp_holds: bool) -> f64 {
    if !crisp_holds {
        return 0.0;
    }
    fuzzy_degrees.iter().copied().fold(1.0, f64::min)
}

fn scale_up(n: usize, population: usize) -> Result<f64, EstimateError> {
    if n == 0 {
        return Err(EstimateError::EmptySample);
    }
    if n > population {
        return Err(EstimateError::SampleExceedsPopulation { sample: n, population });
    }
    Ok(population as f64 / n as f64)
}

/// Sigma-count scale-up: `(N / n) * sum(degrees)`.
pub fn estimate_count(degrees: &[f64], n: usize, population: usize) -> Result<f64, EstimateError> {
    Ok(scale_up(n, population)? * degrees.iter().sum::<f64>())
}

/// `(N / n) * sum(degree * value)`.
pub fn estimate_sum(weighted: &[(f64, f64)], n: usize, population: usize) -> Result<f64, EstimateError> {
    Ok(scale_up(n, population)? * weighted.iter().map(|(d, v)| d * v).sum::<f64>())
}

/// Degree-weighted mean `sum(d * v) / sum(d)`.
pub fn estimate_avg(weighted: &[(f64, f64)]) -> Result<f64, EstimateError> {
    let den: f64 = weighted.iter().map(|(d, _)| d).sum();
    if den <= 0.0 {
        return Err(EstimateError::ZeroSatisfaction);
    }
    Ok(weighted.iter().map(|(d, v)| d * v).sum::<f64>() / den)
}

/// One joined tuple that passed the predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contribution {
    /// Sample position of the driving row the tuple came from.
    pub origin: usize,
    pub degree: f64,
    /// Aggregated value; ignored by COUNT.
    pub value: f64,
}

/// Ranges the conservative interval relies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalBounds {
    /// Most joined tuples one driving row can produce.
    pub fan_out: f64,
    /// Population range of the aggregated column.
    pub value_range: Option<(f64, f64)>,
}

impl Default for IntervalBounds {
    fn default() -> Self {
        Self { fan_out: 1.0, value_range: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupEstimate {
    pub kind: AggregateKind,
    pub estimate: f64,
    /// Mean degree of the contributing tuples.
    pub satisfaction: f64,
    pub confidence: f64,
    /// Half-width of the interval around `estimate`; `+inf` when the group is
    /// too small to bound.
    pub half_width: f64,
    pub contributing: usize,
    pub sample_size: usize,
    pub population: usize,
}

/// Estimate plus interval for one aggregate of one group.
///
/// `contributions` must be ordered by `origin`, all below `n`.
pub fn estimate_aggregate(
    kind: AggregateKind,
    contributions: &[Contribution],
    n: usize,
    population: usize,
    confidence: f64,
    interval: IntervalKind,
    bounds: IntervalBounds,
) -> Result<GroupEstimate, EstimateError> {
    let weighted: Vec<(f64, f64)> = contributions.iter().map(|c| (c.degree, c.value)).collect();
    let degrees: Vec<f64> = contributions.iter().map(|c| c.degree).collect();
    let estimate = match kind {
        AggregateKind::Count => estimate_count(&degrees, n, population)?,
        AggregateKind::Sum => estimate_sum(&weighted, n, population)?,
        AggregateKind::Avg => estimate_avg(&weighted)?,
    };
    let satisfaction = if degrees.is_empty() {
        0.0
    } else {
        (degrees.iter().sum::<f64>() / degrees.len() as f64).clamp(0.0, 1.0)
    };

    // Per-driving-row totals: x = sum of degrees, y = sum of degree * value.
    let totals = || {
        let mut x = alloc::vec![0.0; n];
        let mut y = alloc::vec![0.0; n];
        for c in contributions {
            x[c.origin] += c.degree;
            y[c.origin] += c.degree * c.value;
        }
        (x, y)
    };
    let big_n = population as f64;
    let g = contributions.len();

    let half_width = match (interval, kind) {
        (IntervalKind::LargeSample, _) if n == population => 0.0,
        (_, AggregateKind::Avg) if g < 2 => f64::INFINITY,
        (IntervalKind::LargeSample, AggregateKind::Count) => clt_or_inf(&totals().0, population, confidence)? * big_n,
        (IntervalKind::LargeSample, AggregateKind::Sum) => clt_or_inf(&totals().1, population, confidence)? * big_n,
        (IntervalKind::LargeSample, AggregateKind::Avg) => {
            let (x, y) = totals();
            // Linearised ratio estimator: residuals y - R x over the mean of x.
            let x_bar = x.iter().sum::<f64>() / n as f64;
            let residuals: Vec<f64> = x.iter().zip(&y).map(|(xi, yi)| yi - estimate * xi).collect();
            clt_or_inf(&residuals, population, confidence)? / x_bar
        }
        (IntervalKind::Conservative, AggregateKind::Count) => {
            hoeffding_half_width(0.0, bounds.fan_out, n, confidence)? * big_n
        }
        (IntervalKind::Conservative, AggregateKind::Sum) => {
            let (lo, hi) = bounds.value_range.unwrap_or((0.0, 0.0));
            let range = (bounds.fan_out * lo.min(0.0), bounds.fan_out * hi.max(0.0));
            hoeffding_half_width(range.0, range.1, n, confidence)? * big_n
        }
        (IntervalKind::Conservative, AggregateKind::Avg) => {
            let (lo, hi) = bounds.value_range.unwrap_or((0.0, 0.0));
            hoeffding_half_width(lo, hi, g, confidence)?
        }
    };

    Ok(GroupEstimate {
        kind,
        estimate,
        satisfaction,
        confidence,
        half_width,
        contributing: g,
        sample_size: n,
        population,
    })
}

fn clt_or_inf(observations: &[f64], population: usize, p: f64) -> Result<f64, EstimateError> {
    match large_sample_interval(observations, population, p) {
        Err(EstimateError::TooFewObservations(_)) => Ok(f64::INFINITY),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_t_norm() {
        assert_eq!(tuple_degree(&[0.8, 0.6], true), 0.6);
        assert_eq!(tuple_degree(&[], true), 1.0);
        assert_eq!(tuple_degree(&[0.9, 1.0], false), 0.0);
    }

    #[test]
    fn count_examples() {
        assert_eq!(estimate_count(&[1.0; 4], 10, 100).unwrap(), 40.0);
        assert_eq!(estimate_count(&[0.5, 0.5], 10, 100).unwrap(), 10.0);
        assert_eq!(estimate_count(&[1.0; 7], 7, 7).unwrap(), 7.0);
        assert_eq!(estimate_count(&[], 0, 100), Err(EstimateError::EmptySample));
    }

    #[test]
    fn sum_and_avg_examples() {
        let w = [(1.0, 10.0), (1.0, 20.0)];
        assert_eq!(estimate_avg(&w).unwrap(), 15.0);
        assert_eq!(estimate_sum(&w, 2, 2).unwrap(), 30.0);
        assert_eq!(estimate_sum(&w, 2, 20).unwrap(), 300.0);
        assert_eq!(estimate_avg(&[(0.0, 5.0)]), Err(EstimateError::ZeroSatisfaction));
        assert_eq!(estimate_avg(&[(0.25, 4.0), (0.75, 8.0)]).unwrap(), 7.0);
    }

    fn contrib(origin: usize, degree: f64, value: f64) -> Contribution {
        Contribution { origin, degree, value }
    }

    #[test]
    fn exhaustive_sample_is_exact_with_zero_width() {
        let cs = [contrib(0, 1.0, 3.0), contrib(1, 0.5, 5.0), contrib(3, 1.0, 1.0)];
        for kind in [AggregateKind::Count, AggregateKind::Sum, AggregateKind::Avg] {
            let e = estimate_aggregate(kind, &cs, 4, 4, 0.95, IntervalKind::LargeSample, IntervalBounds::default()).unwrap();
            assert_eq!(e.half_width, 0.0);
            let expect = match kind {
                AggregateKind::Count => 2.5,
                AggregateKind::Sum => 6.5,
                AggregateKind::Avg => 6.5 / 2.5,
            };
            assert_eq!(e.estimate, expect);
            assert_eq!(e.satisfaction, 2.5 / 3.0);
        }
    }

    #[test]
    fn small_avg_groups_are_unbounded() {
        let cs = [contrib(0, 1.0, 3.0)];
        let e = estimate_aggregate(AggregateKind::Avg, &cs, 5, 50, 0.95, IntervalKind::LargeSample, IntervalBounds::default()).unwrap();
        assert!(e.half_width.is_infinite());
    }

    #[test]
    fn conservative_count_scales_by_population() {
        let cs = [contrib(0, 1.0, 0.0)];
        let e = estimate_aggregate(AggregateKind::Count, &cs, 100, 1000, 0.95, IntervalKind::Conservative, IntervalBounds::default())
            .unwrap();
        assert!((e.half_width - 1000.0 * 0.135_810_178).abs() < 1e-3);
    }
}
