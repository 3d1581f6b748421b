use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{KbError, TrapezoidalTerm};

const MAX_ITERATIONS: usize = 50;

/// Summary of one 1-D cluster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
    pub len: usize,
}

impl Cluster {
    fn from_sorted(values: &[f64]) -> Self {
        let len = values.len();
        let mean = values.iter().sum::<f64>() / len as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / len as f64;
        Self {
            min: values[0],
            max: values[len - 1],
            mean: mean.clamp(values[0], values[len - 1]),
            std_dev: libm::sqrt(var),
            len,
        }
    }
}

fn sorted_checked(values: &[f64], k: usize) -> Result<(Vec<f64>, Vec<f64>), KbError> {
    if k == 0 {
        return Err(KbError::ZeroTerms);
    }
    if values.is_empty() {
        return Err(KbError::EmptyValues);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(KbError::NonFinite(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();
    if distinct.len() < k {
        return Err(KbError::InsufficientDistinctValues { distinct: distinct.len(), k });
    }
    Ok((sorted, distinct))
}

/// Nearest centroid, ties to the lower index. `centroids` must be sorted.
fn nearest(centroids: &[f64], v: f64) -> usize {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (j, &c) in centroids.iter().enumerate() {
        let d = libm::fabs(v - c);
        if d < best_dist {
            best = j;
            best_dist = d;
        }
    }
    best
}

fn quantile_init(sorted: &[f64], distinct: &[f64], k: usize) -> Vec<f64> {
    let pick = |data: &[f64]| -> Vec<f64> {
        (0..k)
            .map(|j| {
                let idx = ((j as f64 + 0.5) / k as f64 * data.len() as f64) as usize;
                data[idx.min(data.len() - 1)]
            })
            .collect()
    };
    let centroids = pick(sorted);
    if centroids.windows(2).all(|w| w[0] < w[1]) {
        centroids
    } else {
        pick(distinct)
    }
}

/// Seeded 1-D k-means with quantile initialisation.
///
/// Returns `k` non-empty clusters sorted by position; each cluster is a
/// contiguous run of the sorted input. The seed only drives re-seeding of
/// clusters that lose all their points.
pub fn kmeans_1d(values: &[f64], k: usize, seed: u64) -> Result<Vec<Cluster>, KbError> {
    let (sorted, distinct) = sorted_checked(values, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = quantile_init(&sorted, &distinct, k);
    let mut labels: Vec<usize> = Vec::new();

    for _ in 0..MAX_ITERATIONS {
        let next: Vec<usize> = sorted.iter().map(|&v| nearest(&centroids, v)).collect();
        if next == labels {
            break;
        }
        labels = next;

        let mut sums = alloc::vec![0.0; k];
        let mut counts = alloc::vec![0usize; k];
        for (&v, &l) in sorted.iter().zip(&labels) {
            sums[l] += v;
            counts[l] += 1;
        }
        for j in 0..k {
            if counts[j] > 0 {
                centroids[j] = sums[j] / counts[j] as f64;
            }
        }
        for j in 0..k {
            if counts[j] == 0 {
                let free: Vec<f64> = distinct.iter().copied().filter(|v| !centroids.contains(v)).collect();
                if !free.is_empty() {
                    centroids[j] = free[rng.random_range(0..free.len())];
                }
            }
        }
        centroids.sort_by(f64::total_cmp);
    }

    let labels: Vec<usize> = sorted.iter().map(|&v| nearest(&centroids, v)).collect();
    let mut ranges: Vec<(usize, usize)> = Vec::with_capacity(k);
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || labels[i] != labels[start] {
            ranges.push((start, i));
            start = i;
        }
    }
    // Too few runs means some centroid attracted nothing; split the widest
    // internal gaps until there are k runs.
    while ranges.len() < k {
        let mut best: Option<(usize, usize, f64)> = None;
        for (r, &(s, e)) in ranges.iter().enumerate() {
            for i in s + 1..e {
                let gap = sorted[i] - sorted[i - 1];
                if gap > 0.0 && best.is_none_or(|(_, _, g)| gap > g) {
                    best = Some((r, i, gap));
                }
            }
        }
        let (r, split, _) = best.expect("distinct count >= k guarantees a split point");
        let (s, e) = ranges[r];
        ranges[r] = (s, split);
        ranges.insert(r + 1, (split, e));
    }
    Ok(ranges.iter().map(|&(s, e)| Cluster::from_sorted(&sorted[s..e])).collect())
}

/// Conventional names for `k` ordered terms.
pub fn default_term_names(k: usize) -> Vec<String> {
    let names: &[&str] = match k {
        1 => &["any"],
        2 => &["low", "high"],
        3 => &["low", "medium", "high"],
        4 => &["very_low", "low", "high", "very_high"],
        5 => &["very_low", "low", "medium", "high", "very_high"],
        _ => &[],
    };
    if names.is_empty() {
        (0..k).map(|i| alloc::format!("c{i}")).collect()
    } else {
        names.iter().map(|s| String::from(*s)).collect()
    }
}

/// Partitions a column's values into `k` trapezoidal terms.
///
/// Plateaus are `mean ± std_dev` clipped to each cluster's range. Inner ramps
/// run to the neighbouring plateau edge, so adjacent supports overlap. The
/// outermost ramps run past the observed min/max by
/// `max(ulp-scale, 1% of span)` so that the extremes keep positive degree.
pub fn build_partition(values: &[f64], k: usize, seed: u64) -> Result<Vec<TrapezoidalTerm>, KbError> {
    let clusters = kmeans_1d(values, k, seed)?;
    let lo = clusters[0].min;
    let hi = clusters[k - 1].max;
    let scale = 1.0f64.max(libm::fabs(lo)).max(libm::fabs(hi));
    let margin = (f64::EPSILON * scale).max(0.01 * (hi - lo));

    let plateaus: Vec<(f64, f64)> = clusters
        .iter()
        .map(|c| ((c.mean - c.std_dev).max(c.min), (c.mean + c.std_dev).min(c.max)))
        .collect();
    let names = default_term_names(k);
    (0..k)
        .map(|i| {
            let (b, c) = plateaus[i];
            let a = if i == 0 { lo - margin } else { plateaus[i - 1].1 };
            let d = if i + 1 == k { hi + margin } else { plateaus[i + 1].0 };
            TrapezoidalTerm::new(names[i].clone(), a, b, c, d)
        })
        .collect()
}

/// SHA-256 over labelled columns of values, hex encoded.
pub fn fingerprint<'a>(columns: impl IntoIterator<Item = (&'a str, &'a [f64])>) -> String {
    let mut hasher = Sha256::new();
    for (label, values) in columns {
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        hasher.update((values.len() as u64).to_le_bytes());
        for v in values {
            hasher.update(v.to_bits().to_le_bytes());
        }
    }
    alloc::format!("sha256:{}", hex::encode(hasher.finalize()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Optimal 1-D k-partition by exhaustive search over split points.
    fn brute_force_partition(values: &[f64], k: usize) -> Vec<Vec<f64>> {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let sse = |s: &[f64]| {
            let m = s.iter().sum::<f64>() / s.len() as f64;
            s.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
        };
        fn splits(n: usize, k: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if acc.len() + 1 == k {
                out.push(acc.clone());
                return;
            }
            for s in from..n {
                acc.push(s);
                splits(n, k, s + 1, acc, out);
                acc.pop();
            }
        }
        let mut all = Vec::new();
        splits(sorted.len(), k, 1, &mut Vec::new(), &mut all);
        let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
        for cut in all {
            let mut parts = Vec::new();
            let mut prev = 0;
            for &c in cut.iter().chain(core::iter::once(&sorted.len())) {
                parts.push(sorted[prev..c].to_vec());
                prev = c;
            }
            let cost: f64 = parts.iter().map(|p| sse(p)).sum();
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, parts));
            }
        }
        best.unwrap().1
    }

    #[test]
    fn two_clusters_match_brute_force_oracle() {
        let values = [1.0, 2.0, 3.0, 100.0, 101.0, 102.0];
        let oracle = brute_force_partition(&values, 2);
        let clusters = kmeans_1d(&values, 2, 7).unwrap();
        assert_eq!(clusters.len(), 2);
        for (c, o) in clusters.iter().zip(&oracle) {
            assert_eq!(c.len, o.len());
            assert_eq!(c.min, o[0]);
            assert_eq!(c.max, o[o.len() - 1]);
        }

        // Trapezoids derived by hand from the oracle clusters {1,2,3} and
        // {100,101,102}: std = sqrt(2/3), margin = 1% of span 101.
        let s = libm::sqrt(2.0 / 3.0);
        let terms = build_partition(&values, 2, 7).unwrap();
        let expect = [
            [1.0 - 1.01, 2.0 - s, 2.0 + s, 101.0 - s],
            [2.0 + s, 101.0 - s, 101.0 + s, 102.0 + 1.01],
        ];
        for (t, e) in terms.iter().zip(&expect) {
            for (x, y) in t.breakpoints().iter().zip(e) {
                assert!((x - y).abs() < 1e-12, "{:?} vs {:?}", t.breakpoints(), e);
            }
        }
        assert!(terms[0].membership(2.0) == 1.0 && terms[0].membership(101.0) == 0.0);
        assert!(terms[1].membership(101.0) == 1.0 && terms[1].membership(2.0) == 0.0);
    }

    #[test]
    fn single_repeated_value() {
        let terms = build_partition(&[5.0, 5.0, 5.0], 1, 0).unwrap();
        assert_eq!(terms.len(), 1);
        let [a, b, c, d] = terms[0].breakpoints();
        assert!(b <= 5.0 && 5.0 <= c);
        assert!(a < 5.0 && d > 5.0);
        assert_eq!(terms[0].membership(5.0), 1.0);
    }

    #[test]
    fn uniform_three_terms_overlap_and_cover() {
        let values: Vec<f64> = (1..=1000).map(f64::from).collect();
        let terms = build_partition(&values, 3, 1).unwrap();
        assert_eq!(terms.len(), 3);
        for w in terms.windows(2) {
            let [_, b0, _, d0] = w[0].breakpoints();
            let [a1, b1, _, _] = w[1].breakpoints();
            assert!(b0 <= b1);
            assert!(a1 < d0, "adjacent supports must overlap");
        }
        for v in &values {
            assert!(terms.iter().any(|t| t.membership(*v) > 0.0), "{v} uncovered");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            build_partition(&[1.0, 1.0, 2.0], 3, 0),
            Err(KbError::InsufficientDistinctValues { distinct: 2, k: 3 })
        );
        assert_eq!(build_partition(&[], 1, 0), Err(KbError::EmptyValues));
        assert_eq!(build_partition(&[1.0], 0, 0), Err(KbError::ZeroTerms));
        assert!(matches!(build_partition(&[1.0, f64::NAN], 1, 0), Err(KbError::NonFinite(_))));
    }

    #[test]
    fn k_equal_to_distinct_count_gives_singleton_clusters() {
        let clusters = kmeans_1d(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 50.0], 3, 3).unwrap();
        assert_eq!(clusters.len(), 3);
        assert_eq!(clusters.iter().map(|c| c.len).collect::<Vec<_>>(), vec![5, 1, 1]);
    }

    #[test]
    fn fingerprint_depends_on_labels_and_values() {
        let a = fingerprint([("t.x", &[1.0, 2.0][..])]);
        assert!(a.starts_with("sha256:") && a.len() == 7 + 64);
        assert_ne!(a, fingerprint([("t.y", &[1.0, 2.0][..])]));
        assert_ne!(a, fingerprint([("t.x", &[2.0, 1.0][..])]));
        assert_eq!(a, fingerprint([("t.x", &[1.0, 2.0][..])]));
    }
}
