use super::normal::two_sided_z;
use super::EstimateError;

fn check_confidence(p: f64) -> Result<(), EstimateError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(EstimateError::InvalidConfidence(p))
    }
}

/// Hoeffding half-width for the mean of `n` observations in `[lo, hi]`:
/// `(hi - lo) * sqrt(ln(2 / (1 - p)) / (2 n))`.
pub fn hoeffding_half_width(lo: f64, hi: f64, n: usize, p: f64) -> Result<f64, EstimateError> {
    check_confidence(p)?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(EstimateError::InvalidRange { lo, hi });
    }
    if n == 0 {
        return Err(EstimateError::EmptySample);
    }
    Ok((hi - lo) * libm::sqrt(libm::log(2.0 / (1.0 - p)) / (2.0 * n as f64)))
}

/// Conservative half-width for the mean of `observations`, all of which must
/// lie in `range`. Totals (COUNT, SUM) scale this by the population size.
pub fn conservative_interval(observations: &[f64], range: (f64, f64), p: f64) -> Result<f64, EstimateError> {
    let (lo, hi) = range;
    if observations.iter().any(|&x| !(lo <= x && x <= hi)) {
        return Err(EstimateError::InvalidRange { lo, hi });
    }
    hoeffding_half_width(lo, hi, observations.len(), p)
}

/// CLT half-width for the mean of a sample drawn without replacement from a
/// population of `population`:
/// `z_{(1+p)/2} * s / sqrt(n) * sqrt((N - n) / (N - 1))`.
pub fn large_sample_interval(observations: &[f64], population: usize, p: f64) -> Result<f64, EstimateError> {
    check_confidence(p)?;
    let n = observations.len();
    if n < 2 {
        return Err(EstimateError::TooFewObservations(n));
    }
    if n > population {
        return Err(EstimateError::SampleExceedsPopulation { sample: n, population });
    }
    let nf = n as f64;
    let mean = observations.iter().sum::<f64>() / nf;
    let var = observations.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    let fpc = libm::sqrt((population - n) as f64 / (population - 1) as f64);
    Ok(two_sided_z(p) * libm::sqrt(var) / libm::sqrt(nf) * fpc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hoeffding_reference_value() {
        // sqrt(ln(40) / 200), evaluated independently: ln 40 = 3.6888794541139363.
        let expect = (3.688_879_454_113_936_3_f64 / 200.0).sqrt();
        let hw = hoeffding_half_width(0.0, 1.0, 100, 0.95).unwrap();
        assert!((hw - 0.13581).abs() < 1e-5);
        assert!((hw - expect).abs() < 1e-15);
    }

    #[test]
    fn quadrupling_n_halves_the_width() {
        let a = hoeffding_half_width(0.0, 1.0, 100, 0.95).unwrap();
        let b = hoeffding_half_width(0.0, 1.0, 400, 0.95).unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_range_is_zero() {
        assert_eq!(hoeffding_half_width(3.0, 3.0, 10, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn conservative_errors() {
        assert_eq!(hoeffding_half_width(1.0, 0.0, 10, 0.9), Err(EstimateError::InvalidRange { lo: 1.0, hi: 0.0 }));
        assert!(matches!(conservative_interval(&[0.5, 2.0], (0.0, 1.0), 0.9), Err(EstimateError::InvalidRange { .. })));
        assert_eq!(conservative_interval(&[], (0.0, 1.0), 0.9), Err(EstimateError::EmptySample));
        assert!(matches!(hoeffding_half_width(0.0, 1.0, 1, 1.0), Err(EstimateError::InvalidConfidence(_))));
    }

    #[test]
    fn exhaustive_sample_has_zero_width() {
        let obs = [1.0, 4.0, 2.0, 8.0];
        assert_eq!(large_sample_interval(&obs, 4, 0.95).unwrap(), 0.0);
    }

    #[test]
    fn constant_observations_have_zero_width() {
        assert_eq!(large_sample_interval(&[2.5; 10], 1000, 0.95).unwrap(), 0.0);
    }

    #[test]
    fn clt_reference_value() {
        // s = sqrt(((0-.5)^2*2 + (1-.5)^2*2) / 3) = sqrt(1/3); fpc = sqrt(6/9).
        let hw = large_sample_interval(&[0.0, 1.0, 0.0, 1.0], 10, 0.95).unwrap();
        let expect = 1.959963984540054 * (1.0f64 / 3.0).sqrt() / 2.0 * (6.0f64 / 9.0).sqrt();
        assert!((hw - expect).abs() < 1e-7);
    }

    #[test]
    fn clt_errors() {
        assert_eq!(large_sample_interval(&[1.0], 10, 0.9), Err(EstimateError::TooFewObservations(1)));
        assert!(matches!(large_sample_interval(&[1.0, 2.0, 3.0], 2, 0.9), Err(EstimateError::SampleExceedsPopulation { .. })));
    }
}
