use alloc::string::String;
use core::fmt;

use super::ast::FlexibleQuery;

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalKind {
    /// Hoeffding bound; holds for any bounded data.
    Conservative,
    /// CLT bound with finite-population correction.
    #[default]
    LargeSample,
}

impl IntervalKind {
    pub fn function_name(self) -> &'static str {
        match self {
            IntervalKind::Conservative => "ConservativeInterval",
            IntervalKind::LargeSample => "LargeSampleInterval",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RewriteError {
    #[error("confidence {0} must lie strictly between 0 and 1")]
    InvalidConfidence(f64),
    #[error("sample fraction {0} must lie in (0, 1]")]
    InvalidSampleFraction(f64),
}

/// A flexible query wrapped with the parameters of its approximate answer.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximateQuery {
    base: FlexibleQuery,
    confidence: f64,
    interval: IntervalKind,
    sample_fraction: f64,
}

impl ApproximateQuery {
    pub fn base(&self) -> &FlexibleQuery {
        &self.base
    }

    pub fn confidence(&self) -> f64 {
        self.confidence
    }

    pub fn interval(&self) -> IntervalKind {
        self.interval
    }

    pub fn sample_fraction(&self) -> f64 {
        self.sample_fraction
    }

    /// The wrapped query in plain dialect, parseable back to [`Self::base`].
    pub fn base_text(&self) -> String {
        alloc::format!("{}", self.base)
    }
}

impl fmt::Display for ApproximateQuery {
    /// `SELECT aggs, p As Confidence, IntervalFn(p) FROM ... SAMPLE f`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        self.base.fmt_select_list(f)?;
        write!(
            f,
            ", {} As Confidence, {}({})",
            self.confidence,
            self.interval.function_name(),
            self.confidence
        )?;
        self.base.fmt_from_onwards(f)?;
        write!(f, " SAMPLE {}", self.sample_fraction)
    }
}

/// Wraps a validated query. Validation is the caller's job; see
/// [`super::validate`].
pub fn rewrite_to_approximate(
    q: FlexibleQuery,
    confidence: f64,
    interval: IntervalKind,
    sample_fraction: f64,
) -> Result<ApproximateQuery, RewriteError> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(RewriteError::InvalidConfidence(confidence));
    }
    if !(sample_fraction > 0.0 && sample_fraction <= 1.0) {
        return Err(RewriteError::InvalidSampleFraction(sample_fraction));
    }
    Ok(ApproximateQuery { base: q, confidence, interval, sample_fraction })
}
