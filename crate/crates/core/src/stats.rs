//! Order statistics used to summarize repeated estimation runs.
//!
//! Quartiles follow the linear-interpolation convention (type 7): the
//! p-quantile of n sorted values sits at fractional rank `(n - 1) * p`.
//! Whiskers extend to the most extreme values within 1.5 IQR of the
//! quartiles; anything beyond is an outlier.

use alloc::vec::Vec;
use core::fmt;

/// Five-number boxplot summary with the IQR expressed relative to a
/// reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxplotStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// `100 * (q3 - q1) / reference`.
    pub iqr_pct: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    /// Values strictly outside the whiskers, in input order.
    pub outliers: Vec<f64>,
}

impl BoxplotStats {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsError {
    EmptyInput,
    /// The IQR reference must be positive and finite.
    NonPositiveReference,
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::EmptyInput => f.write_str("no values to summarize"),
            StatsError::NonPositiveReference => f.write_str("reference must be positive"),
        }
    }
}

/// Median by the same interpolation convention as the quartiles: for an
/// even count this is the mean of the two central values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let sorted = sorted_copy(values);
    Some(quantile_sorted(&sorted, 0.5))
}

/// Summarize `values` into a boxplot, with `iqr_pct` taken relative to
/// `reference`.
pub fn boxplot_stats(values: &[f64], reference: f64) -> Result<BoxplotStats, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    if !(reference > 0.0 && reference.is_finite()) {
        return Err(StatsError::NonPositiveReference);
    }

    let sorted = sorted_copy(values);
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;

    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;
    // Whiskers sit on actual data points inside the fences, never beyond
    // the data range.
    let whisker_lo = sorted
        .iter()
        .copied()
        .find(|x| *x >= lo_fence)
        .unwrap_or(sorted[0]);
    let whisker_hi = sorted
        .iter()
        .rev()
        .copied()
        .find(|x| *x <= hi_fence)
        .unwrap_or(sorted[sorted.len() - 1]);
    let outliers = values
        .iter()
        .copied()
        .filter(|x| *x < whisker_lo || *x > whisker_hi)
        .collect();

    Ok(BoxplotStats {
        median,
        q1,
        q3,
        iqr_pct: 100.0 * iqr / reference,
        whisker_lo,
        whisker_hi,
        outliers,
    })
}

fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted
}

/// Type-7 quantile of an already sorted slice.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let rank = (n - 1) as f64 * p;
    let lo = rank as usize;
    let frac = rank - lo as f64;
    if frac == 0.0 || lo + 1 == n {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn four_point_quartiles_interpolate() {
        let stats = boxplot_stats(&[4.0, 2.0, 1.0, 3.0], 1.0).unwrap();
        assert_eq!(stats.q1, 1.75);
        assert_eq!(stats.median, 2.5);
        assert_eq!(stats.q3, 3.25);
        assert_eq!(stats.iqr(), 1.5);
        assert_eq!(stats.iqr_pct, 150.0);
    }

    #[test]
    fn odd_count_median_is_central_value() {
        assert_eq!(median(&[5.0, 1.0, 3.0]), Some(3.0));
    }

    #[test]
    fn even_count_median_averages_central_pair() {
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]), Some(2.5));
    }

    #[test]
    fn single_value_collapses() {
        let stats = boxplot_stats(&[7.0], 7.0).unwrap();
        assert_eq!(stats.median, 7.0);
        assert_eq!(stats.q1, 7.0);
        assert_eq!(stats.q3, 7.0);
        assert_eq!(stats.iqr_pct, 0.0);
        assert_eq!(stats.whisker_lo, 7.0);
        assert_eq!(stats.whisker_hi, 7.0);
        assert!(stats.outliers.is_empty());
    }

    #[test]
    fn far_point_is_outlier_and_whisker_stays_on_data() {
        let values = [1.0, 2.0, 3.0, 4.0, 100.0];
        let stats = boxplot_stats(&values, 1.0).unwrap();
        // q1 = 2, q3 = 4, fence = 4 + 1.5 * 2 = 7; 100 lies beyond it.
        assert_eq!(stats.outliers, vec![100.0]);
        assert_eq!(stats.whisker_hi, 4.0);
        assert_eq!(stats.whisker_lo, 1.0);
    }

    #[test]
    fn no_outliers_means_whiskers_span_data() {
        let values = [1.0, 2.0, 3.0, 4.0, 5.0];
        let stats = boxplot_stats(&values, 1.0).unwrap();
        assert_eq!(stats.whisker_lo, 1.0);
        assert_eq!(stats.whisker_hi, 5.0);
        assert!(stats.outliers.is_empty());
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(boxplot_stats(&[], 1.0), Err(StatsError::EmptyInput));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn nonpositive_reference_is_rejected() {
        assert_eq!(
            boxplot_stats(&[1.0], 0.0),
            Err(StatsError::NonPositiveReference)
        );
        assert_eq!(
            boxplot_stats(&[1.0], -2.0),
            Err(StatsError::NonPositiveReference)
        );
    }

    #[test]
    fn median_is_order_invariant() {
        let a = [0.9, 1.1, 1.0, 1.2, 0.8];
        let b = [1.2, 0.8, 1.1, 0.9, 1.0];
        assert_eq!(median(&a), median(&b));
        assert_eq!(median(&a), Some(1.0));
    }
}
