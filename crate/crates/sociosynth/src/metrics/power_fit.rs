//! Power-law tail fit of a degree histogram: unweighted least squares on
//! (log k, log count) over the bins strictly above the histogram mode,
//! zero-count bins dropped. The exponent is the absolute slope.

use thiserror::Error;

use super::DegreeHistogram;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("power tail fit needs at least 3 nonzero bins beyond the mode, found {available}")]
    TooFewBins { available: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerFit {
    /// Absolute slope of the log-log line.
    pub exponent: f64,
    /// Degree range `[k_min, k_max]` the line was fitted on.
    pub fit_range: (u32, u32),
    /// Coefficient of determination of the log-log regression.
    pub r_squared: f64,
}

/// Fit the descending tail of an integer-count histogram.
pub fn fit_power_tail(histogram: &DegreeHistogram) -> Result<PowerFit, FitError> {
    let points: Vec<(u32, f64)> = histogram
        .counts()
        .iter()
        .map(|(&degree, &count)| (degree, count as f64))
        .collect();
    fit_power_tail_averaged(&points)
}

/// Same fit over fractional counts (for run-averaged histograms).
/// `points` must be sorted by degree.
pub fn fit_power_tail_averaged(points: &[(u32, f64)]) -> Result<PowerFit, FitError> {
    let mode = points
        .iter()
        .filter(|(_, count)| *count > 0.0)
        .fold(None::<(u32, f64)>, |best, &(degree, count)| match best {
            Some((_, best_count)) if best_count >= count => best,
            _ => Some((degree, count)),
        })
        .map(|(degree, _)| degree)
        .unwrap_or(0);
    let tail: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(degree, count)| degree > mode && count > 0.0)
        .map(|&(degree, count)| ((degree as f64).ln(), count.ln()))
        .collect();
    if tail.len() < 3 {
        return Err(FitError::TooFewBins {
            available: tail.len(),
        });
    }

    let n = tail.len() as f64;
    let mean_x = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = tail.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = tail.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let ss_tot: f64 = tail.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = tail
        .iter()
        .map(|p| {
            let predicted = mean_y + slope * (p.0 - mean_x);
            (p.1 - predicted).powi(2)
        })
        .sum();
    // ss_tot of constant data is pure rounding noise; call it a perfect fit.
    let r_squared = if ss_tot < 1e-20 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).max(0.0)
    };

    let k_min = points
        .iter()
        .find(|&&(degree, count)| degree > mode && count > 0.0)
        .map(|&(degree, _)| degree)
        .expect("tail is non-empty");
    let k_max = points
        .iter()
        .rev()
        .find(|&&(degree, count)| degree > mode && count > 0.0)
        .map(|&(degree, _)| degree)
        .expect("tail is non-empty");
    Ok(PowerFit {
        exponent: -slope,
        fit_range: (k_min, k_max),
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn histogram_of(counts: impl IntoIterator<Item = (u32, u64)>) -> DegreeHistogram {
        DegreeHistogram::from_counts(counts.into_iter().collect::<BTreeMap<_, _>>())
    }

    #[test]
    fn recovers_cubic_decay_from_rounded_counts() {
        // c(k) = round(10^6 · k^−3) for k = 2..=50; mode sits at k = 2.
        let hist = histogram_of((2..=50).map(|k| {
            let c = (1e6 * (k as f64).powi(-3)).round() as u64;
            (k, c)
        }));
        let fit = fit_power_tail(&hist).unwrap();
        assert!(
            (fit.exponent - 3.0).abs() <= 0.05,
            "exponent {}",
            fit.exponent
        );
        assert_eq!(fit.fit_range.0, 3);
        assert_eq!(fit.fit_range.1, 50);
        assert!(fit.r_squared > 0.99);
    }

    #[test]
    fn flat_counts_fit_zero_slope() {
        let hist = histogram_of((1..=10).map(|k| (k, 100)));
        let fit = fit_power_tail(&hist).unwrap();
        assert!(fit.exponent.abs() <= 0.01, "exponent {}", fit.exponent);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    /// Exactly proportional tails recover γ within 0.05 for each target.
    #[test]
    fn recovers_known_exponents_exactly() {
        for gamma in [2.0, 3.0, 5.0, 8.0] {
            let points: Vec<(u32, f64)> = (1..=40)
                .map(|k| (k, 1e9 * (k as f64).powf(-gamma)))
                .collect();
            let fit = fit_power_tail_averaged(&points).unwrap();
            assert!(
                (fit.exponent - gamma).abs() <= 0.05,
                "gamma {gamma}: fitted {}",
                fit.exponent
            );
            assert!(fit.r_squared > 0.999999);
            assert_eq!(fit.fit_range, (2, 40));
        }
    }

    #[test]
    fn too_few_tail_bins_is_signaled() {
        let hist = histogram_of([(2, 100), (3, 10), (4, 1)]);
        assert_eq!(
            fit_power_tail(&hist),
            Err(FitError::TooFewBins { available: 2 })
        );
        let empty = histogram_of([]);
        assert!(matches!(
            fit_power_tail(&empty),
            Err(FitError::TooFewBins { available: 0 })
        ));
    }

    #[test]
    fn zero_count_bins_are_dropped() {
        let mut counts: Vec<(u32, u64)> = (2..=30)
            .map(|k| (k, (1e6 * (k as f64).powi(-2)).round() as u64))
            .collect();
        counts.push((31, 0));
        counts.push((40, 0));
        let hist = histogram_of(counts);
        let fit = fit_power_tail(&hist).unwrap();
        assert!((fit.exponent - 2.0).abs() <= 0.05);
        assert!(fit.fit_range.1 <= 30);
    }
}
