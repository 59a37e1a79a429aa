use statrs::distribution::{Beta, ContinuousCDF};
use statrs::statistics::{Data, Median};

use crate::error::{Error, Result};

/// Exact (Clopper–Pearson) two-sided interval for a Binomial proportion.
pub fn clopper_pearson(successes: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::InvalidParameter(format!(
            "{successes} successes out of {trials} trials"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!("confidence level {level}")));
    }
    let alpha = 1.0 - level;
    let (k, n) = (successes as f64, trials as f64);
    let beta = |a: f64, b: f64| Beta::new(a, b).map_err(|e| Error::InvalidParameter(e.to_string()));
    let lower = if successes == 0 {
        0.0
    } else {
        beta(k, n - k + 1.0)?.inverse_cdf(alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        beta(k + 1.0, n - k)?.inverse_cdf(1.0 - alpha / 2.0)
    };
    Ok((lower, upper))
}

/// Standard error of a proportion `p` estimated from `n` draws.
pub fn binomial_std_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn median(values: &[f64]) -> f64 {
    Data::new(values.to_vec()).median()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn clopper_pearson_reference_values() {
        // reference values from the Beta quantile form computed independently
        let (lo, hi) = clopper_pearson(5, 10, 0.95).unwrap();
        assert_abs_diff_eq!(lo, 0.187_086_028_447_398_9, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 0.812_913_971_552_601_1, epsilon = 1e-9);
        let (lo, hi) = clopper_pearson(0, 20, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert_abs_diff_eq!(hi, 1.0 - 0.025f64.powf(1.0 / 20.0), epsilon = 1e-9);
        let (lo, hi) = clopper_pearson(20, 20, 0.95).unwrap();
        assert_abs_diff_eq!(lo, 0.025f64.powf(1.0 / 20.0), epsilon = 1e-9);
        assert_eq!(hi, 1.0);
        assert!(clopper_pearson(3, 2, 0.95).is_err());
    }

    #[test]
    fn summaries() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(mean(&[1.0, 2.0, 6.0]), 3.0);
        assert_abs_diff_eq!(binomial_std_error(0.5, 100), 0.05);
    }
}
