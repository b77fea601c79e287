//! Summary statistics for benchmark reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("insufficient sample: {0}")]
    InsufficientSample(&'static str),
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (n - 1 denominator); zero for fewer than two values.
/// Constant samples give exactly zero rather than summation noise.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 || xs.iter().all(|&x| x == xs[0]) {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

pub fn std_dev(xs: &[f64]) -> f64 {
    variance(xs).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WelchT {
    pub t: f64,
    pub df: f64,
}

/// Welch's unequal-variance t statistic for `a` minus `b`, with
/// Welch–Satterthwaite degrees of freedom.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<WelchT, StatsError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(StatsError::InsufficientSample(
            "each sample needs at least 2 values",
        ));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (va, vb) = (variance(a) / na, variance(b) / nb);
    let se2 = va + vb;
    if se2 <= 0.0 {
        return Err(StatsError::InsufficientSample(
            "both samples have zero variance",
        ));
    }
    let t = (mean(a) - mean(b)) / se2.sqrt();
    let df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    Ok(WelchT { t, df })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_give_zero() {
        let a = [1.0, 2.0, 4.0];
        assert_eq!(welch_t(&a, &a).unwrap().t, 0.0);
    }

    #[test]
    fn zero_variance_is_reported() {
        assert!(matches!(
            welch_t(&[1.0; 4], &[2.0; 4]),
            Err(StatsError::InsufficientSample(_))
        ));
        assert!(welch_t(&[1.0], &[2.0, 3.0]).is_err());
    }

    #[test]
    fn hand_computed_example() {
        // means 2 and 5, variances 1, n = 3: t = -3 / sqrt(2/3)
        let w = welch_t(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((w.t + 3.674_234_614_174_767).abs() < 1e-12, "{}", w.t);
        assert!((w.df - 4.0).abs() < 1e-12);
        let swapped = welch_t(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(swapped.t, -w.t);
    }

    #[test]
    fn sample_sd() {
        assert!(
            (std_dev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]) - 2.138_089_935_299_395).abs()
                < 1e-12
        );
        assert_eq!(std_dev(&[3.0]), 0.0);
        assert_eq!(std_dev(&[1.7; 100]), 0.0);
    }
}
