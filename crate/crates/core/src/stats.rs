//! Descriptive statistics and Pearson correlation kernels.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn mean<T: Scalar>(xs: &[T]) -> Result<T> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(xs.iter().copied().sum::<T>() / T::of_usize(xs.len()))
}

/// Middle value of the sorted data, or the mean of the two middle values
/// when the count is even.
pub fn median<T: Scalar>(xs: &[T]) -> Result<T> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        Ok(sorted[mid])
    } else {
        Ok((sorted[mid - 1] + sorted[mid]) / T::of(2.0))
    }
}

/// Sample standard deviation with `n - 1` degrees of freedom.
pub fn sample_stddev<T: Scalar>(xs: &[T]) -> Result<T> {
    if xs.len() < 2 {
        return Err(Error::TooFewValues {
            found: xs.len(),
            required: 2,
        });
    }
    if is_constant(xs) {
        return Ok(T::zero());
    }
    let m = mean(xs)?;
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    Ok((ss / T::of_usize(xs.len() - 1)).sqrt())
}

fn is_constant<T: Scalar>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Mean, median and sample standard deviation of one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats<T> {
    pub mean: T,
    pub median: T,
    /// `None` for a single observation.
    pub stddev: Option<T>,
    pub count: usize,
}

impl<T: Scalar> SampleStats<T> {
    pub fn from_slice(xs: &[T]) -> Result<Self> {
        Ok(SampleStats {
            mean: mean(xs)?,
            median: median(xs)?,
            stddev: if xs.len() >= 2 { Some(sample_stddev(xs)?) } else { None },
            count: xs.len(),
        })
    }
}

/// How the lagged correlation centres the shifted series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LagMode {
    /// Ordinary Pearson correlation of the overlapping window; means and sums
    /// are taken over the aligned pairs only.
    #[default]
    Windowed,
    /// Sums run over the overlapping window but deviations are measured from
    /// the means of the full, unshifted series.
    FullSeriesMeans,
}

/// Pearson product-moment correlation, clamped to `[-1, 1]`.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    pearson_named(x, y, "x", "y")
}

pub(crate) fn pearson_named<T: Scalar>(x: &[T], y: &[T], x_name: &str, y_name: &str) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewValues {
            found: x.len(),
            required: 2,
        });
    }
    for (xs, name) in [(x, x_name), (y, y_name)] {
        if is_constant(xs) {
            return Err(Error::ZeroVariance(name.to_string()));
        }
    }
    let (mx, my) = (mean(x)?, mean(y)?);
    centered_correlation(x.iter().copied().zip(y.iter().copied()), mx, my, x_name, y_name)
}

fn centered_correlation<T: Scalar>(
    pairs: impl Iterator<Item = (T, T)>,
    mx: T,
    my: T,
    x_name: &str,
    y_name: &str,
) -> Result<T> {
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (a, b) in pairs {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() {
        return Err(Error::ZeroVariance(x_name.to_string()));
    }
    if syy == T::zero() {
        return Err(Error::ZeroVariance(y_name.to_string()));
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.max(-T::one()).min(T::one()))
}

/// Correlation of `target[i]` with `indicator[i - lag]` over `i = lag..n`,
/// i.e. how well the indicator `lag` days earlier tracks the target today.
pub fn lagged_pearson<T: Scalar>(target: &[T], indicator: &[T], lag: usize, mode: LagMode) -> Result<T> {
    let n = target.len();
    if indicator.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: indicator.len(),
        });
    }
    if lag + 2 > n {
        return Err(Error::LagTooLarge { lag, len: n });
    }
    let x = &target[lag..];
    let y = &indicator[..n - lag];
    match mode {
        LagMode::Windowed => pearson_named(x, y, "target window", "indicator window"),
        LagMode::FullSeriesMeans => {
            let (mx, my) = (mean(target)?, mean(indicator)?);
            centered_correlation(
                x.iter().copied().zip(y.iter().copied()),
                mx,
                my,
                "target window",
                "indicator window",
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const OUTLIERS: [f64; 11] = [1., 2., 3., 4., 6., 18., 22., 92., 100., 201., 300.];

    #[test]
    fn mean_examples() {
        assert!((mean(&OUTLIERS).unwrap() - (68.0 + 1.0 / 11.0)).abs() < 1e-12);
        assert_eq!(mean(&[5.0]).unwrap(), 5.0);
        assert_eq!(mean(&[-1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(mean::<f64>(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn median_examples() {
        assert_eq!(median(&OUTLIERS).unwrap(), 18.0);
        assert_eq!(median(&[7.0]).unwrap(), 7.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]).unwrap(), 2.5);
        assert_eq!(median::<f64>(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn stddev_examples() {
        assert_eq!(sample_stddev(&[4.0, 4.0, 4.0]).unwrap(), 0.0);
        assert_eq!(sample_stddev(&[1.0, 2.0, 3.0]).unwrap(), 1.0);
        // sum of squared deviations 32 over 7 degrees of freedom
        let s = sample_stddev(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-15);
        assert!((s - 2.1381).abs() < 1e-4);
        assert!(matches!(sample_stddev(&[1.0]), Err(Error::TooFewValues { .. })));
        assert_eq!(sample_stddev(&[0.1f64; 7]).unwrap(), 0.0);
    }

    #[test]
    fn sample_stats_single_value() {
        let s = SampleStats::from_slice(&[0.4]).unwrap();
        assert_eq!((s.mean, s.median, s.stddev, s.count), (0.4, 0.4, None, 1));
    }

    #[test]
    fn pearson_examples() {
        let x: [f64; 5] = [1.0, 11.0, 15.0, 20.0, 30.0];
        let y = [2.0, 9.0, 13.0, 17.0, 22.0];
        // brute-force value for this table
        assert!((pearson(&x, &y).unwrap() - 0.993_441_178_317_775_1).abs() < 1e-12);
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[-1.0, -2.0, -3.0]).unwrap(), -1.0);
        // a table with a weak negative relationship
        let y1: [f64; 5] = [1.0, 13.0, 14.0, 22.0, 27.0];
        let y2 = [15.0, 13.0, 17.0, 14.0, 12.0];
        assert!((pearson(&y1, &y2).unwrap() + 0.516_486_066_156_728).abs() < 1e-12);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVariance(_))
        ));
        assert!(matches!(pearson(&[1.0], &[1.0]), Err(Error::TooFewValues { .. })));
    }

    const A: [f64; 6] = [2., 5., 11., 15., 17., 24.];
    const B: [f64; 6] = [2., 3., 9., 14., 15., 18.];
    const C: [f64; 6] = [9., 13., 14., 16., 22., 17.];

    #[test]
    fn lagged_examples() {
        let ab = lagged_pearson(&A, &B, 1, LagMode::Windowed).unwrap();
        let ac = lagged_pearson(&A, &C, 1, LagMode::Windowed).unwrap();
        assert!((ab - 0.922).abs() < 5e-4, "{ab}");
        assert!((ac - 0.9845).abs() < 5e-4, "{ac}");

        let x: [f64; 7] = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0, 3.0];
        let y = [0.0, 0.0, 1.0, 4.0, 2.0, 8.0, 5.0];
        // the target repeats the indicator two days later
        assert!((lagged_pearson(&y, &x, 2, LagMode::Windowed).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_series_means_mode() {
        // deviations from the means of the whole series, summed over the window
        let ab = lagged_pearson(&A, &B, 1, LagMode::FullSeriesMeans).unwrap();
        let ac = lagged_pearson(&A, &C, 1, LagMode::FullSeriesMeans).unwrap();
        assert!((ab - 0.754_498_987_157_284_7).abs() < 1e-12);
        assert!((ac - 0.905_471_685_847_212_6).abs() < 1e-12);
        assert_eq!(
            lagged_pearson(&A, &B, 0, LagMode::FullSeriesMeans).unwrap(),
            pearson(&A, &B).unwrap()
        );
    }

    #[test]
    fn lag_limits() {
        assert!(lagged_pearson(&A, &B, 4, LagMode::Windowed).is_ok());
        assert_eq!(
            lagged_pearson(&A, &B, 5, LagMode::Windowed),
            Err(Error::LagTooLarge { lag: 5, len: 6 })
        );
        let flat_head = [1.0, 1.0, 1.0, 2.0];
        assert!(matches!(
            lagged_pearson(&[1.0, 2.0, 3.0, 4.0], &flat_head, 1, LagMode::Windowed),
            Err(Error::ZeroVariance(_))
        ));
    }

    #[test]
    fn works_in_f32() {
        let x: Vec<f32> = A.iter().map(|&v| v as f32).collect();
        let y: Vec<f32> = C.iter().map(|&v| v as f32).collect();
        let r = lagged_pearson(&x, &y, 1, LagMode::Windowed).unwrap();
        assert!((r - 0.9845).abs() < 5e-4);
        assert_eq!(median(&[3.0f32, 1.0]).unwrap(), 2.0);
    }
}
