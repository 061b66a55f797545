//! Portfolio emulation under index weighting schemes and benchmark comparison.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::ingest::{PriceTable, Ticker};
use crate::scalar::Scalar;

/// How one unit of a portfolio is priced from its constituents.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightingScheme<T> {
    /// Arithmetic mean of constituent prices (Dow-style).
    PriceWeighted,
    /// Share-count weighted mean price (S&P-style).
    CapWeighted(BTreeMap<Ticker, T>),
    /// Plain sum of constituent prices.
    EqualSum,
}

impl<T: Scalar> WeightingScheme<T> {
    fn check(&self, portfolio: &[Ticker]) -> Result<()> {
        if let WeightingScheme::CapWeighted(shares) = self {
            for ticker in portfolio {
                match shares.get(ticker) {
                    Some(&s) if s.is_finite() && s > T::zero() => {}
                    _ => return Err(Error::MissingShares(ticker.to_string())),
                }
            }
        }
        Ok(())
    }
}

/// Price of one unit of the portfolio given each constituent's price.
/// Constituents are visited in symbol order so the result does not depend on
/// how the portfolio was listed.
pub fn portfolio_value<T: Scalar>(prices: &[(Ticker, T)], scheme: &WeightingScheme<T>) -> Result<T> {
    if prices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted: Vec<&(Ticker, T)> = prices.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let total: T = sorted.iter().map(|(_, p)| *p).sum();
    match scheme {
        WeightingScheme::PriceWeighted => Ok(total / T::of_usize(sorted.len())),
        WeightingScheme::EqualSum => Ok(total),
        WeightingScheme::CapWeighted(shares) => {
            let (mut weighted, mut count) = (T::zero(), T::zero());
            for (ticker, price) in sorted {
                let s = *shares
                    .get(ticker)
                    .ok_or_else(|| Error::MissingShares(ticker.to_string()))?;
                weighted = weighted + *price * s;
                count = count + s;
            }
            Ok(weighted / count)
        }
    }
}

/// Portfolio unit value on every date of `table`.
pub fn portfolio_series<T: Scalar>(
    table: &PriceTable<T>,
    portfolio: &[Ticker],
    scheme: &WeightingScheme<T>,
) -> Result<Vec<T>> {
    if portfolio.is_empty() {
        return Err(Error::EmptyInput);
    }
    scheme.check(portfolio)?;
    let columns = table.select(portfolio)?;
    columns
        .rows()
        .iter()
        .map(|row| {
            let priced: Vec<(Ticker, T)> = portfolio.iter().cloned().zip(row.iter().copied()).collect();
            portfolio_value(&priced, scheme)
        })
        .collect()
}

/// Return relative to the first value: `(v[t] - v[0]) / v[0]`.
pub fn cumulative_returns<T: Scalar>(values: &[T]) -> Result<Vec<T>> {
    let base = *values.first().ok_or(Error::EmptyInput)?;
    if !(base.is_finite() && base > T::zero()) {
        return Err(Error::InvalidTable(format!("base value {base} is not positive")));
    }
    Ok(values.iter().map(|&v| (v - base) / base).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport<T> {
    pub dates: Vec<NaiveDate>,
    pub portfolio_cum: Vec<T>,
    pub benchmark_cum: Vec<T>,
    /// Share of all dates, day 0 included, on which the portfolio's
    /// cumulative return strictly beats the benchmark's.
    pub outperformance_fraction: T,
    pub portfolio_start_price: T,
}

pub fn compare<T: Scalar>(portfolio: &[T], benchmark: &[T], dates: &[NaiveDate]) -> Result<BacktestReport<T>> {
    if portfolio.len() != benchmark.len() {
        return Err(Error::LengthMismatch {
            left: portfolio.len(),
            right: benchmark.len(),
        });
    }
    if dates.len() != portfolio.len() {
        return Err(Error::LengthMismatch {
            left: dates.len(),
            right: portfolio.len(),
        });
    }
    if portfolio.len() < 2 {
        return Err(Error::TooFewValues {
            found: portfolio.len(),
            required: 2,
        });
    }
    let portfolio_cum = cumulative_returns(portfolio)?;
    let benchmark_cum = cumulative_returns(benchmark)?;
    let wins = portfolio_cum.iter().zip(&benchmark_cum).filter(|(p, b)| p > b).count();
    Ok(BacktestReport {
        dates: dates.to_vec(),
        outperformance_fraction: T::of_usize(wins) / T::of_usize(portfolio_cum.len()),
        portfolio_cum,
        benchmark_cum,
        portfolio_start_price: portfolio[0],
    })
}

/// Emulates `portfolio` from `prices` and compares it with the first column
/// of `benchmark` over the dates both tables share.
pub fn backtest<T: Scalar>(
    prices: &PriceTable<T>,
    portfolio: &[Ticker],
    scheme: &WeightingScheme<T>,
    benchmark: &PriceTable<T>,
) -> Result<BacktestReport<T>> {
    let bench: BTreeMap<NaiveDate, T> = benchmark.dates().iter().copied().zip(benchmark.column(0)).collect();
    let dates: Vec<NaiveDate> = prices
        .dates()
        .iter()
        .copied()
        .filter(|d| bench.contains_key(d))
        .collect();
    if dates.len() < 2 {
        return Err(Error::InsufficientHistory {
            found: dates.len(),
            required: 2,
        });
    }
    let aligned = if dates.len() == prices.len() {
        prices.clone()
    } else {
        prices.restrict_to_dates(&dates)?
    };
    let values = portfolio_series(&aligned, portfolio, scheme)?;
    let bench_values: Vec<T> = dates.iter().map(|d| bench[d]).collect();
    compare(&values, &bench_values, &dates)
}
