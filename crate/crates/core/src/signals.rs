//! Lead-lag discovery and N-of-K conditional investing.
//!
//! Lag search runs on price levels; the conditionals look at day-over-day
//! returns of each indicator `lag` days before the decision day.

use std::collections::BTreeSet;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::ingest::{PriceTable, ReturnTable, Ticker};
use crate::scalar::Scalar;
use crate::stats::{lagged_pearson, LagMode};

/// Default upper bound of the lag search, in trading days.
pub const DEFAULT_MAX_LAG: usize = 79;

/// The lag at which an indicator best tracks the target.
#[derive(Debug, Clone, PartialEq)]
pub struct LagRelationship<T> {
    pub indicator: Ticker,
    pub lag: usize,
    pub correlation: T,
    pub mode: LagMode,
}

/// Searches lags `1..=max_lag` for the highest correlation between the target
/// and the earlier indicator. Ties go to the smallest lag.
pub fn find_optimal_lag<T: Scalar>(
    indicator: Ticker,
    target_prices: &[T],
    indicator_prices: &[T],
    max_lag: usize,
    mode: LagMode,
) -> Result<LagRelationship<T>> {
    if max_lag == 0 {
        return Err(Error::InvalidLag("max_lag must be at least 1".into()));
    }
    if target_prices.len() != indicator_prices.len() {
        return Err(Error::LengthMismatch {
            left: target_prices.len(),
            right: indicator_prices.len(),
        });
    }
    if target_prices.len() <= max_lag + 1 {
        return Err(Error::LagTooLarge {
            lag: max_lag,
            len: target_prices.len(),
        });
    }
    let mut best: Option<(usize, T)> = None;
    for lag in 1..=max_lag {
        let r = lagged_pearson(target_prices, indicator_prices, lag, mode)?;
        if best.is_none_or(|(_, b)| r > b) {
            best = Some((lag, r));
        }
    }
    let (lag, correlation) = best.expect("max_lag >= 1");
    Ok(LagRelationship {
        indicator,
        lag,
        correlation,
        mode,
    })
}

/// Lag search for several indicators against one target column of `prices`.
pub fn discover_lags<T: Scalar>(
    prices: &PriceTable<T>,
    target: &Ticker,
    indicators: &[Ticker],
    max_lag: usize,
    mode: LagMode,
) -> Result<Vec<LagRelationship<T>>> {
    let target_prices = prices.column_of(target)?;
    indicators
        .iter()
        .map(|ind| {
            let series = prices.column_of(ind)?;
            find_optimal_lag(ind.clone(), &target_prices, &series, max_lag, mode)
        })
        .collect()
}

/// Invest in `target` on days when at least `required_true` of the
/// relationships showed a positive indicator return `lag` days earlier.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorRule<T> {
    target: Ticker,
    relationships: Vec<LagRelationship<T>>,
    required_true: usize,
}

impl<T: Scalar> IndicatorRule<T> {
    pub fn new(target: Ticker, relationships: Vec<LagRelationship<T>>, required_true: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for rel in &relationships {
            if !seen.insert(&rel.indicator) {
                return Err(Error::InvalidRule(format!("indicator {} listed twice", rel.indicator)));
            }
            if rel.lag == 0 {
                return Err(Error::InvalidRule(format!("indicator {} has lag 0", rel.indicator)));
            }
        }
        if required_true > relationships.len() {
            return Err(Error::InvalidRule(format!(
                "{required_true} conditions required but only {} relationships",
                relationships.len()
            )));
        }
        Ok(IndicatorRule {
            target,
            relationships,
            required_true,
        })
    }

    pub fn target(&self) -> &Ticker {
        &self.target
    }

    pub fn relationships(&self) -> &[LagRelationship<T>] {
        &self.relationships
    }

    pub fn required_true(&self) -> usize {
        self.required_true
    }

    /// Days before the longest lag can be evaluated.
    pub fn warmup(&self) -> usize {
        self.relationships.iter().map(|r| r.lag).max().unwrap_or(0)
    }

    pub fn with_required_true(&self, required_true: usize) -> Result<Self> {
        IndicatorRule::new(self.target.clone(), self.relationships.clone(), required_true)
    }
}

/// Indicator return observed on emulation day `day`; day 0 has none.
fn return_on<T: Scalar>(column: &[T], day: usize) -> Option<T> {
    day.checked_sub(1).and_then(|i| column.get(i).copied())
}

struct Conditions<T> {
    lagged: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> Conditions<T> {
    fn new(rule: &IndicatorRule<T>, indicator_returns: &ReturnTable<T>) -> Result<Self> {
        let lagged = rule
            .relationships
            .iter()
            .map(|rel| Ok((rel.lag, indicator_returns.column_of(&rel.indicator)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Conditions { lagged })
    }

    fn true_on(&self, day: usize) -> Vec<bool> {
        self.lagged
            .iter()
            .map(|(lag, column)| {
                day.checked_sub(*lag)
                    .and_then(|d| return_on(column, d))
                    .is_some_and(|r| r > T::zero())
            })
            .collect()
    }

    fn count_on(&self, day: usize) -> usize {
        self.true_on(day).into_iter().filter(|&b| b).count()
    }
}

/// Number of true conditionals on emulation `day` and whether the rule fires.
/// `indicator_returns` row `i` holds the returns of emulation day `i + 1`.
pub fn evaluate_conditionals<T: Scalar>(
    rule: &IndicatorRule<T>,
    indicator_returns: &ReturnTable<T>,
    day: usize,
) -> Result<(usize, bool)> {
    let warmup = rule.warmup();
    if day < warmup {
        return Err(Error::BeforeWarmup { day, warmup });
    }
    if day > indicator_returns.len() {
        return Err(Error::InsufficientHistory {
            found: indicator_returns.len() + 1,
            required: day + 1,
        });
    }
    let count = Conditions::new(rule, indicator_returns)?.count_on(day);
    Ok((count, count >= rule.required_true))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalBacktestReport<T> {
    pub dates: Vec<NaiveDate>,
    /// Buy-and-hold value: the raw target prices.
    pub continuous: Vec<T>,
    /// Value when holding only on days the rule fires.
    pub indicative: Vec<T>,
    pub invested_days: Vec<usize>,
}

/// Replays the rule over the emulation period. On a fired day the position
/// gains the target's price change; otherwise it holds. Days inside the
/// warmup hold, except with `required_true == 0`, which is always invested.
pub fn simulate_indicative<T: Scalar>(
    dates: &[NaiveDate],
    target_prices: &[T],
    rule: &IndicatorRule<T>,
    indicator_returns: &ReturnTable<T>,
) -> Result<SignalBacktestReport<T>> {
    let n = target_prices.len();
    let warmup = rule.warmup();
    if n < warmup + 2 {
        return Err(Error::InsufficientHistory {
            found: n,
            required: warmup + 2,
        });
    }
    if dates.len() != n {
        return Err(Error::LengthMismatch {
            left: dates.len(),
            right: n,
        });
    }
    if indicator_returns.len() + 1 != n {
        return Err(Error::LengthMismatch {
            left: indicator_returns.len() + 1,
            right: n,
        });
    }
    let conditions = Conditions::new(rule, indicator_returns)?;
    let always = rule.required_true == 0;

    let mut indicative = Vec::with_capacity(n);
    let mut invested_days = Vec::new();
    indicative.push(target_prices[0]);
    for t in 1..n {
        let previous = indicative[t - 1];
        let fired = always || (t >= warmup && conditions.count_on(t) >= rule.required_true);
        let value = if fired {
            invested_days.push(t);
            if previous == target_prices[t - 1] {
                // level with buy-and-hold: track the price itself
                target_prices[t]
            } else {
                previous + (target_prices[t] - target_prices[t - 1])
            }
        } else {
            previous
        };
        indicative.push(value);
    }
    Ok(SignalBacktestReport {
        dates: dates.to_vec(),
        continuous: target_prices.to_vec(),
        indicative,
        invested_days,
    })
}

/// Which indicators point at the target on the final emulation day.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorDigraph {
    pub target: Ticker,
    pub indicators: Vec<Ticker>,
    /// Sources of the edges `indicator -> target`, in rule order.
    pub edges: Vec<Ticker>,
}

impl IndicatorDigraph {
    pub fn in_degree(&self) -> usize {
        self.edges.len()
    }
}

pub fn last_day_digraph<T: Scalar>(
    rule: &IndicatorRule<T>,
    indicator_returns: &ReturnTable<T>,
) -> Result<IndicatorDigraph> {
    let last = indicator_returns.len();
    if last < rule.warmup() {
        return Err(Error::InsufficientHistory {
            found: last + 1,
            required: rule.warmup() + 1,
        });
    }
    let truths = Conditions::new(rule, indicator_returns)?.true_on(last);
    let indicators: Vec<Ticker> = rule.relationships.iter().map(|r| r.indicator.clone()).collect();
    let edges = indicators
        .iter()
        .zip(truths)
        .filter(|(_, t)| *t)
        .map(|(i, _)| i.clone())
        .collect();
    Ok(IndicatorDigraph {
        target: rule.target.clone(),
        indicators,
        edges,
    })
}

/// Runs the rule over every date of `prices`, which must hold the target and
/// all indicator columns.
pub fn run_signal_backtest<T: Scalar>(
    prices: &PriceTable<T>,
    rule: &IndicatorRule<T>,
) -> Result<(SignalBacktestReport<T>, IndicatorDigraph)> {
    let target_prices = prices.column_of(rule.target())?;
    let returns = prices.to_returns();
    let report = simulate_indicative(prices.dates(), &target_prices, rule, &returns)?;
    let digraph = last_day_digraph(rule, &returns)?;
    Ok((report, digraph))
}
