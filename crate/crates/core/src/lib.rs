//! Correlation-graph portfolio analytics.
//!
//! Daily adjusted closes are turned into return correlations, thresholded
//! into graphs whose maximum cliques are candidate portfolios, and replayed
//! against weighted benchmarks. A second pipeline finds lead-lag indicators
//! for a target stock and replays N-of-K conditional investing rules.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod backtest;
pub mod corrgraph;
pub mod error;
pub mod ingest;
pub mod scalar;
pub mod signals;
pub mod stats;

pub use backtest::{backtest, compare, cumulative_returns, portfolio_series, portfolio_value, WeightingScheme};
pub use corrgraph::{
    build_graph, correlation_matrix, max_cliques, offdiagonal_stats, select_portfolio, suggest_threshold, CliqueReport,
    SelectionMode,
};
pub use error::{Error, Result};
pub use ingest::{load_price_table, load_price_table_with_warnings, Ticker};
pub use scalar::Scalar;
pub use signals::{
    discover_lags, evaluate_conditionals, find_optimal_lag, last_day_digraph, run_signal_backtest, simulate_indicative,
    IndicatorDigraph,
};
pub use stats::{lagged_pearson, mean, median, pearson, sample_stddev, LagMode};

pub type PriceTable64 = ingest::PriceTable<f64>;
pub type ReturnTable64 = ingest::ReturnTable<f64>;
pub type SampleStats64 = stats::SampleStats<f64>;
pub type CorrelationMatrix64 = corrgraph::CorrelationMatrix<f64>;
pub type CorrelationGraph64 = corrgraph::CorrelationGraph<f64>;
pub type Selection64 = corrgraph::Selection<f64>;
pub type WeightingScheme64 = backtest::WeightingScheme<f64>;
pub type BacktestReport64 = backtest::BacktestReport<f64>;
pub type LagRelationship64 = signals::LagRelationship<f64>;
pub type IndicatorRule64 = signals::IndicatorRule<f64>;
pub type SignalBacktestReport64 = signals::SignalBacktestReport<f64>;

pub type PriceTable32 = ingest::PriceTable<f32>;
pub type CorrelationMatrix32 = corrgraph::CorrelationMatrix<f32>;
pub type BacktestReport32 = backtest::BacktestReport<f32>;
