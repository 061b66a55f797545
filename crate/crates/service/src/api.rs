//! Request and response bodies shared by the HTTP service and the CLI, and
//! the analyses that produce them from a loaded [`Dataset`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use chrono::NaiveDate;
use corrgraph_core::corrgraph::CorrelationMatrix;
use corrgraph_core::ingest::{self, PriceTable};
use corrgraph_core::signals::{IndicatorRule, LagRelationship, DEFAULT_MAX_LAG};
use corrgraph_core::{
    build_graph, correlation_matrix, discover_lags, max_cliques, offdiagonal_stats, run_signal_backtest,
    select_portfolio, suggest_threshold, LagMode, SelectionMode, Ticker, WeightingScheme,
};
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, ErrorCode};

pub type ApiResult<T> = Result<T, ApiError>;

/// Earliest and latest dates accepted when a request leaves the range open.
pub const OPEN_START: NaiveDate = NaiveDate::MIN;
pub const OPEN_END: NaiveDate = NaiveDate::MAX;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateDatasetRequest {
    pub name: String,
    pub tickers: Vec<String>,
    #[serde(default)]
    pub start: Option<NaiveDate>,
    #[serde(default)]
    pub end: Option<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHandle {
    pub id: String,
    pub tickers: Vec<String>,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub rows: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuggestedThresholds {
    pub diversified: Option<f64>,
    pub undiversified: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationStats {
    pub mean: f64,
    pub median: f64,
    pub stddev: Option<f64>,
    pub suggested: SuggestedThresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationsResponse {
    pub tickers: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub stats: CorrelationStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Diversified,
    Undiversified,
}

impl From<Mode> for SelectionMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Diversified => SelectionMode::Diversified,
            Mode::Undiversified => SelectionMode::Undiversified,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRequest {
    pub mode: Mode,
    /// Defaults to the suggested threshold for `mode`.
    #[serde(default)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphResponse {
    pub mode: Mode,
    pub threshold: f64,
    pub nodes: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    pub max_cliques: Vec<Vec<String>>,
    pub selected: Vec<String>,
    pub tie_break_score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    PriceWeighted,
    CapWeighted,
    EqualSum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weighting {
    pub scheme: SchemeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shares: Option<BTreeMap<String, f64>>,
}

impl Weighting {
    fn to_scheme(&self) -> ApiResult<WeightingScheme<f64>> {
        match (self.scheme, &self.shares) {
            (SchemeName::PriceWeighted, _) => Ok(WeightingScheme::PriceWeighted),
            (SchemeName::EqualSum, _) => Ok(WeightingScheme::EqualSum),
            (SchemeName::CapWeighted, None) => Err(ApiError::new(
                ErrorCode::MissingShares,
                "cap_weighted requires a shares mapping",
            )),
            (SchemeName::CapWeighted, Some(shares)) => {
                let mut parsed = BTreeMap::new();
                for (symbol, &count) in shares {
                    if !(count.is_finite() && count > 0.0) {
                        return Err(ApiError::invalid(format!("share count for {symbol} must be positive")));
                    }
                    parsed.insert(Ticker::new(symbol.as_str())?, count);
                }
                Ok(WeightingScheme::CapWeighted(parsed))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestRequest {
    pub portfolio: Vec<String>,
    pub weighting: Weighting,
    pub benchmark: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestResponse {
    pub dates: Vec<NaiveDate>,
    pub portfolio_cum: Vec<f64>,
    pub benchmark_cum: Vec<f64>,
    pub outperformance_fraction: f64,
    pub start_price: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagModeName {
    #[default]
    Windowed,
    FullSeriesMeans,
}

impl From<LagModeName> for LagMode {
    fn from(mode: LagModeName) -> Self {
        match mode {
            LagModeName::Windowed => LagMode::Windowed,
            LagModeName::FullSeriesMeans => LagMode::FullSeriesMeans,
        }
    }
}

impl From<LagMode> for LagModeName {
    fn from(mode: LagMode) -> Self {
        match mode {
            LagMode::Windowed => LagModeName::Windowed,
            LagMode::FullSeriesMeans => LagModeName::FullSeriesMeans,
        }
    }
}

fn default_max_lag() -> usize {
    DEFAULT_MAX_LAG
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagsRequest {
    pub target: String,
    pub indicators: Vec<String>,
    #[serde(default = "default_max_lag")]
    pub max_lag: usize,
    #[serde(default)]
    pub mode: LagModeName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationshipBody {
    pub indicator: String,
    pub lag: usize,
    #[serde(default)]
    pub correlation: f64,
}

/// Output of lag discovery; also the rule-file format read by `signal`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagsResponse {
    pub target: String,
    pub mode: LagModeName,
    pub relationships: Vec<RelationshipBody>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalRequest {
    pub target: String,
    pub relationships: Vec<RelationshipBody>,
    pub required_true: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigraphBody {
    pub target: String,
    pub nodes: Vec<String>,
    /// `[indicator, target]` pairs for every condition true on the last day.
    pub edges: Vec<[String; 2]>,
    pub in_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalResponse {
    pub dates: Vec<NaiveDate>,
    pub continuous: Vec<f64>,
    pub indicative: Vec<f64>,
    pub invested_days: Vec<usize>,
    pub digraph: DigraphBody,
}

/// Dataset names double as ids in URLs.
pub fn validate_name(name: &str) -> ApiResult<()> {
    let ok = (1..=64).contains(&name.len()) && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if ok {
        Ok(())
    } else {
        Err(ApiError::invalid(format!(
            "dataset name {name:?} must be 1-64 characters of [A-Za-z0-9_-]"
        )))
    }
}

fn tickers(symbols: &[String]) -> ApiResult<Vec<Ticker>> {
    Ok(ingest::parse_tickers(symbols)?)
}

fn names(tickers: &[Ticker]) -> Vec<String> {
    tickers.iter().map(Ticker::to_string).collect()
}

struct Correlations {
    matrix: CorrelationMatrix<f64>,
    response: CorrelationsResponse,
}

/// An immutable, loaded price table plus cached derived data.
pub struct Dataset {
    id: String,
    data_dir: PathBuf,
    start: NaiveDate,
    end: NaiveDate,
    prices: PriceTable<f64>,
    warnings: Vec<String>,
    correlations: OnceLock<ApiResult<Arc<Correlations>>>,
}

impl std::fmt::Debug for Dataset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dataset")
            .field("id", &self.id)
            .field("tickers", &self.prices.tickers())
            .field("rows", &self.prices.len())
            .finish()
    }
}

impl Dataset {
    pub fn load(data_dir: &Path, request: &CreateDatasetRequest) -> ApiResult<Self> {
        validate_name(&request.name)?;
        let symbols = tickers(&request.tickers)?;
        if symbols.is_empty() {
            return Err(ApiError::invalid("at least one ticker is required"));
        }
        let start = request.start.unwrap_or(OPEN_START);
        let end = request.end.unwrap_or(OPEN_END);
        let (prices, warnings) = ingest::load_price_table_with_warnings(data_dir, &symbols, start, end)?;
        Ok(Dataset {
            id: request.name.clone(),
            data_dir: data_dir.to_path_buf(),
            start,
            end,
            prices,
            warnings: warnings.iter().map(ToString::to_string).collect(),
            correlations: OnceLock::new(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn prices(&self) -> &PriceTable<f64> {
        &self.prices
    }

    pub fn handle(&self) -> DatasetHandle {
        let dates = self.prices.dates();
        DatasetHandle {
            id: self.id.clone(),
            tickers: names(self.prices.tickers()),
            start: dates[0],
            end: dates[dates.len() - 1],
            rows: self.prices.len(),
            warnings: self.warnings.clone(),
        }
    }

    fn correlation_cache(&self) -> ApiResult<Arc<Correlations>> {
        self.correlations
            .get_or_init(|| {
                let matrix = correlation_matrix(&self.prices.to_returns())?;
                let stats = offdiagonal_stats(&matrix)?;
                let suggest = |mode| suggest_threshold(&stats, mode).ok();
                let response = CorrelationsResponse {
                    tickers: names(matrix.tickers()),
                    matrix: matrix.values().to_vec(),
                    stats: CorrelationStats {
                        mean: stats.mean,
                        median: stats.median,
                        stddev: stats.stddev,
                        suggested: SuggestedThresholds {
                            diversified: suggest(SelectionMode::Diversified),
                            undiversified: suggest(SelectionMode::Undiversified),
                        },
                    },
                };
                Ok(Arc::new(Correlations { matrix, response }))
            })
            .clone()
    }

    /// Return correlation matrix and off-diagonal statistics; computed once
    /// per dataset.
    pub fn correlations(&self) -> ApiResult<CorrelationsResponse> {
        Ok(self.correlation_cache()?.response.clone())
    }

    /// Thresholded graph over the cached matrix, its maximum cliques and the
    /// selected portfolio.
    pub fn graph(&self, request: &GraphRequest) -> ApiResult<GraphResponse> {
        let cache = self.correlation_cache()?;
        let mode = SelectionMode::from(request.mode);
        let threshold = match request.threshold {
            Some(t) => t,
            None => {
                let suggested = &cache.response.stats.suggested;
                match request.mode {
                    Mode::Diversified => suggested.diversified,
                    Mode::Undiversified => suggested.undiversified,
                }
                .ok_or_else(|| ApiError::new(ErrorCode::DegenerateSeries, "no suggested threshold for a single pair"))?
            }
        };
        let graph = build_graph(&cache.matrix, mode, threshold)?;
        let report = max_cliques(&graph);
        let selection = select_portfolio(&report, &cache.matrix, mode)?;
        Ok(GraphResponse {
            mode: request.mode,
            threshold,
            nodes: names(graph.tickers()),
            edges: graph.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            max_cliques: report.max_cliques.iter().map(|c| names(c)).collect(),
            selected: names(&selection.tickers),
            tie_break_score: selection.score,
        })
    }

    /// Portfolio built from this dataset against a benchmark file from the
    /// same data directory, over the dates both cover.
    pub fn backtest(&self, request: &BacktestRequest) -> ApiResult<BacktestResponse> {
        let portfolio = tickers(&request.portfolio)?;
        if portfolio.is_empty() {
            return Err(ApiError::invalid("portfolio is empty"));
        }
        let scheme = request.weighting.to_scheme()?;
        let benchmark_ticker = Ticker::new(request.benchmark.as_str())?;
        let benchmark = ingest::load_price_table::<f64>(&self.data_dir, &[benchmark_ticker], self.start, self.end)?;
        let report = corrgraph_core::backtest(&self.prices, &portfolio, &scheme, &benchmark)?;
        Ok(BacktestResponse {
            dates: report.dates,
            portfolio_cum: report.portfolio_cum,
            benchmark_cum: report.benchmark_cum,
            outperformance_fraction: report.outperformance_fraction,
            start_price: report.portfolio_start_price,
        })
    }

    /// Optimal lag and correlation of each indicator against the target,
    /// computed on price levels.
    pub fn lags(&self, request: &LagsRequest) -> ApiResult<LagsResponse> {
        let target = Ticker::new(request.target.as_str())?;
        let indicators = tickers(&request.indicators)?;
        if indicators.contains(&target) {
            return Err(ApiError::invalid("the target cannot be its own indicator"));
        }
        let mode = LagMode::from(request.mode);
        let found = discover_lags(&self.prices, &target, &indicators, request.max_lag, mode)?;
        Ok(LagsResponse {
            target: target.to_string(),
            mode: request.mode,
            relationships: found
                .into_iter()
                .map(|rel| RelationshipBody {
                    indicator: rel.indicator.to_string(),
                    lag: rel.lag,
                    correlation: rel.correlation,
                })
                .collect(),
        })
    }

    /// Replays the N-of-K rule over every date of the dataset.
    pub fn signal_backtest(&self, request: &SignalRequest) -> ApiResult<SignalResponse> {
        let target = Ticker::new(request.target.as_str())?;
        let relationships = request
            .relationships
            .iter()
            .map(|r| {
                Ok(LagRelationship {
                    indicator: Ticker::new(r.indicator.as_str())?,
                    lag: r.lag,
                    correlation: r.correlation,
                    mode: LagMode::Windowed,
                })
            })
            .collect::<ApiResult<Vec<_>>>()?;
        let rule = IndicatorRule::new(target.clone(), relationships, request.required_true)?;
        let (report, digraph) = run_signal_backtest(&self.prices, &rule)?;
        Ok(SignalResponse {
            dates: report.dates,
            continuous: report.continuous,
            indicative: report.indicative,
            invested_days: report.invested_days,
            digraph: DigraphBody {
                target: target.to_string(),
                nodes: std::iter::once(target.to_string())
                    .chain(names(&digraph.indicators))
                    .collect(),
                in_degree: digraph.in_degree(),
                edges: digraph
                    .edges
                    .iter()
                    .map(|src| [src.to_string(), target.to_string()])
                    .collect(),
            },
        })
    }
}

/// Serializes a response body exactly as the service sends it.
pub fn to_json<T: Serialize>(body: &T) -> String {
    serde_json::to_string(body).expect("response bodies serialize")
}
