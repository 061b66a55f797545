//! The `corrgraph` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 analysis error.
//! With `--json` every subcommand prints the same body the service returns
//! for the matching endpoint.

use std::fmt::Write as _;
use std::io::Write;
use std::net::IpAddr;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use corrgraph_core::signals::DEFAULT_MAX_LAG;
use corrgraph_service::api::{
    to_json, BacktestRequest, CreateDatasetRequest, Dataset, GraphRequest, LagModeName, LagsRequest, Mode,
    RelationshipBody, SchemeName, SignalRequest, Weighting,
};
use corrgraph_service::{ApiError, ErrorClass, ErrorCode, ServiceConfig};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_ANALYSIS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "corrgraph", version, about = "Correlation-graph portfolio analytics")]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Directory holding one `<SYMBOL>.csv` per ticker
    #[arg(long, global = true, env = "CORRGRAPH_DATA_DIR")]
    pub data_dir: Option<PathBuf>,
    /// Comma-separated tickers to load
    #[arg(long, global = true, value_delimiter = ',')]
    pub tickers: Vec<String>,
    /// First date to include (YYYY-MM-DD)
    #[arg(long, global = true)]
    pub start: Option<NaiveDate>,
    /// Last date to include (YYYY-MM-DD)
    #[arg(long, global = true)]
    pub end: Option<NaiveDate>,
    /// Print the machine-readable JSON body instead of a table
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlation matrix, its statistics and suggested thresholds
    Corr,
    /// Threshold graph, maximum cliques and the selected portfolio
    Graph {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Defaults to the suggested threshold for the mode
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Compare a portfolio with a benchmark
    Backtest {
        #[arg(long, value_delimiter = ',', required = true)]
        portfolio: Vec<String>,
        #[arg(long, value_enum, default_value = "price")]
        weighting: WeightingArg,
        /// Share counts for cap weighting, e.g. `MSFT=85492740,AAPL=51156136`
        #[arg(long, value_delimiter = ',')]
        shares: Vec<String>,
        #[arg(long)]
        benchmark: String,
    },
    /// Optimal lead-lag relationship of each indicator with the target
    Lags {
        #[arg(long)]
        target: String,
        #[arg(long, value_delimiter = ',', required = true)]
        indicators: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_LAG)]
        max_lag: usize,
        #[arg(long, value_enum, default_value = "windowed")]
        lag_mode: LagModeArg,
    },
    /// Replay an N-of-K indicator rule against buy-and-hold
    Signal {
        /// Defaults to the rule file's target
        #[arg(long)]
        target: Option<String>,
        /// JSON as printed by `lags --json`
        #[arg(long)]
        rule_file: PathBuf,
        #[arg(long)]
        required_true: usize,
    },
    /// Run the JSON HTTP service
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        bind: Option<IpAddr>,
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Diversified,
    Undiversified,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightingArg {
    Price,
    Cap,
    Equal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LagModeArg {
    Windowed,
    FullSeriesMeans,
}

struct Failure {
    exit: i32,
    message: String,
}

impl From<ApiError> for Failure {
    fn from(err: ApiError) -> Self {
        let exit = match err.code.class() {
            ErrorClass::Usage => EXIT_USAGE,
            ErrorClass::Data => EXIT_DATA,
            ErrorClass::Analysis => EXIT_ANALYSIS,
        };
        Failure {
            exit,
            message: format!("error: {}: {}", err.code, err.message),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli, err) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            EXIT_OK
        }
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.message);
            failure.exit
        }
    }
}

fn data_dir(shared: &Shared) -> PathBuf {
    shared
        .data_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(corrgraph_service::server::DEFAULT_DATA_DIR))
}

fn load(shared: &Shared, tickers: Vec<String>, err: &mut dyn Write) -> Result<Dataset, Failure> {
    if tickers.is_empty() {
        return Err(ApiError::invalid("--tickers is required").into());
    }
    let request = CreateDatasetRequest {
        name: "cli".into(),
        tickers,
        start: shared.start,
        end: shared.end,
    };
    let dataset = Dataset::load(&data_dir(shared), &request)?;
    for warning in &dataset.handle().warnings {
        let _ = writeln!(err, "warning: {warning}");
    }
    Ok(dataset)
}

fn render<T: serde::Serialize>(json: bool, body: &T, table: impl FnOnce(&T) -> String) -> String {
    if json {
        to_json(body)
    } else {
        table(body)
    }
}

fn execute(cli: Cli, err: &mut dyn Write) -> Result<String, Failure> {
    let shared = &cli.shared;
    match cli.command {
        Command::Corr => {
            let dataset = load(shared, shared.tickers.clone(), err)?;
            let body = dataset.correlations()?;
            Ok(render(shared.json, &body, |b| {
                let mut s = matrix_table(&b.tickers, &b.matrix);
                let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
                let _ = writeln!(s, "\nmean    {:.4}", b.stats.mean);
                let _ = writeln!(s, "median  {:.4}", b.stats.median);
                let _ = writeln!(s, "stddev  {}", opt(b.stats.stddev));
                let _ = writeln!(
                    s,
                    "suggested diversified threshold    {}",
                    opt(b.stats.suggested.diversified)
                );
                let _ = write!(
                    s,
                    "suggested undiversified threshold  {}",
                    opt(b.stats.suggested.undiversified)
                );
                s
            }))
        }
        Command::Graph { mode, threshold } => {
            let dataset = load(shared, shared.tickers.clone(), err)?;
            let mode = match mode {
                ModeArg::Diversified => Mode::Diversified,
                ModeArg::Undiversified => Mode::Undiversified,
            };
            let body = dataset.graph(&GraphRequest { mode, threshold })?;
            Ok(render(shared.json, &body, |b| {
                let mut s = format!("threshold {:.4}, {} edges\n", b.threshold, b.edges.len());
                for [i, j] in &b.edges {
                    let _ = writeln!(s, "  {} - {}", b.nodes[*i], b.nodes[*j]);
                }
                let _ = writeln!(s, "maximum cliques (size {}):", b.selected.len());
                for clique in &b.max_cliques {
                    let _ = writeln!(s, "  {}", clique.join(", "));
                }
                let _ = write!(
                    s,
                    "selected: {} (mean |corr| {:.4})",
                    b.selected.join(", "),
                    b.tie_break_score
                );
                s
            }))
        }
        Command::Backtest {
            portfolio,
            weighting,
            shares,
            benchmark,
        } => {
            let tickers = if shared.tickers.is_empty() {
                portfolio.clone()
            } else {
                shared.tickers.clone()
            };
            let dataset = load(shared, tickers, err)?;
            let weighting = Weighting {
                scheme: match weighting {
                    WeightingArg::Price => SchemeName::PriceWeighted,
                    WeightingArg::Cap => SchemeName::CapWeighted,
                    WeightingArg::Equal => SchemeName::EqualSum,
                },
                shares: parse_shares(&shares)?,
            };
            let body = dataset.backtest(&BacktestRequest {
                portfolio,
                weighting,
                benchmark: benchmark.clone(),
            })?;
            Ok(render(shared.json, &body, |b| {
                let last = b.dates.len() - 1;
                format!(
                    "{} trading days from {} to {}\nportfolio start price  {:.4}\nportfolio return       {:+.2}%\n{benchmark:<10} return      {:+.2}%\noutperformed on        {:.2}% of days",
                    b.dates.len(),
                    b.dates[0],
                    b.dates[last],
                    b.start_price,
                    100.0 * b.portfolio_cum[last],
                    100.0 * b.benchmark_cum[last],
                    100.0 * b.outperformance_fraction
                )
            }))
        }
        Command::Lags {
            target,
            indicators,
            max_lag,
            lag_mode,
        } => {
            let tickers = if shared.tickers.is_empty() {
                std::iter::once(target.clone())
                    .chain(indicators.iter().cloned())
                    .collect()
            } else {
                shared.tickers.clone()
            };
            let dataset = load(shared, tickers, err)?;
            let mode = match lag_mode {
                LagModeArg::Windowed => LagModeName::Windowed,
                LagModeArg::FullSeriesMeans => LagModeName::FullSeriesMeans,
            };
            let body = dataset.lags(&LagsRequest {
                target,
                indicators,
                max_lag,
                mode,
            })?;
            Ok(render(shared.json, &body, |b| {
                let mut s = format!("{:<10} {:>5} {:>12}\n", "indicator", "lag", "correlation");
                for r in &b.relationships {
                    let _ = writeln!(s, "{:<10} {:>5} {:>12.6}", r.indicator, r.lag, r.correlation);
                }
                s.trim_end().to_string()
            }))
        }
        Command::Signal {
            target,
            rule_file,
            required_true,
        } => {
            let (file_target, relationships) = read_rule_file(&rule_file)?;
            let target = target
                .or(file_target)
                .ok_or_else(|| ApiError::invalid("--target is required when the rule file names none"))?;
            let tickers = if shared.tickers.is_empty() {
                std::iter::once(target.clone())
                    .chain(relationships.iter().map(|r| r.indicator.clone()))
                    .collect()
            } else {
                shared.tickers.clone()
            };
            let dataset = load(shared, tickers, err)?;
            let body = dataset.signal_backtest(&SignalRequest {
                target,
                relationships,
                required_true,
            })?;
            Ok(render(shared.json, &body, |b| {
                let last = b.dates.len() - 1;
                let mut s = format!(
                    "{} days, invested on {}\ncontinuous  {:.4} -> {:.4}\nindicative  {:.4} -> {:.4}\n",
                    b.dates.len(),
                    b.invested_days.len(),
                    b.continuous[0],
                    b.continuous[last],
                    b.indicative[0],
                    b.indicative[last]
                );
                let _ = write!(
                    s,
                    "last day: {} of {} indicators point at {}",
                    b.digraph.in_degree,
                    b.digraph.nodes.len() - 1,
                    b.digraph.target
                );
                for [from, _] in &b.digraph.edges {
                    let _ = write!(s, "\n  {from} -> {}", b.digraph.target);
                }
                s
            }))
        }
        Command::Serve { port, bind, ui_dir } => {
            let mut config = ServiceConfig::from_env().map_err(|e| Failure {
                exit: EXIT_USAGE,
                message: format!("error: {e}"),
            })?;
            if let Some(dir) = &shared.data_dir {
                config.data_dir = dir.clone();
            }
            if let Some(port) = port {
                config.port = port;
            }
            if let Some(bind) = bind {
                config.bind = bind;
            }
            if ui_dir.is_some() {
                config.ui_dir = ui_dir;
            }
            serve(config)
        }
    }
}

fn serve(config: ServiceConfig) -> Result<String, Failure> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .try_init();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
        exit: EXIT_ANALYSIS,
        message: format!("error: {e}"),
    })?;
    runtime
        .block_on(corrgraph_service::run_until_signal(config))
        .map(|()| "shut down".to_string())
        .map_err(|e| Failure {
            exit: match e {
                corrgraph_service::ServeError::DataDir { .. } => EXIT_DATA,
                _ => EXIT_USAGE,
            },
            message: format!("error: {e}"),
        })
}

fn parse_shares(pairs: &[String]) -> Result<Option<std::collections::BTreeMap<String, f64>>, ApiError> {
    if pairs.is_empty() {
        return Ok(None);
    }
    pairs
        .iter()
        .map(|pair| {
            let (symbol, count) = pair
                .split_once('=')
                .ok_or_else(|| ApiError::invalid(format!("--shares entry {pair:?} is not SYMBOL=COUNT")))?;
            let count: f64 = count
                .parse()
                .map_err(|_| ApiError::invalid(format!("share count {count:?} is not a number")))?;
            Ok((symbol.to_string(), count))
        })
        .collect::<Result<_, _>>()
        .map(Some)
}

/// Accepts the `lags --json` body; only `relationships` is required.
fn read_rule_file(path: &Path) -> Result<(Option<String>, Vec<RelationshipBody>), ApiError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ApiError::new(
            ErrorCode::MissingFile,
            format!("cannot read rule file {}: {e}", path.display()),
        )
    })?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| ApiError::invalid(format!("rule file {} is not JSON: {e}", path.display())))?;
    let target = value.get("target").and_then(Value::as_str).map(str::to_string);
    let relationships = value
        .get("relationships")
        .cloned()
        .ok_or_else(|| ApiError::invalid("rule file has no `relationships` array"))
        .and_then(|v| serde_json::from_value(v).map_err(|e| ApiError::invalid(format!("bad relationships: {e}"))))?;
    Ok((target, relationships))
}

fn matrix_table(tickers: &[String], matrix: &[Vec<f64>]) -> String {
    let width = tickers.iter().map(String::len).max().unwrap_or(0).max(7);
    let mut s = format!("{:width$}", "");
    for t in tickers {
        let _ = write!(s, " {t:>width$}");
    }
    for (t, row) in tickers.iter().zip(matrix) {
        let _ = write!(s, "\n{t:width$}");
        for v in row {
            let _ = write!(s, " {v:>width$.4}");
        }
    }
    s
}
