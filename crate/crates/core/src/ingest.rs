//! Adjusted-close CSV ingestion, date alignment and simple returns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Header every price file must carry, column for column.
pub const CSV_HEADER: [&str; 7] = ["Date", "Open", "High", "Low", "Close", "Adj Close", "Volume"];
const ADJ_CLOSE: usize = 5;
const DATE_FORMAT: &str = "%Y-%m-%d";

/// Minimum number of common dates a price table must cover.
pub const MIN_PRICE_ROWS: usize = 3;

/// Upper-case market symbol such as `MSFT`, `BRK-A` or `^DJI`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ticker(String);

impl Ticker {
    pub fn new(symbol: impl Into<String>) -> Result<Self> {
        let symbol = symbol.into();
        let valid_len = (1..=10).contains(&symbol.len());
        let valid_chars = symbol
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || matches!(c, '-' | '^' | '.'));
        if valid_len && valid_chars {
            Ok(Ticker(symbol))
        } else {
            Err(Error::InvalidTicker(symbol))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// File name holding this ticker's history inside a data directory.
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.0)
    }
}

impl FromStr for Ticker {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ticker::new(s)
    }
}

impl fmt::Display for Ticker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Ticker {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Parses a list of symbols, rejecting invalid and duplicate entries.
pub fn parse_tickers<S: AsRef<str>>(symbols: &[S]) -> Result<Vec<Ticker>> {
    let tickers = symbols
        .iter()
        .map(|s| Ticker::new(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    ensure_unique(&tickers)?;
    Ok(tickers)
}

fn ensure_unique(tickers: &[Ticker]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for ticker in tickers {
        if !seen.insert(ticker) {
            return Err(Error::DuplicateTicker(ticker.to_string()));
        }
    }
    Ok(())
}

fn column_index(tickers: &[Ticker], ticker: &Ticker) -> Result<usize> {
    tickers
        .iter()
        .position(|t| t == ticker)
        .ok_or_else(|| Error::UnknownTicker(ticker.to_string()))
}

/// Date-aligned adjusted closing prices, one column per ticker.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceTable<T> {
    dates: Vec<NaiveDate>,
    tickers: Vec<Ticker>,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> PriceTable<T> {
    /// Builds a table from row-major prices, enforcing the table invariants:
    /// strictly increasing dates, at least three rows, unique tickers and
    /// strictly positive finite prices.
    pub fn new(dates: Vec<NaiveDate>, tickers: Vec<Ticker>, rows: Vec<Vec<T>>) -> Result<Self> {
        ensure_unique(&tickers)?;
        check_shape(&dates, &tickers, &rows)?;
        if dates.len() < MIN_PRICE_ROWS {
            return Err(Error::InsufficientHistory {
                found: dates.len(),
                required: MIN_PRICE_ROWS,
            });
        }
        for (date, row) in dates.iter().zip(&rows) {
            for (ticker, &price) in tickers.iter().zip(row) {
                if !(price.is_finite() && price > T::zero()) {
                    return Err(Error::InvalidTable(format!(
                        "price {price} for {ticker} on {date} is not strictly positive"
                    )));
                }
            }
        }
        Ok(PriceTable { dates, tickers, rows })
    }

    /// Builds a table from one price column per ticker.
    pub fn from_columns(dates: Vec<NaiveDate>, columns: Vec<(Ticker, Vec<T>)>) -> Result<Self> {
        let (tickers, columns): (Vec<_>, Vec<_>) = columns.into_iter().unzip();
        if let Some(bad) = columns.iter().find(|c| c.len() != dates.len()) {
            return Err(Error::LengthMismatch {
                left: dates.len(),
                right: bad.len(),
            });
        }
        let rows = (0..dates.len())
            .map(|t| columns.iter().map(|c| c[t]).collect())
            .collect();
        PriceTable::new(dates, tickers, rows)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn tickers(&self) -> &[Ticker] {
        &self.tickers
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, t: usize) -> &[T] {
        &self.rows[t]
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn column(&self, k: usize) -> Vec<T> {
        self.rows.iter().map(|row| row[k]).collect()
    }

    pub fn column_of(&self, ticker: &Ticker) -> Result<Vec<T>> {
        Ok(self.column(column_index(&self.tickers, ticker)?))
    }

    /// Restricts the table to `tickers`, in the given order.
    pub fn select(&self, tickers: &[Ticker]) -> Result<Self> {
        ensure_unique(tickers)?;
        let idx = tickers
            .iter()
            .map(|t| column_index(&self.tickers, t))
            .collect::<Result<Vec<_>>>()?;
        let rows = self
            .rows
            .iter()
            .map(|row| idx.iter().map(|&k| row[k]).collect())
            .collect();
        Ok(PriceTable {
            dates: self.dates.clone(),
            tickers: tickers.to_vec(),
            rows,
        })
    }

    /// Restricts the table to the given dates, which must all be present.
    pub fn restrict_to_dates(&self, dates: &[NaiveDate]) -> Result<Self> {
        let by_date: BTreeMap<_, _> = self.dates.iter().zip(&self.rows).collect();
        let rows = dates
            .iter()
            .map(|d| {
                by_date
                    .get(d)
                    .map(|row| row.to_vec())
                    .ok_or_else(|| Error::InvalidTable(format!("date {d} not in table")))
            })
            .collect::<Result<Vec<_>>>()?;
        PriceTable::new(dates.to_vec(), self.tickers.clone(), rows)
    }

    /// Simple returns `(p[t+1] - p[t]) / p[t]`; the first date is dropped.
    pub fn to_returns(&self) -> ReturnTable<T> {
        let rows = self
            .rows
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(&old, &new)| (new - old) / old).collect())
            .collect();
        ReturnTable {
            dates: self.dates[1..].to_vec(),
            tickers: self.tickers.clone(),
            rows,
        }
    }
}

fn check_shape<T>(dates: &[NaiveDate], tickers: &[Ticker], rows: &[Vec<T>]) -> Result<()> {
    if rows.len() != dates.len() {
        return Err(Error::LengthMismatch {
            left: dates.len(),
            right: rows.len(),
        });
    }
    if let Some(row) = rows.iter().find(|r| r.len() != tickers.len()) {
        return Err(Error::LengthMismatch {
            left: tickers.len(),
            right: row.len(),
        });
    }
    if dates.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidTable("dates are not strictly increasing".into()));
    }
    Ok(())
}

/// Day-over-day simple returns aligned on the later date of each pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnTable<T> {
    dates: Vec<NaiveDate>,
    tickers: Vec<Ticker>,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> ReturnTable<T> {
    pub fn new(dates: Vec<NaiveDate>, tickers: Vec<Ticker>, rows: Vec<Vec<T>>) -> Result<Self> {
        ensure_unique(&tickers)?;
        check_shape(&dates, &tickers, &rows)?;
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite return".into()));
        }
        Ok(ReturnTable { dates, tickers, rows })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn tickers(&self) -> &[Ticker] {
        &self.tickers
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn column(&self, k: usize) -> Vec<T> {
        self.rows.iter().map(|row| row[k]).collect()
    }

    pub fn column_of(&self, ticker: &Ticker) -> Result<Vec<T>> {
        Ok(self.column(column_index(&self.tickers, ticker)?))
    }

    pub fn ticker_index(&self, ticker: &Ticker) -> Result<usize> {
        column_index(&self.tickers, ticker)
    }
}

/// A ticker whose history bounds the common date range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeWarning {
    pub ticker: Ticker,
    pub message: String,
}

impl fmt::Display for RangeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.ticker, self.message)
    }
}

/// Loads `<SYMBOL>.csv` for every ticker and intersects their valid dates
/// within `[start, end]`.
pub fn load_price_table<T: Scalar>(
    data_dir: &Path,
    tickers: &[Ticker],
    start: NaiveDate,
    end: NaiveDate,
) -> Result<PriceTable<T>> {
    load_price_table_with_warnings(data_dir, tickers, start, end).map(|(table, _)| table)
}

/// Like [`load_price_table`], also reporting tickers whose histories start
/// later or end earlier than the others and so truncate the common range.
pub fn load_price_table_with_warnings<T: Scalar>(
    data_dir: &Path,
    tickers: &[Ticker],
    start: NaiveDate,
    end: NaiveDate,
) -> Result<(PriceTable<T>, Vec<RangeWarning>)> {
    if start > end {
        return Err(Error::InvalidRange { start, end });
    }
    ensure_unique(tickers)?;
    if tickers.is_empty() {
        return Err(Error::InvalidTable("no tickers requested".into()));
    }

    let mut series = Vec::with_capacity(tickers.len());
    for ticker in tickers {
        let path = data_dir.join(ticker.file_name());
        if !path.is_file() {
            return Err(Error::MissingFile {
                ticker: ticker.to_string(),
                path,
            });
        }
        let points: BTreeMap<NaiveDate, T> = read_adj_close::<T>(&path)?
            .into_iter()
            .filter(|(d, _)| (start..=end).contains(d))
            .collect();
        series.push(points);
    }

    let mut common: BTreeSet<NaiveDate> = series[0].keys().copied().collect();
    for points in &series[1..] {
        common.retain(|d| points.contains_key(d));
    }
    if common.len() < MIN_PRICE_ROWS {
        return Err(Error::InsufficientHistory {
            found: common.len(),
            required: MIN_PRICE_ROWS,
        });
    }

    let warnings = range_warnings(tickers, &series);
    let dates: Vec<NaiveDate> = common.into_iter().collect();
    let rows = dates
        .iter()
        .map(|d| series.iter().map(|points| points[d]).collect())
        .collect();
    let table = PriceTable::new(dates, tickers.to_vec(), rows)?;
    Ok((table, warnings))
}

fn range_warnings<T>(tickers: &[Ticker], series: &[BTreeMap<NaiveDate, T>]) -> Vec<RangeWarning> {
    if tickers.len() < 2 {
        return Vec::new();
    }
    let firsts: Vec<_> = series.iter().map(|s| s.keys().next().copied()).collect();
    let lasts: Vec<_> = series.iter().map(|s| s.keys().next_back().copied()).collect();
    let (earliest, latest_start) = (firsts.iter().min().unwrap(), firsts.iter().max().unwrap());
    let (earliest_end, latest) = (lasts.iter().min().unwrap(), lasts.iter().max().unwrap());

    let mut warnings = Vec::new();
    for (k, ticker) in tickers.iter().enumerate() {
        if let (Some(first), Some(last)) = (firsts[k], lasts[k]) {
            if earliest < latest_start && firsts[k] == *latest_start {
                warnings.push(RangeWarning {
                    ticker: ticker.clone(),
                    message: format!("history starts {first}, truncating the common range"),
                });
            }
            if earliest_end < latest && lasts[k] == *earliest_end {
                warnings.push(RangeWarning {
                    ticker: ticker.clone(),
                    message: format!("history ends {last}, truncating the common range"),
                });
            }
        }
    }
    warnings
}

/// Reads the `Date` and `Adj Close` columns of one price file. Rows whose
/// adjusted close is `null` or empty are skipped.
pub fn read_adj_close<T: Scalar>(path: &Path) -> Result<Vec<(NaiveDate, T)>> {
    let malformed = |message: String| Error::Malformed {
        path: PathBuf::from(path),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| malformed(e.to_string()))?;
    let header = reader.headers().map_err(|e| malformed(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(malformed(format!(
            "expected header {:?}, found {:?}",
            CSV_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut out = Vec::new();
    let mut previous: Option<NaiveDate> = None;
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| malformed(e.to_string()))?;
        let date = NaiveDate::parse_from_str(&record[0], DATE_FORMAT)
            .map_err(|_| malformed(format!("line {line}: bad date {:?}", &record[0])))?;
        if previous.is_some_and(|p| p >= date) {
            return Err(malformed(format!("line {line}: dates not ascending at {date}")));
        }
        previous = Some(date);

        let raw = record[ADJ_CLOSE].trim();
        if raw.is_empty() || raw == "null" {
            continue;
        }
        let value: f64 = raw
            .parse()
            .map_err(|_| malformed(format!("line {line}: non-numeric price {raw:?}")))?;
        let price = T::of(value);
        if !(value.is_finite() && price.is_finite() && price > T::zero()) {
            return Err(malformed(format!("line {line}: non-positive price {raw}")));
        }
        out.push((date, price));
    }
    Ok(out)
}
